//! Logic gates as energy fragments.
//!
//! A gadget's fragment has a ground state for every input pattern, and
//! those ground states carry the correct output. Gadgets built from a truth
//! table give every satisfied row energy 0 and every violated row the
//! penalty `P`. "Physical" gadgets instead carry a user-supplied,
//! input-dependent energy profile on their satisfied rows; they still
//! implement their function but shift different inputs by different
//! amounts, which `symmetrize` removes.

use crate::complexity::ComplexityReport;
use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::exact::{ground_energy, DEFAULT_CAP};
use crate::model::{Assignment, EnergyModel, Role, VarId, K_MAX};
use crate::netlist::{Netlist, NetlistBuilder};
use crate::truth::TruthFunction;

/// Largest input count `symmetrize` accepts.
pub const MAX_SYMMETRIZE_INPUTS: usize = 8;
/// Largest input count `check_edc` and `check_implements` accept.
pub const MAX_CHECK_INPUTS: usize = 16;

/// `output = function(inputs)`, used to test logic consistency of states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub function: TruthFunction,
    pub inputs: Vec<VarId>,
    pub output: VarId,
}

impl Relation {
    pub fn holds(&self, a: &Assignment) -> bool {
        let bits: Vec<bool> = self.inputs.iter().map(|v| a.get(*v)).collect();
        self.function.eval_bits(&bits) == a.get(self.output)
    }

    pub(crate) fn remapped(&self, map: &[VarId]) -> Relation {
        Relation {
            function: self.function.clone(),
            inputs: self.inputs.iter().map(|v| map[v.index()]).collect(),
            output: map[self.output.index()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub inputs: Vec<VarId>,
    pub outputs: Vec<VarId>,
    pub ancillae: Vec<VarId>,
    pub fragment: EnergyModel,
    pub relations: Vec<Relation>,
    pub elements: ComplexityReport,
    /// Energy cost of a single wrong output at the gate level.
    pub penalty: Energy,
}

impl Gadget {
    /// Builds a gadget after checking that the ports are pairwise disjoint,
    /// cover the fragment and that the fragment carries no clamps.
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<VarId>,
        outputs: Vec<VarId>,
        ancillae: Vec<VarId>,
        fragment: EnergyModel,
    ) -> Result<Self> {
        let n = fragment.num_vars();
        let mut seen = vec![false; n];
        for v in inputs.iter().chain(&outputs).chain(&ancillae) {
            if v.index() >= n {
                return Err(Error::UnknownVar(*v));
            }
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(Error::Invalid(format!("variable {v} appears on two ports")));
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("variable {v} is not on any port")));
        }
        if !fragment.clamps().is_empty() {
            return Err(Error::Invalid("gadget fragments carry no clamps".into()));
        }
        if outputs.is_empty() {
            return Err(Error::Invalid("gadget needs an output".into()));
        }
        Ok(Gadget {
            name: name.into(),
            inputs,
            outputs,
            ancillae,
            fragment,
            relations: Vec::new(),
            elements: ComplexityReport::default(),
            penalty: Energy::ONE,
        })
    }

    /// The first (for single-output gadgets, the only) output.
    pub fn output(&self) -> VarId {
        self.outputs[0]
    }

    /// Copies the gadget into `host`, identifying its inputs with `inputs`.
    /// Returns the map from fragment ids to host ids.
    pub fn instantiate(&self, host: &mut EnergyModel, inputs: &[VarId]) -> Result<Vec<VarId>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::Invalid(format!(
                "gadget `{}` takes {} inputs, got {}",
                self.name,
                self.inputs.len(),
                inputs.len()
            )));
        }
        for (i, v) in inputs.iter().enumerate() {
            if inputs[..i].contains(v) {
                return Err(Error::Invalid(format!(
                    "gadget `{}` receives variable {v} on two inputs",
                    self.name
                )));
            }
        }
        let bind: Vec<(VarId, VarId)> = self.inputs.iter().copied().zip(inputs.iter().copied()).collect();
        host.merge(&self.fragment, &bind)
    }

    pub fn instantiated_relations(&self, map: &[VarId]) -> impl Iterator<Item = Relation> + '_ {
        let map = map.to_vec();
        self.relations.iter().map(move |r| r.remapped(&map))
    }

    /// The fragment with input `i` clamped to bit `i` of `x`.
    pub fn with_inputs_clamped(&self, x: usize) -> EnergyModel {
        let mut m = self.fragment.clone();
        for (i, v) in self.inputs.iter().enumerate() {
            m.clamp(*v, x >> i & 1 == 1).unwrap();
        }
        m
    }
}

fn classify(f: &TruthFunction) -> ComplexityReport {
    let mut c = ComplexityReport::default();
    if *f == TruthFunction::not() {
        c.inverters = 1;
    } else if *f == TruthFunction::and() {
        c.ands = 1;
    } else if *f == TruthFunction::or() {
        c.ors = 1;
    } else {
        c.other = 1;
    }
    c
}

fn gate_name(f: &TruthFunction) -> String {
    if *f == TruthFunction::not() {
        "NOT".into()
    } else if *f == TruthFunction::and() {
        "AND".into()
    } else if *f == TruthFunction::or() {
        "OR".into()
    } else {
        let bits: String = f.outputs().iter().map(|b| if *b { '1' } else { '0' }).collect();
        format!("F{}[{bits}]", f.arity())
    }
}

/// Single-term gadget: energy `profile[x]` on row `(x, F(x))` and
/// `profile[x] + penalty` on row `(x, !F(x))`.
fn table_gadget(name: String, f: &TruthFunction, profile: &[Energy], penalty: Energy) -> Result<Gadget> {
    let n = f.arity();
    if n + 1 > K_MAX {
        return Err(Error::ArityOverflow {
            arity: n + 1,
            limit: K_MAX,
        });
    }
    if !penalty.is_positive() {
        return Err(Error::Invalid(format!("penalty must be positive, got {penalty}")));
    }
    let mut fragment = EnergyModel::new();
    let inputs = fragment.add_vars(n, Role::Input);
    let output = fragment.add_var(Role::Output, None);
    let table = (0..1usize << (n + 1))
        .map(|row| {
            let x = row & ((1 << n) - 1);
            let y = row >> n & 1 == 1;
            if y == f.eval(x) {
                profile[x]
            } else {
                profile[x] + penalty
            }
        })
        .collect();
    let mut vars = inputs.clone();
    vars.push(output);
    fragment.add_table(vars, table)?;
    let mut g = Gadget::new(name, inputs.clone(), vec![output], Vec::new(), fragment)?;
    g.relations.push(Relation {
        function: f.clone(),
        inputs,
        output,
    });
    g.elements = classify(f);
    g.penalty = penalty;
    Ok(g)
}

/// Single `(n+1)`-ary term: 0 when the output equals `F(inputs)`, else `P`.
pub fn synthesize_gadget(f: &TruthFunction, penalty: Energy) -> Result<Gadget> {
    let profile = vec![Energy::ZERO; 1 << f.arity()];
    table_gadget(gate_name(f), f, &profile, penalty)
}

/// Gate whose satisfied rows carry the input-dependent energies
/// `profile[x]` (indexed by little-endian input pattern).
pub fn make_physical(f: &TruthFunction, profile: &[Energy], penalty: Energy) -> Result<Gadget> {
    if profile.len() != 1 << f.arity() {
        return Err(Error::Invalid(format!(
            "profile needs {} energies, got {}",
            1usize << f.arity(),
            profile.len()
        )));
    }
    let lo = *profile.iter().min().unwrap();
    let hi = *profile.iter().max().unwrap();
    let spread = hi - lo;
    if penalty <= spread {
        return Err(Error::LogicDominance {
            penalty: penalty.to_string(),
            spread: spread.to_string(),
        });
    }
    table_gadget(format!("physical {}", gate_name(f)), f, profile, penalty)
}

/// The dedicated AND gate with ground energy `e_ab` for inputs `a`, `b`.
pub fn make_physical_and(e00: Energy, e01: Energy, e10: Energy, e11: Energy, penalty: Energy) -> Result<Gadget> {
    make_physical(&TruthFunction::and(), &[e00, e10, e01, e11], penalty)
}

pub fn make_physical_or(e00: Energy, e01: Energy, e10: Energy, e11: Energy, penalty: Energy) -> Result<Gadget> {
    make_physical(&TruthFunction::or(), &[e00, e10, e01, e11], penalty)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdcReport {
    /// Ground energy for each input pattern, minimized over everything else.
    pub per_input_ground: Vec<Energy>,
    pub is_edc: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplementsReport {
    pub implements: bool,
    /// Smallest excess energy of a wrong output over the input's ground
    /// energy; zero when the gadget does not implement the function.
    pub logical_gap: Energy,
}

pub fn check_edc(g: &Gadget) -> Result<EdcReport> {
    let n = g.inputs.len();
    if n > MAX_CHECK_INPUTS {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: MAX_CHECK_INPUTS,
        });
    }
    let per_input_ground = (0..1usize << n)
        .map(|x| ground_energy(&g.with_inputs_clamped(x), DEFAULT_CAP))
        .collect::<Result<Vec<_>>>()?;
    let is_edc = per_input_ground.windows(2).all(|w| w[0] == w[1]);
    Ok(EdcReport {
        per_input_ground,
        is_edc,
    })
}

pub fn check_implements(g: &Gadget, f: &TruthFunction) -> Result<ImplementsReport> {
    check_implements_all(g, std::slice::from_ref(f))
}

/// Multi-output form: `fs[k]` is the function expected on `g.outputs[k]`.
pub fn check_implements_all(g: &Gadget, fs: &[TruthFunction]) -> Result<ImplementsReport> {
    let n = g.inputs.len();
    if fs.len() != g.outputs.len() || fs.iter().any(|f| f.arity() != n) {
        return Err(Error::Invalid(format!(
            "gadget `{}` has {} inputs and {} outputs; functions do not match",
            g.name,
            n,
            g.outputs.len()
        )));
    }
    if n > MAX_CHECK_INPUTS {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: MAX_CHECK_INPUTS,
        });
    }
    let mut gap: Option<Energy> = None;
    for x in 0..1usize << n {
        let base = g.with_inputs_clamped(x);
        let ground = ground_energy(&base, DEFAULT_CAP)?;
        for (out, f) in g.outputs.iter().zip(fs) {
            let mut wrong = base.clone();
            wrong.clamp(*out, !f.eval(x))?;
            let excess = ground_energy(&wrong, DEFAULT_CAP)? - ground;
            gap = Some(gap.map_or(excess, |gp| gp.min(excess)));
        }
    }
    let gap = gap.unwrap_or(Energy::ZERO);
    Ok(ImplementsReport {
        implements: gap.is_positive(),
        logical_gap: gap,
    })
}

/// Input symmetrization.
///
/// The result contains `2^n` copies of `g` plus one shared inverter per
/// input. Copy `s` reads the pattern `x ^ s`, so for every actual input the
/// copies jointly cover all `2^n` patterns and the ground energy is the sum
/// of `g`'s per-pattern ground energies. Copy 0's output is the result;
/// the other copies' outputs are kept as ancillae.
pub fn symmetrize(g: &Gadget) -> Result<Gadget> {
    let n = g.inputs.len();
    if g.outputs.len() != 1 {
        return Err(Error::Invalid("symmetrize needs a single-output gadget".into()));
    }
    if n > MAX_SYMMETRIZE_INPUTS {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: MAX_SYMMETRIZE_INPUTS,
        });
    }
    let inverter = synthesize_gadget(&TruthFunction::not(), g.penalty)?;
    let mut frag = EnergyModel::new();
    let xs = frag.add_vars(n, Role::Input);
    let c0 = frag.add_var(Role::Output, None);
    let mut relations = Vec::new();

    let mut bind: Vec<(VarId, VarId)> = g.inputs.iter().copied().zip(xs.iter().copied()).collect();
    bind.push((g.output(), c0));
    let map = frag.merge(&g.fragment, &bind)?;
    relations.extend(g.instantiated_relations(&map));

    let mut negated = Vec::with_capacity(n);
    for x in &xs {
        let map = inverter.instantiate(&mut frag, &[*x])?;
        relations.extend(inverter.instantiated_relations(&map));
        negated.push(map[inverter.output().index()]);
    }
    for s in 1..1usize << n {
        let ins: Vec<VarId> = (0..n)
            .map(|i| if s >> i & 1 == 1 { negated[i] } else { xs[i] })
            .collect();
        let map = g.instantiate(&mut frag, &ins)?;
        relations.extend(g.instantiated_relations(&map));
    }
    frag.join_terms(0..frag.terms().len());
    let ancillae: Vec<VarId> = (n + 1..frag.num_vars()).map(VarId).collect();
    for v in &ancillae {
        frag.set_role(*v, Role::Ancilla);
        frag.set_label(*v, None);
    }
    let mut out = Gadget::new(format!("symmetrized {}", g.name), xs, vec![c0], ancillae, frag)?;
    out.relations = relations;
    out.elements = g.elements * (1 << n) + inverter.elements * n;
    out.penalty = g.penalty;
    Ok(out)
}

/// Two-level AND/OR/NOT netlist computing `f` over inputs `x0..x{n-1}`.
pub fn decompose_to_basis(f: &TruthFunction) -> Netlist {
    let mut b = NetlistBuilder::new("_t");
    let ins: Vec<String> = (0..f.arity()).map(|i| b.input(format!("x{i}"))).collect();
    let out = b.sop(f, &ins);
    b.output(&out);
    b.finish()
}

/// Per-pattern ground energies of `g`, summed: the input-independent
/// ground energy of `symmetrize(g)`.
pub fn pattern_sum(report: &EdcReport) -> Energy {
    report.per_input_ground.iter().copied().sum()
}
