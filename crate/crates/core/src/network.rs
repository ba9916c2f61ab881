//! Composing gadgets into networks.
//!
//! Every net of a netlist becomes one shared variable; connecting a gate
//! to a net identifies the gate's port variable with the net's variable.
//! Variables are allocated in signal-flow order (inputs, then each gate's
//! output followed by its ancillae, gates in topological order), which the
//! exact solver exploits.

use std::collections::BTreeMap;

use crate::complexity::ComplexityReport;
use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::gadget::{make_physical, symmetrize, synthesize_gadget, Gadget, Relation};
use crate::model::{Assignment, EnergyModel, Role, VarId};
use crate::netlist::{GateKind, Netlist};
use crate::truth::TruthFunction;

/// Satisfied-row energies of the "physical" AND and OR gates, indexed by
/// little-endian input pattern `a | b << 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhysicalProfile {
    pub and: [Energy; 4],
    pub or: [Energy; 4],
}

impl Default for PhysicalProfile {
    fn default() -> Self {
        let (z, m) = (Energy::ZERO, Energy::int(-1));
        PhysicalProfile {
            and: [z, z, z, m],
            or: [z, m, m, m],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Each gate is a single 0/P penalty term.
    Penalty,
    /// AND and OR are physical gates made EDC by symmetrization; NOT is a
    /// plain inverter.
    EdcSymmetrized(PhysicalProfile),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireOptions {
    pub length: usize,
    pub coupling: Energy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub policy: Policy,
    pub penalty: Energy,
    /// When set, every gate input reads its net through an explicit wire
    /// chain instead of sharing the net's variable.
    pub wires: Option<WireOptions>,
}

impl CompileOptions {
    pub fn penalty(p: Energy) -> Self {
        CompileOptions {
            policy: Policy::Penalty,
            penalty: p,
            wires: None,
        }
    }

    pub fn edc(p: Energy) -> Self {
        CompileOptions {
            policy: Policy::EdcSymmetrized(PhysicalProfile::default()),
            penalty: p,
            wires: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub model: EnergyModel,
    /// Net name to variable.
    pub port_map: BTreeMap<String, VarId>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub elements: ComplexityReport,
    /// Every gate-level relation, including those inside gadgets.
    pub relations: Vec<Relation>,
    /// Minimum energy cost of violating one gate relation.
    pub penalty: Energy,
}

impl Network {
    pub fn port(&self, net: &str) -> Result<VarId> {
        self.port_map
            .get(net)
            .copied()
            .ok_or_else(|| Error::UnknownNet(net.to_string()))
    }

    pub fn input_vars(&self) -> Vec<VarId> {
        self.inputs.iter().map(|n| self.port_map[n]).collect()
    }

    pub fn output_vars(&self) -> Vec<VarId> {
        self.outputs.iter().map(|n| self.port_map[n]).collect()
    }

    pub fn is_logic_consistent(&self, a: &Assignment) -> bool {
        self.relations.iter().all(|r| r.holds(a))
    }

    /// Views the network as a gadget over its declared inputs and outputs.
    pub fn into_gadget(self, name: impl Into<String>) -> Result<Gadget> {
        let inputs = self.input_vars();
        let outputs = self.output_vars();
        let mut on_port = vec![false; self.model.num_vars()];
        for v in inputs.iter().chain(&outputs) {
            on_port[v.index()] = true;
        }
        let ancillae = (0..self.model.num_vars())
            .filter(|v| !on_port[*v])
            .map(VarId)
            .collect();
        let mut g = Gadget::new(name, inputs, outputs, ancillae, self.model)?;
        g.relations = self.relations;
        g.elements = self.elements;
        g.penalty = self.penalty;
        Ok(g)
    }
}

/// `L` variables with `L - 1` agreement couplings: 0 for equal
/// neighbours, `J` otherwise. The two ground states are all-0 and all-1.
pub fn make_wire_chain(length: usize, coupling: Energy) -> Result<Gadget> {
    if length < 2 {
        return Err(Error::Invalid(format!("wire chain needs length >= 2, got {length}")));
    }
    if !coupling.is_positive() {
        return Err(Error::Invalid(format!("wire coupling must be positive, got {coupling}")));
    }
    let mut frag = EnergyModel::new();
    let vars = frag.add_vars(length, Role::Wire);
    let mut relations = Vec::new();
    for w in vars.windows(2) {
        frag.add_table(w.to_vec(), vec![Energy::ZERO, coupling, coupling, Energy::ZERO])?;
        relations.push(Relation {
            function: TruthFunction::identity(),
            inputs: vec![w[0]],
            output: w[1],
        });
    }
    let mut g = Gadget::new(
        format!("wire[{length}]"),
        vec![vars[0]],
        vec![vars[length - 1]],
        vars[1..length - 1].to_vec(),
        frag,
    )?;
    g.relations = relations;
    g.elements.registers = 1;
    g.penalty = coupling;
    Ok(g)
}

struct Prototypes {
    and: Gadget,
    or: Gadget,
    not: Gadget,
}

impl Prototypes {
    fn new(opts: &CompileOptions) -> Result<Self> {
        let p = opts.penalty;
        let not = synthesize_gadget(&TruthFunction::not(), p)?;
        Ok(match &opts.policy {
            Policy::Penalty => Prototypes {
                and: synthesize_gadget(&TruthFunction::and(), p)?,
                or: synthesize_gadget(&TruthFunction::or(), p)?,
                not,
            },
            Policy::EdcSymmetrized(profile) => Prototypes {
                and: symmetrize(&make_physical(&TruthFunction::and(), &profile.and, p)?)?,
                or: symmetrize(&make_physical(&TruthFunction::or(), &profile.or, p)?)?,
                not,
            },
        })
    }
}

pub fn compile_netlist(nl: &Netlist, opts: &CompileOptions) -> Result<Network> {
    let order = nl.validate()?;
    let protos = Prototypes::new(opts)?;
    let chain = opts
        .wires
        .as_ref()
        .map(|w| make_wire_chain(w.length, w.coupling))
        .transpose()?;

    let mut model = EnergyModel::new();
    let mut port_map = BTreeMap::new();
    let mut elements = ComplexityReport::default();
    let mut relations = Vec::new();

    for net in nl.inputs() {
        let v = model.add_var(Role::Input, Some(net.clone()));
        port_map.insert(net.clone(), v);
    }
    for gi in order {
        let gate = &nl.gates()[gi];
        let mut ins = Vec::with_capacity(gate.inputs.len());
        for net in &gate.inputs {
            let driver = port_map[net];
            match &chain {
                None => ins.push(driver),
                Some(c) => {
                    let map = c.instantiate(&mut model, &[driver])?;
                    relations.extend(c.instantiated_relations(&map));
                    elements += c.elements;
                    ins.push(map[c.output().index()]);
                }
            }
        }
        let custom;
        let proto = match &gate.kind {
            GateKind::Const(bit) => {
                let v = model.add_constant(*bit, Some(gate.output.clone()));
                port_map.insert(gate.output.clone(), v);
                continue;
            }
            GateKind::And => &protos.and,
            GateKind::Or => &protos.or,
            GateKind::Not => &protos.not,
            GateKind::Custom(f) => {
                custom = synthesize_gadget(f, opts.penalty)?;
                &custom
            }
        };
        let map = proto.instantiate(&mut model, &ins)?;
        let out = map[proto.output().index()];
        model.set_role(out, Role::Wire);
        model.set_label(out, Some(gate.output.clone()));
        port_map.insert(gate.output.clone(), out);
        relations.extend(proto.instantiated_relations(&map));
        elements += proto.elements;
    }
    for net in nl.outputs() {
        let v = port_map[net];
        if model.var(v).role == Role::Wire {
            model.set_role(v, Role::Output);
        }
    }
    Ok(Network {
        model,
        port_map,
        inputs: nl.inputs().to_vec(),
        outputs: nl.outputs().to_vec(),
        elements,
        relations,
        penalty: opts.penalty,
    })
}

pub fn clamp_inputs(net: &Network, bindings: &[(&str, bool)]) -> Result<Network> {
    let mut out = net.clone();
    for (name, bit) in bindings {
        if !net.inputs.iter().any(|n| n == name) {
            return Err(Error::UnknownNet(name.to_string()));
        }
        out.model.clamp(net.port_map[*name], *bit)?;
    }
    Ok(out)
}

pub fn count_elements(net: &Network) -> ComplexityReport {
    net.elements
}
