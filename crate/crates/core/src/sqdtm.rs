//! Deterministic Turing machines as static lattices.
//!
//! A machine with step bound `p` becomes `p + 1` rows of `p` register
//! wires (the tape before each step, plus the final tape) and a `p x p`
//! grid of finite-state-control cells. Cell `(i, j)` reads register
//! `(i, j)`, writes register `(i + 1, j)`, and exchanges the head through
//! two move buses: its up-bus feeds cell `(i + 1, j + 1)` and its down-bus
//! feeds cell `(i + 1, j - 1)`. A bus carries the head's state code, with
//! 0 meaning "no head here". A cell without an incoming head copies its
//! register forward. Heads leaving the grid, and heads in a halting state,
//! disappear.
//!
//! Positions and the decision cell are 1-based throughout; "Up" moves to
//! the next higher tape index.

use std::fmt::Write as _;

use crate::complexity::ComplexityReport;
use crate::error::{Error, Result};
use crate::exact::{enumerate_ground_states, DEFAULT_CAP};
use crate::gadget::Gadget;
use crate::model::{Assignment, EnergyModel, Role, VarId};
use crate::netlist::NetlistBuilder;
use crate::network::{compile_netlist, CompileOptions, Network};
use crate::truth::TruthFunction;

/// Widest head bus supported by the cell compiler.
pub const MAX_BUS_WIDTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub next: usize,
    pub write: bool,
    pub movement: Move,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtmSpec {
    pub states: Vec<String>,
    pub start: usize,
    pub halting: Vec<bool>,
    /// `delta[q][bit]`; `None` exactly for halting states.
    pub delta: Vec<[Option<Transition>; 2]>,
    /// 1-based tape index holding the answer bit.
    pub decision: Option<usize>,
}

impl DtmSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if n == 0 {
            return Err(Error::Invalid("machine has no states".into()));
        }
        if self.start >= n || self.halting.len() != n || self.delta.len() != n {
            return Err(Error::Invalid("machine tables are inconsistent".into()));
        }
        for q in 0..n {
            for bit in 0..2 {
                match (&self.delta[q][bit], self.halting[q]) {
                    (None, false) => {
                        return Err(Error::Invalid(format!(
                            "no transition for state `{}` reading {bit}",
                            self.states[q]
                        )))
                    }
                    (Some(_), true) => {
                        return Err(Error::Invalid(format!(
                            "halting state `{}` has a transition",
                            self.states[q]
                        )))
                    }
                    (Some(t), false) if t.next >= n => {
                        return Err(Error::Invalid(format!("transition into unknown state {}", t.next)))
                    }
                    _ => {}
                }
            }
        }
        if self.decision == Some(0) {
            return Err(Error::Invalid("decision cell is 1-based".into()));
        }
        Ok(())
    }

    /// Bits needed to encode every state plus "no head".
    pub fn bus_width(&self) -> usize {
        let mut s = 0;
        while (1usize << s) < self.states.len() + 1 {
            s += 1;
        }
        s
    }

    pub fn code(&self, state: usize) -> usize {
        state + 1
    }

    fn state_index(&self, name: &str, line: usize) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::parse(line, format!("undeclared state `{name}`")))
    }

    /// ```text
    /// STATE <name>
    /// START <name>
    /// HALT <name>
    /// DECISION <j>
    /// DELTA <q> <0|1> -> <q'> <0|1> <U|D>
    /// ```
    pub fn parse(text: &str) -> Result<DtmSpec> {
        let mut dtm = DtmSpec {
            states: Vec::new(),
            start: usize::MAX,
            halting: Vec::new(),
            delta: Vec::new(),
            decision: None,
        };
        let bit = |s: &str, line| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(Error::parse(line, format!("expected 0 or 1, got `{s}`"))),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            match toks[..] {
                ["STATE", name] => {
                    if dtm.states.iter().any(|s| s == name) {
                        return Err(Error::parse(line, format!("state `{name}` declared twice")));
                    }
                    dtm.states.push(name.to_string());
                    dtm.halting.push(false);
                    dtm.delta.push([None, None]);
                }
                ["START", name] => {
                    if dtm.start != usize::MAX {
                        return Err(Error::parse(line, "START given twice"));
                    }
                    dtm.start = dtm.state_index(name, line)?;
                }
                ["HALT", name] => {
                    let q = dtm.state_index(name, line)?;
                    dtm.halting[q] = true;
                }
                ["DECISION", j] => {
                    let j: usize = j
                        .parse()
                        .ok()
                        .filter(|j| *j >= 1)
                        .ok_or_else(|| Error::parse(line, format!("invalid decision cell `{j}`")))?;
                    dtm.decision = Some(j);
                }
                ["DELTA", q, read, "->", next, write, mv] => {
                    let q = dtm.state_index(q, line)?;
                    let read = bit(read, line)?;
                    let next = dtm.state_index(next, line)?;
                    let write = bit(write, line)?;
                    let movement = match mv {
                        "U" => Move::Up,
                        "D" => Move::Down,
                        _ => return Err(Error::parse(line, format!("move must be U or D, got `{mv}`"))),
                    };
                    let slot = &mut dtm.delta[q][usize::from(read)];
                    if slot.is_some() {
                        return Err(Error::parse(line, "duplicate transition"));
                    }
                    *slot = Some(Transition { next, write, movement });
                }
                _ => return Err(Error::parse(line, format!("cannot parse `{content}`"))),
            }
        }
        if dtm.start == usize::MAX {
            return Err(Error::parse(text.lines().count().max(1), "missing START"));
        }
        dtm.validate()?;
        Ok(dtm)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for name in &self.states {
            writeln!(s, "STATE {name}").unwrap();
        }
        writeln!(s, "START {}", self.states[self.start]).unwrap();
        for (q, h) in self.halting.iter().enumerate() {
            if *h {
                writeln!(s, "HALT {}", self.states[q]).unwrap();
            }
        }
        if let Some(j) = self.decision {
            writeln!(s, "DECISION {j}").unwrap();
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (read, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    let mv = if t.movement == Move::Up { "U" } else { "D" };
                    writeln!(
                        s,
                        "DELTA {} {read} -> {} {} {mv}",
                        self.states[q],
                        self.states[t.next],
                        u8::from(t.write)
                    )
                    .unwrap();
                }
            }
        }
        s
    }
}

/// Outputs of one cell for one input row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellOutput {
    pub write: bool,
    pub down: usize,
    pub up: usize,
}

/// Complete truth map of a cell. Input row index is
/// `R | ID << 1 | IU << (1 + width)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SfscFunction {
    pub width: usize,
    pub rows: Vec<CellOutput>,
}

impl SfscFunction {
    pub fn num_inputs(&self) -> usize {
        1 + 2 * self.width
    }

    pub fn row_index(&self, read: bool, down_in: usize, up_in: usize) -> usize {
        usize::from(read) | down_in << 1 | up_in << (1 + self.width)
    }

    pub fn eval(&self, read: bool, down_in: usize, up_in: usize) -> CellOutput {
        self.rows[self.row_index(read, down_in, up_in)]
    }

    /// One function per output bit: W, then the down bus, then the up bus.
    pub fn truth_functions(&self) -> Vec<TruthFunction> {
        let s = self.width;
        let mut fs = vec![TruthFunction::from_fn(self.num_inputs(), |x| self.rows[x].write)];
        for b in 0..s {
            fs.push(TruthFunction::from_fn(self.num_inputs(), |x| self.rows[x].down >> b & 1 == 1));
        }
        for b in 0..s {
            fs.push(TruthFunction::from_fn(self.num_inputs(), |x| self.rows[x].up >> b & 1 == 1));
        }
        fs
    }

    /// Flips output bit `bit` (numbered as in `truth_functions`) of `row`.
    pub fn corrupt(&mut self, row: usize, bit: usize) {
        let s = self.width;
        let out = &mut self.rows[row];
        if bit == 0 {
            out.write = !out.write;
        } else if bit <= s {
            out.down ^= 1 << (bit - 1);
        } else {
            out.up ^= 1 << (bit - 1 - s);
        }
    }
}

pub fn build_sfsc_function(dtm: &DtmSpec) -> Result<SfscFunction> {
    dtm.validate()?;
    let s = dtm.bus_width();
    let n_states = dtm.states.len();
    let mut rows = Vec::with_capacity(1 << (1 + 2 * s));
    for x in 0..1usize << (1 + 2 * s) {
        let read = x & 1 == 1;
        let down_in = x >> 1 & ((1 << s) - 1);
        let up_in = x >> (1 + s);
        let pass = CellOutput {
            write: read,
            down: 0,
            up: 0,
        };
        let code = match (down_in, up_in) {
            (0, 0) => None,
            (c, 0) | (0, c) => Some(c),
            _ => None,
        };
        let out = match code {
            Some(c) if c <= n_states && !dtm.halting[c - 1] => {
                let t = dtm.delta[c - 1][usize::from(read)].expect("validated");
                let bus = dtm.code(t.next);
                match t.movement {
                    Move::Up => CellOutput {
                        write: t.write,
                        down: 0,
                        up: bus,
                    },
                    Move::Down => CellOutput {
                        write: t.write,
                        down: bus,
                        up: 0,
                    },
                }
            }
            _ => pass,
        };
        rows.push(out);
    }
    Ok(SfscFunction { width: s, rows })
}

/// A compiled cell and its element count `M`.
#[derive(Clone, Debug)]
pub struct SfscGadget {
    pub function: SfscFunction,
    pub gadget: Gadget,
    pub m: usize,
}

/// Sum-of-products decomposition of every output bit (products and
/// inverters shared between outputs), compiled under `opts`.
pub fn build_sfsc_gadget(f: &SfscFunction, opts: &CompileOptions) -> Result<SfscGadget> {
    if f.width > MAX_BUS_WIDTH {
        return Err(Error::WidthOverflow {
            width: f.width,
            max: MAX_BUS_WIDTH,
        });
    }
    let s = f.width;
    let mut b = NetlistBuilder::new("_s");
    let mut inputs = vec![b.input("R")];
    inputs.extend((0..s).map(|k| b.input(format!("ID{k}"))));
    inputs.extend((0..s).map(|k| b.input(format!("IU{k}"))));
    let mut used: Vec<String> = inputs.clone();
    for tf in f.truth_functions() {
        let mut net = b.sop(&tf, &inputs);
        if used.contains(&net) {
            net = b.buffer(&net);
        }
        used.push(net.clone());
        b.output(&net);
    }
    let network = compile_netlist(&b.finish(), opts)?;
    let gadget = network.into_gadget("sfsc")?;
    let m = gadget.elements.total();
    Ok(SfscGadget {
        function: f.clone(),
        gadget,
        m,
    })
}

/// Variables attached to one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPorts {
    pub read: VarId,
    pub write: VarId,
    pub down_in: Vec<VarId>,
    pub up_in: Vec<VarId>,
    pub down_out: Vec<VarId>,
    pub up_out: Vec<VarId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePlan {
    pub p: usize,
    pub head_start: usize,
    pub width: usize,
    pub tape_clamped: bool,
    /// `registers[i][j]` is wire `(i + 1, j + 1)`; `p + 1` rows.
    pub registers: Vec<Vec<VarId>>,
    /// `cells[i][j]` is cell `(i + 1, j + 1)`.
    pub cells: Vec<Vec<CellPorts>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SqdtmComplexity {
    /// Elements per cell.
    pub m: usize,
    pub p: usize,
    /// `m * p^2`.
    pub sfsc_elements: usize,
    /// `(p + 1) * p` register wires.
    pub registers: usize,
    pub total: usize,
    /// `(m + 1) * p^2`.
    pub bound: usize,
}

impl SqdtmComplexity {
    fn new(m: usize, p: usize) -> Self {
        let sfsc_elements = m * p * p;
        let registers = (p + 1) * p;
        SqdtmComplexity {
            m,
            p,
            sfsc_elements,
            registers,
            total: sfsc_elements + registers,
            bound: (m + 1) * p * p,
        }
    }

    /// The extra register row costs exactly `p` elements over the bound.
    pub fn within_bound(&self) -> bool {
        self.total <= self.bound + self.p
    }

    pub fn report(&self) -> String {
        format!(
            "M={}\np={}\nsfsc_elements={} (M*p^2={})\nregisters={} ((p+1)*p)\ntotal={}\nbound={} ((M+1)*p^2)\nbound_with_extra_row={}\nwithin_bound={}",
            self.m,
            self.p,
            self.sfsc_elements,
            self.m * self.p * self.p,
            self.registers,
            self.total,
            self.bound,
            self.bound + self.p,
            self.within_bound()
        )
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    pub network: Network,
    pub plan: LatticePlan,
    pub complexity: SqdtmComplexity,
}

impl Lattice {
    pub fn register_rows(&self, a: &Assignment) -> Vec<Vec<bool>> {
        self.plan
            .registers
            .iter()
            .map(|row| row.iter().map(|v| a.get(*v)).collect())
            .collect()
    }
}

fn bus_value(a: &Assignment, bus: &[VarId]) -> usize {
    bus.iter()
        .enumerate()
        .fold(0, |acc, (k, v)| acc | (usize::from(a.get(*v)) << k))
}

/// Builds the lattice with a cell compiled from `dtm` under `opts`.
pub fn build_lattice(
    dtm: &DtmSpec,
    p: usize,
    head_start: usize,
    tape_in: Option<&[bool]>,
    opts: &CompileOptions,
) -> Result<Lattice> {
    let cell = build_sfsc_gadget(&build_sfsc_function(dtm)?, opts)?;
    build_lattice_with(dtm, &cell, p, head_start, tape_in)
}

/// Builds the lattice around a given cell, which need not be the one
/// derived from `dtm` (used to test that corrupted cells are detected).
pub fn build_lattice_with(
    dtm: &DtmSpec,
    cell: &SfscGadget,
    p: usize,
    head_start: usize,
    tape_in: Option<&[bool]>,
) -> Result<Lattice> {
    dtm.validate()?;
    if p == 0 || head_start == 0 || head_start > p {
        return Err(Error::HeadStart { head_start, p });
    }
    if let Some(t) = tape_in {
        if t.len() != p {
            return Err(Error::Invalid(format!("tape has {} cells, lattice needs {p}", t.len())));
        }
    }
    if let Some(d) = dtm.decision {
        if d > p {
            return Err(Error::Invalid(format!("decision cell {d} outside tape of length {p}")));
        }
    }
    let s = cell.function.width;
    let g = &cell.gadget;
    let start_code = dtm.code(dtm.start);
    if start_code >= 1 << s {
        return Err(Error::Invalid("start state does not fit the cell bus".into()));
    }

    let mut model = EnergyModel::new();
    let mut relations = Vec::new();
    let mut registers: Vec<Vec<VarId>> = Vec::with_capacity(p + 1);
    registers.push(
        (1..=p)
            .map(|j| model.add_var(Role::Input, Some(format!("r1_{j}"))))
            .collect(),
    );
    if let Some(t) = tape_in {
        for (v, b) in registers[0].iter().zip(t) {
            model.clamp(*v, *b)?;
        }
    }
    let constant_bus = |model: &mut EnergyModel, value: usize, name: String| -> Vec<VarId> {
        (0..s)
            .map(|k| model.add_constant(value >> k & 1 == 1, Some(format!("{name}{k}"))))
            .collect()
    };

    let mut cells: Vec<Vec<CellPorts>> = Vec::with_capacity(p);
    for i in 1..=p {
        let mut row_cells: Vec<CellPorts> = Vec::with_capacity(p);
        let mut next_row = Vec::with_capacity(p);
        for j in 1..=p {
            let read = registers[i - 1][j - 1];
            let down_in = if i > 1 && j < p {
                cells[i - 2][j].down_out.clone()
            } else {
                constant_bus(&mut model, 0, format!("id{i}_{j}_"))
            };
            let up_in = if i > 1 && j > 1 {
                cells[i - 2][j - 2].up_out.clone()
            } else {
                let code = if i == 1 && j == head_start { start_code } else { 0 };
                constant_bus(&mut model, code, format!("iu{i}_{j}_"))
            };
            let mut ins = vec![read];
            ins.extend(&down_in);
            ins.extend(&up_in);
            let map = g.instantiate(&mut model, &ins)?;
            relations.extend(g.instantiated_relations(&map));
            let outs: Vec<VarId> = g.outputs.iter().map(|v| map[v.index()]).collect();
            let write = outs[0];
            model.set_role(write, if i == p { Role::Output } else { Role::Wire });
            model.set_label(write, Some(format!("r{}_{j}", i + 1)));
            for (k, v) in outs[1..=s].iter().enumerate() {
                model.set_role(*v, Role::Wire);
                model.set_label(*v, Some(format!("od{i}_{j}_{k}")));
            }
            for (k, v) in outs[s + 1..].iter().enumerate() {
                model.set_role(*v, Role::Wire);
                model.set_label(*v, Some(format!("ou{i}_{j}_{k}")));
            }
            next_row.push(write);
            row_cells.push(CellPorts {
                read,
                write,
                down_in,
                up_in,
                down_out: outs[1..=s].to_vec(),
                up_out: outs[s + 1..].to_vec(),
            });
        }
        registers.push(next_row);
        cells.push(row_cells);
    }

    let mut port_map = std::collections::BTreeMap::new();
    for (i, row) in registers.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            port_map.insert(format!("r{}_{}", i + 1, j + 1), *v);
        }
    }
    let inputs: Vec<String> = (1..=p).map(|j| format!("r1_{j}")).collect();
    let mut outputs: Vec<String> = (1..=p).map(|j| format!("r{}_{j}", p + 1)).collect();
    if let Some(d) = dtm.decision {
        port_map.insert("decision".into(), registers[p][d - 1]);
        outputs.push("decision".into());
    }
    let complexity = SqdtmComplexity::new(cell.m, p);
    let elements = g.elements * (p * p)
        + ComplexityReport {
            registers: complexity.registers,
            ..Default::default()
        };
    let network = Network {
        model,
        port_map,
        inputs,
        outputs,
        elements,
        relations,
        penalty: g.penalty,
    };
    Ok(Lattice {
        network,
        plan: LatticePlan {
            p,
            head_start,
            width: s,
            tape_clamped: tape_in.is_some(),
            registers,
            cells,
        },
        complexity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Head {
    /// 1-based tape index.
    pub pos: usize,
    pub state: usize,
}

/// Direct step-by-step run of a machine on a tape of length `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct History {
    /// `p + 1` tape rows; row `i` is the tape before step `i + 1`.
    pub rows: Vec<Vec<bool>>,
    /// Head before each step plus the head after the last step.
    pub heads: Vec<Option<Head>>,
    /// State entered and move made at each step, if the head acted.
    pub actions: Vec<Option<(usize, Move)>>,
}

pub fn simulate_dtm_oracle(dtm: &DtmSpec, tape: &[bool], head_start: usize, p: usize) -> Result<History> {
    dtm.validate()?;
    if tape.len() != p {
        return Err(Error::Invalid(format!("tape has {} cells, expected {p}", tape.len())));
    }
    if head_start == 0 || head_start > p {
        return Err(Error::HeadStart { head_start, p });
    }
    let mut rows = vec![tape.to_vec()];
    let mut heads = vec![Some(Head {
        pos: head_start,
        state: dtm.start,
    })];
    let mut actions = Vec::with_capacity(p);
    for step in 0..p {
        let mut row = rows[step].clone();
        let (next_head, action) = match heads[step] {
            Some(h) if !dtm.halting[h.state] => {
                let t = dtm.delta[h.state][usize::from(row[h.pos - 1])].expect("validated");
                row[h.pos - 1] = t.write;
                let pos = match t.movement {
                    Move::Up => h.pos + 1,
                    Move::Down => h.pos - 1,
                };
                let head = (1..=p).contains(&pos).then_some(Head { pos, state: t.next });
                (head, Some((t.next, t.movement)))
            }
            _ => (None, None),
        };
        rows.push(row);
        heads.push(next_head);
        actions.push(action);
    }
    Ok(History { rows, heads, actions })
}

/// Checks that the lattice's ground states are exactly the oracle's
/// histories, one per admissible input tape.
pub fn verify_ground_histories(lattice: &Lattice, dtm: &DtmSpec) -> Result<bool> {
    verify_ground_histories_capped(lattice, dtm, DEFAULT_CAP)
}

pub fn verify_ground_histories_capped(lattice: &Lattice, dtm: &DtmSpec, cap: u64) -> Result<bool> {
    let plan = &lattice.plan;
    let p = plan.p;
    let ground = enumerate_ground_states(&lattice.network.model, cap)?;
    let expected = if plan.tape_clamped { 1 } else { 1usize << p };
    if ground.states.len() != expected {
        return Ok(false);
    }
    let mut tapes = std::collections::BTreeSet::new();
    for a in &ground.states {
        let rows = lattice.register_rows(a);
        if !tapes.insert(rows[0].clone()) {
            return Ok(false);
        }
        let h = simulate_dtm_oracle(dtm, &rows[0], plan.head_start, p)?;
        if rows != h.rows {
            return Ok(false);
        }
        for i in 0..p {
            for j in 0..p {
                let cell = &plan.cells[i][j];
                let (mut up, mut down) = (0, 0);
                if let (Some(head), Some((next, mv))) = (h.heads[i], h.actions[i]) {
                    if head.pos == j + 1 {
                        match mv {
                            Move::Up => up = dtm.code(next),
                            Move::Down => down = dtm.code(next),
                        }
                    }
                }
                if bus_value(a, &cell.up_out) != up || bus_value(a, &cell.down_out) != down {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// In `a`, every cell row has at most one cell with a nonzero incoming bus.
pub fn single_head(lattice: &Lattice, a: &Assignment) -> bool {
    lattice.plan.cells.iter().all(|row| {
        row.iter()
            .filter(|c| bus_value(a, &c.up_in) != 0 || bus_value(a, &c.down_in) != 0)
            .count()
            <= 1
    })
}
