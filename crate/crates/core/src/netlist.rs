//! Gate-level combinational netlists and their text format.
//!
//! ```text
//! # half adder
//! INPUT a
//! INPUT b
//! OUTPUT s
//! OUTPUT c
//! GATE NOT a -> na
//! GATE NOT b -> nb
//! GATE AND a nb -> t0
//! GATE AND na b -> t1
//! GATE OR t0 t1 -> s
//! GATE AND a b -> c
//! ```
//!
//! `GATE CONST0 -> n` and `GATE CONST1 -> n` declare constant nets.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::truth::TruthFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateKind {
    And,
    Or,
    Not,
    Const(bool),
    Custom(TruthFunction),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            GateKind::Not => 1,
            GateKind::Const(_) => 0,
            GateKind::Custom(f) => f.arity(),
        }
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        match self {
            GateKind::And => inputs[0] && inputs[1],
            GateKind::Or => inputs[0] || inputs[1],
            GateKind::Not => !inputs[0],
            GateKind::Const(b) => *b,
            GateKind::Custom(f) => f.eval_bits(inputs),
        }
    }

    fn keyword(&self) -> Option<&'static str> {
        Some(match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Const(false) => "CONST0",
            GateKind::Const(true) => "CONST1",
            GateKind::Custom(_) => return None,
        })
    }

    fn from_keyword(s: &str) -> Option<GateKind> {
        Some(match s {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NOT" => GateKind::Not,
            "CONST0" => GateKind::Const(false),
            "CONST1" => GateKind::Const(true),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<String>,
    pub output: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Netlist {
    inputs: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<Gate>,
}

impl Netlist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_input(&mut self, net: impl Into<String>) {
        self.inputs.push(net.into());
    }

    pub fn add_output(&mut self, net: impl Into<String>) {
        self.outputs.push(net.into());
    }

    pub fn add_gate(&mut self, kind: GateKind, inputs: Vec<String>, output: impl Into<String>) {
        self.gates.push(Gate {
            kind,
            inputs,
            output: output.into(),
        });
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Checks the structural invariants and returns the gate indices in
    /// topological order.
    pub fn validate(&self) -> Result<Vec<usize>> {
        let mut driver: HashMap<&str, Option<usize>> = HashMap::new();
        for net in &self.inputs {
            if driver.insert(net, None).is_some() {
                return Err(Error::MultipleDrivers(net.clone()));
            }
        }
        for (gi, g) in self.gates.iter().enumerate() {
            if g.inputs.len() != g.kind.arity() {
                return Err(Error::Invalid(format!(
                    "gate driving `{}` takes {} inputs, got {}",
                    g.output,
                    g.kind.arity(),
                    g.inputs.len()
                )));
            }
            if driver.insert(&g.output, Some(gi)).is_some() {
                return Err(Error::MultipleDrivers(g.output.clone()));
            }
        }
        let mut indegree = vec![0usize; self.gates.len()];
        let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (gi, g) in self.gates.iter().enumerate() {
            for net in &g.inputs {
                match driver.get(net.as_str()) {
                    None => return Err(Error::UnknownNet(net.clone())),
                    Some(Some(d)) => {
                        indegree[gi] += 1;
                        consumers[*d].push(gi);
                    }
                    Some(None) => {}
                }
            }
        }
        for net in &self.outputs {
            if !driver.contains_key(net.as_str()) {
                return Err(Error::UnknownNet(net.clone()));
            }
        }
        let mut queue: VecDeque<usize> = (0..self.gates.len()).filter(|g| indegree[*g] == 0).collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(g) = queue.pop_front() {
            order.push(g);
            for &c in &consumers[g] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        if order.len() != self.gates.len() {
            let stuck = (0..self.gates.len()).find(|g| indegree[*g] > 0).unwrap();
            return Err(Error::Cycle(self.gates[stuck].output.clone()));
        }
        Ok(order)
    }

    /// Values of every net for the given input bits.
    pub fn evaluate_all(&self, inputs: &[bool]) -> Result<HashMap<String, bool>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::Invalid(format!(
                "netlist has {} inputs, got {} values",
                self.inputs.len(),
                inputs.len()
            )));
        }
        let order = self.validate()?;
        let mut values: HashMap<String, bool> = self
            .inputs
            .iter()
            .cloned()
            .zip(inputs.iter().copied())
            .collect();
        for gi in order {
            let g = &self.gates[gi];
            let ins: Vec<bool> = g.inputs.iter().map(|n| values[n]).collect();
            values.insert(g.output.clone(), g.kind.eval(&ins));
        }
        Ok(values)
    }

    pub fn evaluate(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        let values = self.evaluate_all(inputs)?;
        Ok(self.outputs.iter().map(|n| values[n]).collect())
    }

    pub fn nets(&self) -> BTreeSet<String> {
        self.inputs
            .iter()
            .cloned()
            .chain(self.gates.iter().map(|g| g.output.clone()))
            .collect()
    }

    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Netlist {
        Netlist {
            inputs: self.inputs.iter().map(|n| f(n)).collect(),
            outputs: self.outputs.iter().map(|n| f(n)).collect(),
            gates: self
                .gates
                .iter()
                .map(|g| Gate {
                    kind: g.kind.clone(),
                    inputs: g.inputs.iter().map(|n| f(n)).collect(),
                    output: f(&g.output),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Netlist> {
        let mut nl = Netlist::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let key = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            match key {
                "INPUT" | "OUTPUT" => {
                    let [net] = rest[..] else {
                        return Err(Error::parse(line_no, format!("{key} takes one net name")));
                    };
                    if key == "INPUT" {
                        nl.add_input(net);
                    } else {
                        nl.add_output(net);
                    }
                }
                "GATE" => {
                    let Some((&kw, tail)) = rest.split_first() else {
                        return Err(Error::parse(line_no, "GATE needs a kind"));
                    };
                    let kind = GateKind::from_keyword(kw)
                        .ok_or_else(|| Error::parse(line_no, format!("unknown gate kind `{kw}`")))?;
                    let Some(arrow) = tail.iter().position(|w| *w == "->") else {
                        return Err(Error::parse(line_no, "missing `->`"));
                    };
                    let ins = &tail[..arrow];
                    let [out] = tail[arrow + 1..] else {
                        return Err(Error::parse(line_no, "expected exactly one output net after `->`"));
                    };
                    if ins.len() != kind.arity() {
                        return Err(Error::parse(
                            line_no,
                            format!("{kw} takes {} inputs, got {}", kind.arity(), ins.len()),
                        ));
                    }
                    nl.add_gate(kind, ins.iter().map(|s| s.to_string()).collect(), out);
                }
                other => return Err(Error::parse(line_no, format!("unknown statement `{other}`"))),
            }
        }
        nl.validate()?;
        Ok(nl)
    }

    pub fn to_text(&self) -> Result<String> {
        let mut s = String::new();
        for n in &self.inputs {
            writeln!(s, "INPUT {n}").unwrap();
        }
        for n in &self.outputs {
            writeln!(s, "OUTPUT {n}").unwrap();
        }
        for g in &self.gates {
            let kw = g
                .kind
                .keyword()
                .ok_or_else(|| Error::Invalid(format!("gate `{}` has no text form", g.output)))?;
            write!(s, "GATE {kw}").unwrap();
            for i in &g.inputs {
                write!(s, " {i}").unwrap();
            }
            writeln!(s, " -> {}", g.output).unwrap();
        }
        Ok(s)
    }
}

/// Incremental netlist construction with generated net names, shared
/// inverters per net and shared product terms.
pub struct NetlistBuilder {
    nl: Netlist,
    prefix: String,
    counter: usize,
    nots: HashMap<String, String>,
    products: HashMap<Vec<String>, String>,
}

impl NetlistBuilder {
    pub fn new(prefix: impl Into<String>) -> Self {
        NetlistBuilder {
            nl: Netlist::new(),
            prefix: prefix.into(),
            counter: 0,
            nots: HashMap::new(),
            products: HashMap::new(),
        }
    }

    pub fn input(&mut self, net: impl Into<String>) -> String {
        let net = net.into();
        self.nl.add_input(net.clone());
        net
    }

    pub fn output(&mut self, net: &str) {
        self.nl.add_output(net);
    }

    pub fn fresh(&mut self) -> String {
        let name = format!("{}{}", self.prefix, self.counter);
        self.counter += 1;
        name
    }

    pub fn gate(&mut self, kind: GateKind, inputs: &[&str]) -> String {
        let out = self.fresh();
        self.nl
            .add_gate(kind, inputs.iter().map(|s| s.to_string()).collect(), out.clone());
        out
    }

    pub fn not(&mut self, net: &str) -> String {
        if let Some(n) = self.nots.get(net) {
            return n.clone();
        }
        let n = self.gate(GateKind::Not, &[net]);
        self.nots.insert(net.to_string(), n.clone());
        n
    }

    /// A fresh net carrying the same value as `net` (two inverters).
    pub fn buffer(&mut self, net: &str) -> String {
        let n = self.gate(GateKind::Not, &[net]);
        self.gate(GateKind::Not, &[&n])
    }

    fn tree(&mut self, kind: GateKind, nets: &[String]) -> String {
        match nets {
            [] => unreachable!("empty gate tree"),
            [one] => one.clone(),
            _ => {
                let mid = nets.len() / 2;
                let l = self.tree(kind.clone(), &nets[..mid]);
                let r = self.tree(kind.clone(), &nets[mid..]);
                self.gate(kind, &[&l, &r])
            }
        }
    }

    /// Balanced tree of two-input AND gates.
    pub fn and_tree(&mut self, nets: &[String]) -> String {
        self.tree(GateKind::And, nets)
    }

    pub fn or_tree(&mut self, nets: &[String]) -> String {
        self.tree(GateKind::Or, nets)
    }

    fn product(&mut self, inputs: &[String], x: usize) -> String {
        let literals: Vec<String> = inputs
            .iter()
            .enumerate()
            .map(|(i, net)| {
                if x >> i & 1 == 1 {
                    net.clone()
                } else {
                    self.not(net)
                }
            })
            .collect();
        if let Some(p) = self.products.get(&literals) {
            return p.clone();
        }
        let p = self.and_tree(&literals);
        self.products.insert(literals, p.clone());
        p
    }

    /// Two-level sum of products of `f` over `inputs`; returns the net
    /// carrying the result. Constant functions of positive arity become
    /// `x & !x` or `x | !x`.
    pub fn sop(&mut self, f: &TruthFunction, inputs: &[String]) -> String {
        assert_eq!(f.arity(), inputs.len(), "arity mismatch");
        if f.arity() == 0 {
            return self.gate(GateKind::Const(f.eval(0)), &[]);
        }
        if let Some(bit) = f.constant_value() {
            let x = inputs[0].clone();
            let nx = self.not(&x);
            let kind = if bit { GateKind::Or } else { GateKind::And };
            return self.gate(kind, &[&x, &nx]);
        }
        let products: Vec<String> = (0..1usize << f.arity())
            .filter(|x| f.eval(*x))
            .map(|x| self.product(inputs, x))
            .collect();
        self.or_tree(&products)
    }

    pub fn finish(self) -> Netlist {
        self.nl
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::bits_of;

    const HALF_ADDER: &str = "\
# half adder
INPUT a
INPUT b
OUTPUT s
OUTPUT c
GATE NOT a -> na
GATE NOT b -> nb
GATE AND a nb -> t0
GATE AND na b -> t1
GATE OR t0 t1 -> s   # sum
GATE AND a b -> c
";

    #[test]
    fn parse_and_evaluate() {
        let nl = Netlist::parse(HALF_ADDER).unwrap();
        assert_eq!(nl.gates().len(), 6);
        for x in 0..4 {
            let (a, b) = (x & 1 == 1, x & 2 == 2);
            assert_eq!(nl.evaluate(&[a, b]).unwrap(), vec![a ^ b, a && b]);
        }
        let again = Netlist::parse(&nl.to_text().unwrap()).unwrap();
        assert_eq!(again, nl);
    }

    #[test]
    fn structural_errors() {
        let cyc = "INPUT a\nOUTPUT y\nGATE AND a z -> y\nGATE NOT y -> z\n";
        assert!(matches!(Netlist::parse(cyc), Err(Error::Cycle(_))));
        let two = "INPUT a\nOUTPUT y\nGATE NOT a -> y\nGATE NOT a -> y\n";
        assert_eq!(Netlist::parse(two), Err(Error::MultipleDrivers("y".into())));
        let undriven = "INPUT a\nOUTPUT y\nGATE AND a q -> y\n";
        assert_eq!(Netlist::parse(undriven), Err(Error::UnknownNet("q".into())));
        let driven_input = "INPUT a\nOUTPUT a\nGATE NOT a -> a\n";
        assert!(matches!(Netlist::parse(driven_input), Err(Error::MultipleDrivers(_))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "INPUT a\n\nGATE XOR a a -> y\n";
        assert_eq!(
            Netlist::parse(bad),
            Err(Error::Parse {
                line: 3,
                msg: "unknown gate kind `XOR`".into()
            })
        );
        assert!(matches!(
            Netlist::parse("INPUT a\nGATE AND a -> y\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Netlist::parse("INPUT a\nGATE NOT a y\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn sop_shares_products_and_inverters() {
        let mut b = NetlistBuilder::new("_n");
        let ins: Vec<String> = (0..3).map(|i| b.input(format!("x{i}"))).collect();
        let maj = TruthFunction::from_fn(3, |x| x.count_ones() >= 2);
        let par = TruthFunction::from_fn(3, |x| x.count_ones() % 2 == 1);
        let y0 = b.sop(&maj, &ins);
        let y1 = b.sop(&par, &ins);
        b.output(&y0);
        b.output(&y1);
        let nl = b.finish();
        for x in 0..8 {
            let out = nl.evaluate(&bits_of(x, 3)).unwrap();
            assert_eq!(out, vec![maj.eval(x), par.eval(x)]);
        }
        let nots = nl.gates().iter().filter(|g| g.kind == GateKind::Not).count();
        assert_eq!(nots, 3);
        // minterm 111 is shared between majority and parity
        let ands = nl.gates().iter().filter(|g| g.kind == GateKind::And).count();
        assert_eq!(ands, 2 * 7);
    }
}
