//! CNF formulas: DIMACS input and compilation to netlists.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netlist::{GateKind, Netlist, NetlistBuilder};

/// Clauses of signed 1-based literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for c in &clauses {
            if let Some(l) = c.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::Invalid(format!("literal {l} outside 1..={num_vars}")));
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|l| assignment[l.unsigned_abs() as usize - 1] == (*l > 0))
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }

    /// Uniform random 3-CNF: each clause picks three distinct variables
    /// (fewer if `n < 3`) with independent random signs.
    pub fn random_3cnf(n: usize, m: usize, seed: u64) -> Cnf {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = n.min(3);
        let clauses = (0..m)
            .map(|_| {
                sample(&mut rng, n, k)
                    .into_iter()
                    .map(|v| {
                        let lit = v as i32 + 1;
                        if rng.gen() {
                            lit
                        } else {
                            -lit
                        }
                    })
                    .collect()
            })
            .collect();
        Cnf { num_vars: n, clauses }
    }
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then zero-terminated clauses that may span lines. A line
/// starting with `%` ends the input.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut current_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line, "duplicate problem line"));
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            let [_, "cnf", n, m] = toks[..] else {
                return Err(Error::parse(line, "expected `p cnf <vars> <clauses>`"));
            };
            let n = n
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid variable count `{n}`")))?;
            let m = m
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid clause count `{m}`")))?;
            header = Some((n, m, line));
            continue;
        }
        let Some((n, _, _)) = header else {
            return Err(Error::parse(line, "clause before `p cnf` header"));
        };
        for tok in t.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > n {
                return Err(Error::parse(line, format!("literal {lit} exceeds declared {n} variables")));
            }
            if current.is_empty() {
                current_line = line;
            }
            current.push(lit as i32);
        }
    }
    let Some((n, m, header_line)) = header else {
        return Err(Error::parse(text.lines().count().max(1), "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(Error::parse(current_line, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            header_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf { num_vars: n, clauses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfEncoding {
    pub netlist: Netlist,
    /// Set when the formula contains an empty clause.
    pub unsat_by_construction: bool,
}

/// Netlist computing the formula over inputs `x1..xn`: one shared NOT per
/// negated variable, a balanced OR tree per clause and a balanced AND tree
/// over the clauses. The single declared output carries the formula value.
pub fn encode_cnf(cnf: &Cnf) -> CnfEncoding {
    let mut b = NetlistBuilder::new("_c");
    let inputs: Vec<String> = (1..=cnf.num_vars).map(|i| b.input(format!("x{i}"))).collect();
    let mut unsat = false;
    let mut clause_nets: Vec<String> = Vec::new();
    for clause in &cnf.clauses {
        let mut lits: Vec<String> = Vec::new();
        for l in clause {
            let x = &inputs[l.unsigned_abs() as usize - 1];
            let net = if *l > 0 { x.clone() } else { b.not(x) };
            if !lits.contains(&net) {
                lits.push(net);
            }
        }
        let net = if lits.is_empty() {
            unsat = true;
            b.gate(GateKind::Const(false), &[])
        } else {
            b.or_tree(&lits)
        };
        if !clause_nets.contains(&net) {
            clause_nets.push(net);
        }
    }
    let out = if clause_nets.is_empty() {
        b.gate(GateKind::Const(true), &[])
    } else {
        b.and_tree(&clause_nets)
    };
    b.output(&out);
    CnfEncoding {
        netlist: b.finish(),
        unsat_by_construction: unsat,
    }
}
