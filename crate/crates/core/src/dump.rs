//! Line-oriented text form of energy models and gadgets.
//!
//! ```text
//! VAR <id> <role> [label]
//! CLAMP <id> <0|1>
//! TERM <k> <id_1> ... <id_k> : <e_0> ... <e_{2^k-1}>
//! BLOCK <n>                     (the next n terms form one block)
//! PORT <in|out|anc> <id>        (gadgets only)
//! # comment
//! ```
//!
//! Table rows follow the little-endian convention of [`EnergyTerm`].
//! Printing emits variables, then ports, then clamps, then terms, so
//! `print(parse(print(m))) == print(m)`.

use std::fmt::Write as _;

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::gadget::Gadget;
use crate::model::{EnergyModel, EnergyTerm, Role, VarId};

pub fn print_model(m: &EnergyModel) -> String {
    let mut s = String::new();
    write_vars(&mut s, m);
    write_body(&mut s, m);
    s
}

fn write_vars(s: &mut String, m: &EnergyModel) {
    for v in m.variables() {
        write!(s, "VAR {} {}", v.id, v.role.as_str()).unwrap();
        if let Some(l) = &v.label {
            write!(s, " {l}").unwrap();
        }
        s.push('\n');
    }
}

fn write_body(s: &mut String, m: &EnergyModel) {
    for (v, b) in m.clamps() {
        writeln!(s, "CLAMP {v} {}", u8::from(*b)).unwrap();
    }
    let starts: Vec<(usize, usize)> = m.blocks().iter().filter(|b| b.len() > 1).map(|b| (b.start, b.len())).collect();
    for (i, t) in m.terms().iter().enumerate() {
        if let Some((_, len)) = starts.iter().find(|(start, _)| *start == i) {
            writeln!(s, "BLOCK {len}").unwrap();
        }
        write!(s, "TERM {}", t.arity()).unwrap();
        for v in t.vars() {
            write!(s, " {v}").unwrap();
        }
        s.push_str(" :");
        for e in t.table() {
            write!(s, " {e}").unwrap();
        }
        s.push('\n');
    }
}

pub fn print_gadget(g: &Gadget) -> String {
    let mut s = String::new();
    write_vars(&mut s, &g.fragment);
    for (kind, vars) in [("in", &g.inputs), ("out", &g.outputs), ("anc", &g.ancillae)] {
        for v in vars {
            writeln!(s, "PORT {kind} {v}").unwrap();
        }
    }
    write_body(&mut s, &g.fragment);
    s
}

#[derive(Default)]
struct Ports {
    inputs: Vec<VarId>,
    outputs: Vec<VarId>,
    ancillae: Vec<VarId>,
    any: bool,
}

fn parse_id(tok: &str, line: usize, n: usize) -> Result<VarId> {
    let id: usize = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid variable id `{tok}`")))?;
    if id >= n {
        return Err(Error::parse(line, format!("undeclared variable {id}")));
    }
    Ok(VarId(id))
}

fn parse_inner(text: &str) -> Result<(EnergyModel, Ports)> {
    let mut m = EnergyModel::new();
    let mut ports = Ports::default();
    let mut blocks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "VAR" => {
                if toks.len() < 3 || toks.len() > 4 {
                    return Err(Error::parse(line, "expected `VAR <id> <role> [label]`"));
                }
                let id: usize = toks[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("invalid variable id `{}`", toks[1])))?;
                if id != m.num_vars() {
                    return Err(Error::parse(
                        line,
                        format!("variables must be declared in order; expected id {}, got {id}", m.num_vars()),
                    ));
                }
                let role =
                    Role::parse(toks[2]).ok_or_else(|| Error::parse(line, format!("unknown role `{}`", toks[2])))?;
                m.add_var(role, toks.get(3).map(|s| s.to_string()));
            }
            "CLAMP" => {
                let [_, id, bit] = toks[..] else {
                    return Err(Error::parse(line, "expected `CLAMP <id> <0|1>`"));
                };
                let v = parse_id(id, line, m.num_vars())?;
                let bit = match bit {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::parse(line, format!("clamp value must be 0 or 1, got `{bit}`"))),
                };
                m.clamp(v, bit)?;
            }
            "TERM" => {
                let k: usize = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(line, "expected `TERM <k> ...`"))?;
                if k == 0 || k > crate::model::K_MAX {
                    return Err(Error::parse(line, format!("term arity {k} outside 1..={}", crate::model::K_MAX)));
                }
                if toks.len() != 2 + k + 1 + (1 << k) || toks[2 + k] != ":" {
                    return Err(Error::parse(
                        line,
                        format!("arity-{k} term needs {k} ids, `:` and {} energies", 1 << k),
                    ));
                }
                let vars = toks[2..2 + k]
                    .iter()
                    .map(|t| parse_id(t, line, m.num_vars()))
                    .collect::<Result<Vec<_>>>()?;
                let table = toks[3 + k..]
                    .iter()
                    .map(|t| t.parse::<Energy>().map_err(|msg| Error::parse(line, msg)))
                    .collect::<Result<Vec<_>>>()?;
                let term = EnergyTerm::new(vars, table).map_err(|e| Error::parse(line, e.to_string()))?;
                m.add_term(term)?;
            }
            "BLOCK" => {
                let len: usize = match toks[..] {
                    [_, n] => n.parse().ok().filter(|n| *n >= 1),
                    _ => None,
                }
                .ok_or_else(|| Error::parse(line, "expected `BLOCK <n>` with n >= 1"))?;
                blocks.push((line, m.terms().len(), len));
            }
            "PORT" => {
                let [_, kind, id] = toks[..] else {
                    return Err(Error::parse(line, "expected `PORT <in|out|anc> <id>`"));
                };
                let v = parse_id(id, line, m.num_vars())?;
                match kind {
                    "in" => ports.inputs.push(v),
                    "out" => ports.outputs.push(v),
                    "anc" => ports.ancillae.push(v),
                    _ => return Err(Error::parse(line, format!("unknown port kind `{kind}`"))),
                }
                ports.any = true;
            }
            other => return Err(Error::parse(line, format!("unknown statement `{other}`"))),
        }
    }
    for (line, start, len) in blocks {
        if start + len > m.terms().len() {
            return Err(Error::parse(line, format!("block of {len} terms runs past the last term")));
        }
        m.join_terms(start..start + len);
    }
    Ok((m, ports))
}

/// Parses a model; `PORT` lines are accepted and ignored.
pub fn parse_model(text: &str) -> Result<EnergyModel> {
    parse_inner(text).map(|(m, _)| m)
}

pub fn parse_gadget(text: &str, name: &str) -> Result<Gadget> {
    let (m, ports) = parse_inner(text)?;
    if !ports.any {
        return Err(Error::Invalid("dump has no PORT lines".into()));
    }
    Gadget::new(name, ports.inputs, ports.outputs, ports.ancillae, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{make_physical_and, symmetrize};
    use proptest::prelude::*;

    #[test]
    fn parses_documented_example() {
        let text = "# and gate\nVAR 0 input a\nVAR 1 input b\nVAR 2 output\nCLAMP 0 1\nTERM 3 0 1 2 : 0 0 0 1 1 1 1 0\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.num_vars(), 3);
        assert_eq!(m.var(VarId(0)).label.as_deref(), Some("a"));
        assert_eq!(m.clamps().get(&VarId(0)), Some(&true));
        assert_eq!(print_model(&m), text.trim_start_matches("# and gate\n"));
    }

    #[test]
    fn errors_are_line_numbered() {
        let cases = [
            ("VAR 0 input\nVAR 2 input\n", 2),
            ("VAR 0 bogus\n", 1),
            ("VAR 0 input\n\nTERM 1 0 : 0\n", 3),
            ("VAR 0 input\nTERM 1 0 0 : 0 1\n", 2),
            ("VAR 0 input\nTERM 1 3 : 0 1\n", 2),
            ("VAR 0 input\nCLAMP 0 2\n", 2),
            ("VAR 0 input\nTERM 1 0 : 0 x\n", 2),
            ("FOO\n", 1),
        ];
        for (text, line) in cases {
            match parse_model(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn gadget_round_trip() {
        let e = Energy::int;
        let sand = symmetrize(&make_physical_and(e(0), e(0), e(0), e(-1), e(2)).unwrap()).unwrap();
        let text = print_gadget(&sand);
        let back = parse_gadget(&text, "sand").unwrap();
        assert_eq!(back.fragment, sand.fragment);
        assert_eq!((&back.inputs, &back.outputs, &back.ancillae), (&sand.inputs, &sand.outputs, &sand.ancillae));
        assert_eq!(print_gadget(&back), text);
        assert!(parse_gadget(&print_model(&sand.fragment), "x").is_err());
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(
            roles in prop::collection::vec((0usize..5, prop::option::of("[a-z][a-z0-9_]{0,5}")), 1..6),
            terms in prop::collection::vec((prop::collection::vec(0usize..6, 1..4), prop::collection::vec((-9i64..9, 1i64..5), 8)), 0..5),
            clamps in prop::collection::vec((0usize..6, any::<bool>()), 0..3),
        ) {
            let all = [Role::Input, Role::Output, Role::Ancilla, Role::Wire, Role::Constant];
            let mut m = EnergyModel::new();
            for (r, label) in &roles {
                m.add_var(all[*r], label.clone());
            }
            let n = m.num_vars();
            for (vars, raw) in terms {
                let mut vs: Vec<usize> = vars.into_iter().map(|v| v % n).collect();
                vs.sort();
                vs.dedup();
                let k = vs.len();
                let table = raw[..1 << k].iter().map(|(a, b)| Energy::ratio(*a, *b)).collect();
                m.add_table(vs.into_iter().map(VarId).collect(), table).unwrap();
            }
            for (v, b) in clamps {
                m.clamp(VarId(v % n), b).unwrap();
            }
            let text = print_model(&m);
            let back = parse_model(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(print_model(&back), text);
        }
    }
}
