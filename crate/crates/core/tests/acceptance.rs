//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Reference values come from the
//! brute-force oracles in this file, never from the library under test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use sqc_core::anneal::{cnf_family, metropolis_anneal, relaxation_scan, write_relaxation_csv, AnnealSchedule};
use sqc_core::cnf::{encode_cnf, Cnf};
use sqc_core::edl::{assemble_usqc, attach_dedlu, decision_witnesses, default_scale};
use sqc_core::exact::{enumerate_ground_states, ground_energy, project, DEFAULT_CAP};
use sqc_core::gadget::{check_edc, check_implements, make_physical_and, symmetrize, synthesize_gadget, Gadget};
use sqc_core::network::{compile_netlist, make_wire_chain, CompileOptions, Network};
use sqc_core::sqdtm::{build_lattice, build_lattice_with, build_sfsc_function, build_sfsc_gadget, DtmSpec, Lattice};
use sqc_core::{Assignment, Energy, EnergyModel, NetlistBuilder, TruthFunction};

type Outcome = Result<String, String>;

fn e(v: i64) -> Energy {
    Energy::int(v)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Minimum of `model` over all assignments agreeing with `fixed` on the
/// listed variables, by exhaustive enumeration.
fn brute_min(model: &EnergyModel, fixed: &[(usize, bool)]) -> Energy {
    let n = model.num_vars();
    let mut best: Option<Energy> = None;
    for x in 0..1usize << n {
        let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        if fixed.iter().any(|(v, b)| bits[*v] != *b) {
            continue;
        }
        let en = model.total_energy(&Assignment::new(bits)).unwrap();
        best = Some(best.map_or(en, |b: Energy| b.min(en)));
    }
    best.unwrap()
}

fn brute_per_input(g: &Gadget) -> Vec<Energy> {
    let n = g.inputs.len();
    (0..1usize << n)
        .map(|x| {
            let fixed: Vec<(usize, bool)> = g.inputs.iter().enumerate().map(|(i, v)| (v.index(), x >> i & 1 == 1)).collect();
            brute_min(&g.fragment, &fixed)
        })
        .collect()
}

fn criterion_edc() -> Outcome {
    let inv = synthesize_gadget(&TruthFunction::not(), e(1)).map_err(|x| x.to_string())?;
    let r = check_edc(&inv).map_err(|x| x.to_string())?;
    check(r.is_edc && r.per_input_ground == brute_per_input(&inv), || "inverter is not EDC".into())?;

    let and = make_physical_and(e(0), e(0), e(0), e(-1), e(2)).map_err(|x| x.to_string())?;
    let r = check_edc(&and).map_err(|x| x.to_string())?;
    let oracle = brute_per_input(&and);
    check(oracle == vec![e(0), e(0), e(0), e(-1)], || "physical AND profile".into())?;
    check(!r.is_edc && r.per_input_ground == oracle, || "physical AND reported EDC".into())?;

    let sand = symmetrize(&and).map_err(|x| x.to_string())?;
    let r = check_edc(&sand).map_err(|x| x.to_string())?;
    let pattern_sum: Energy = oracle.iter().copied().sum();
    let sym_oracle = brute_per_input(&sand);
    check(r.is_edc, || "symmetrized AND is not EDC".into())?;
    check(
        r.per_input_ground.iter().all(|x| *x == e(-1)) && sym_oracle.iter().all(|x| *x == pattern_sum),
        || format!("symmetrized grounds {:?}, oracle {sym_oracle:?}", r.per_input_ground),
    )?;
    let shown: Vec<String> = oracle.iter().map(|x| x.to_string()).collect();
    Ok(format!(
        "inverter EDC; physical AND grounds ({}) non-EDC; symmetrized AND ground -1 = pattern sum for every input",
        shown.join(",")
    ))
}

fn criterion_universal() -> Outcome {
    let p = e(1);
    for code in 0u8..16 {
        let f = TruthFunction::two_input(code);
        // independent reading of the code: row a|b<<1 is bit (a + 2b) of code
        for a in 0..2usize {
            for b in 0..2usize {
                check(f.eval(a | b << 1) == (code >> (a + 2 * b) & 1 == 1), || format!("table of {code}"))?;
            }
        }
        let g = synthesize_gadget(&f, p).map_err(|x| x.to_string())?;
        let r = check_implements(&g, &f).map_err(|x| x.to_string())?;
        check(r.implements && r.logical_gap == p, || format!("function {code}: gap {}", r.logical_gap))?;
        let s = symmetrize(&g).map_err(|x| x.to_string())?;
        let r = check_implements(&s, &f).map_err(|x| x.to_string())?;
        check(r.implements, || format!("function {code} broken by symmetrize"))?;
        for x in 0..4usize {
            let ground = enumerate_ground_states(&s.with_inputs_clamped(x), DEFAULT_CAP).map_err(|x| x.to_string())?;
            let expect = code >> x & 1 == 1;
            check(ground.states.iter().all(|st| st.get(s.output()) == expect), || {
                format!("function {code} symmetrized, input {x}")
            })?;
        }
    }
    Ok("16/16 functions, gap = P = 1, correct after symmetrize".into())
}

fn brute_sat(n: usize, clauses: &[Vec<i32>]) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    for x in 0..1usize << n {
        let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        let sat = clauses
            .iter()
            .all(|c| c.iter().any(|l| bits[l.unsigned_abs() as usize - 1] == (*l > 0)));
        if sat {
            out.insert(bits);
        }
    }
    out
}

fn criterion_sat() -> Outcome {
    let mut count = 0;
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..60u64 {
        let n = 3 + (i as usize % 10);
        let m = (n * (3 + i as usize % 4) + i as usize % 3).min(30);
        let cnf = Cnf::random_3cnf(n, m, 1000 + i);
        let enc = encode_cnf(&cnf);
        let opts = if i % 2 == 0 {
            CompileOptions::penalty(e(2))
        } else {
            CompileOptions::edc(e(2))
        };
        let net = compile_netlist(&enc.netlist, &opts).map_err(|x| x.to_string())?;
        let (net, dedlu) = attach_dedlu(&net, &enc.netlist.outputs()[0], e(1)).map_err(|x| x.to_string())?;
        let got = decision_witnesses(&net, &dedlu, DEFAULT_CAP).map_err(|x| x.to_string())?;
        let expect = brute_sat(n, &cnf.clauses);
        check(got == expect, || format!("instance {i} (n={n}, m={m}): {} vs {} witnesses", got.len(), expect.len()))?;
        if expect.is_empty() {
            unsat += 1;
        } else {
            sat += 1;
        }
        count += 1;
    }
    check(sat > 0 && unsat > 0, || "family lacks satisfiable or unsatisfiable instances".into())?;
    Ok(format!("{count} instances ({sat} satisfiable, {unsat} unsatisfiable) match brute force"))
}

struct Machine {
    start: usize,
    halting: Vec<bool>,
    /// (next, write, up)
    delta: Vec<[Option<(usize, bool, bool)>; 2]>,
}

fn oracle_history(m: &Machine, tape: &[bool], head: usize) -> Vec<Vec<bool>> {
    let p = tape.len();
    let mut rows = vec![tape.to_vec()];
    let mut head = Some((head, m.start));
    for _ in 0..p {
        let mut row = rows.last().unwrap().clone();
        head = match head {
            Some((pos, q)) if !m.halting[q] => {
                let (next, write, up) = m.delta[q][usize::from(row[pos - 1])].unwrap();
                row[pos - 1] = write;
                let pos = if up { pos + 1 } else { pos - 1 };
                (pos >= 1 && pos <= p).then_some((pos, next))
            }
            _ => None,
        };
        rows.push(row);
    }
    rows
}

fn histories_match(l: &Lattice, m: &Machine) -> Result<bool, String> {
    let p = l.plan.p;
    let g = enumerate_ground_states(&l.network.model, DEFAULT_CAP).map_err(|x| x.to_string())?;
    if g.states.len() != 1 << p {
        return Ok(false);
    }
    let mut tapes = BTreeSet::new();
    for a in &g.states {
        let rows: Vec<Vec<bool>> = l.plan.registers.iter().map(|r| r.iter().map(|v| a.get(*v)).collect()).collect();
        if rows != oracle_history(m, &rows[0], l.plan.head_start) {
            return Ok(false);
        }
        tapes.insert(rows[0].clone());
    }
    Ok(tapes.len() == 1 << p)
}

const FLIPPER: &str = "STATE q\nSTART q\nDELTA q 0 -> q 1 U\nDELTA q 1 -> q 0 U\n";
const TWO_STATE: &str = "STATE a\nSTATE b\nSTART a\nDELTA a 0 -> b 1 U\nDELTA a 1 -> a 0 U\nDELTA b 0 -> a 0 D\nDELTA b 1 -> b 1 U\n";

fn flipper_machine() -> Machine {
    Machine {
        start: 0,
        halting: vec![false],
        delta: vec![[Some((0, true, true)), Some((0, false, true))]],
    }
}

fn two_state_machine() -> Machine {
    Machine {
        start: 0,
        halting: vec![false, false],
        delta: vec![
            [Some((1, true, true)), Some((0, false, true))],
            [Some((0, false, false)), Some((1, true, true))],
        ],
    }
}

fn criterion_sqdtm() -> Outcome {
    let opts = CompileOptions::edc(e(2));
    let mut checked = 0;
    for (src, machine) in [(FLIPPER, flipper_machine()), (TWO_STATE, two_state_machine())] {
        let dtm = DtmSpec::parse(src).map_err(|x| x.to_string())?;
        for p in 1..=4 {
            for head in [1, p] {
                let l = build_lattice(&dtm, p, head, None, &opts).map_err(|x| x.to_string())?;
                check(histories_match(&l, &machine)?, || format!("p={p}, head {head}: ground states differ"))?;
                checked += 1;
            }
        }
    }
    let dtm = DtmSpec::parse(FLIPPER).map_err(|x| x.to_string())?;
    let mut f = build_sfsc_function(&dtm).map_err(|x| x.to_string())?;
    let row = f.row_index(false, 0, 1);
    f.corrupt(row, 0);
    let cell = build_sfsc_gadget(&f, &opts).map_err(|x| x.to_string())?;
    let l = build_lattice_with(&dtm, &cell, 3, 1, None).map_err(|x| x.to_string())?;
    check(!histories_match(&l, &flipper_machine())?, || "corrupted cell went unnoticed".into())?;
    Ok(format!("{checked} lattices match the oracle with degeneracy 2^p; corrupted row detected"))
}

fn criterion_lattice_report() -> Outcome {
    let opts = CompileOptions::edc(e(2));
    let mut lines = Vec::new();
    for src in [FLIPPER, TWO_STATE] {
        let dtm = DtmSpec::parse(src).map_err(|x| x.to_string())?;
        let cell = build_sfsc_gadget(&build_sfsc_function(&dtm).map_err(|x| x.to_string())?, &opts)
            .map_err(|x| x.to_string())?;
        let m = cell.gadget.elements.total();
        for p in 1..=4usize {
            let l = build_lattice(&dtm, p, 1, None, &opts).map_err(|x| x.to_string())?;
            let c = l.complexity;
            check(c.m == m, || format!("M {} vs {m}", c.m))?;
            check(c.sfsc_elements == m * p * p, || "cell total".into())?;
            check(c.registers == (p + 1) * p, || "register count".into())?;
            check(c.total == m * p * p + (p + 1) * p, || "total".into())?;
            check(l.network.elements.total() == c.total, || "network accounting".into())?;
            check(l.network.elements.registers == (p + 1) * p, || "network registers".into())?;
            check(c.total <= (m + 1) * p * p + p && c.within_bound(), || "bound".into())?;
        }
        lines.push(format!("M={m}"));
    }
    Ok(format!("{} (p = 1..4): cells M p^2, registers (p+1) p, total <= (M+1) p^2 + p", lines.join(", ")))
}

fn objective(x: usize) -> usize {
    (5 * x + 3) % 16
}

fn criterion_medlu() -> Outcome {
    let mut b = NetlistBuilder::new("_o");
    let ins: Vec<String> = (0..4).map(|i| b.input(format!("x{i}"))).collect();
    let mut outs = Vec::new();
    for k in 0..4 {
        let f = TruthFunction::from_fn(4, |x| objective(x) >> k & 1 == 1);
        let net = b.sop(&f, &ins);
        let net = if ins.contains(&net) || outs.contains(&net) { b.buffer(&net) } else { net };
        b.output(&net);
        outs.push(net);
    }
    // constraint: x is odd and x != 9
    let ok = TruthFunction::from_fn(4, |x| x % 2 == 1 && x != 9);
    let ok_net = b.sop(&ok, &ins);
    b.output(&ok_net);
    let nl = b.finish();
    let base: Network = compile_netlist(&nl, &CompileOptions::edc(e(2))).map_err(|x| x.to_string())?;
    let ports: Vec<&str> = outs.iter().map(String::as_str).collect();
    let c = default_scale(e(1), ports.len());
    let (plan, net) =
        assemble_usqc(&base, &[(ok_net.as_str(), e(1))], Some((&ports, c))).map_err(|x| x.to_string())?;
    let g = enumerate_ground_states(&net.model, DEFAULT_CAP).map_err(|x| x.to_string())?;
    let got = project(&g.states, &net.input_vars()).map_err(|x| x.to_string())?;

    let feasible: Vec<usize> = (0..16).filter(|x| x % 2 == 1 && *x != 9).collect();
    let best = feasible.iter().map(|x| objective(*x)).min().unwrap();
    let expect: BTreeSet<Vec<bool>> = feasible
        .iter()
        .filter(|x| objective(**x) == best)
        .map(|x| (0..4).map(|i| x >> i & 1 == 1).collect())
        .collect();
    check(got == expect, || format!("argmin {got:?} vs {expect:?}"))?;

    let medlu = plan.medlu.unwrap();
    let mut a = g.states[0].clone();
    for (v, bit) in medlu.mports.iter().zip([true, false, true, false]) {
        a.set(*v, bit);
    }
    check(medlu.energy(&a) == c * 5, || format!("pattern 101 gives {}", medlu.energy(&a)))?;
    let x = (0..16).find(|x| expect.contains(&(0..4).map(|i| x >> i & 1 == 1).collect::<Vec<_>>())).unwrap();
    Ok(format!("argmin x={x} (objective {best}) matches brute force; pattern 101 -> 5c with c={c}"))
}

fn criterion_anneal() -> Outcome {
    let mut instances: Vec<(String, EnergyModel)> = Vec::new();
    for len in 2..=10 {
        let chain = make_wire_chain(len, e(1)).map_err(|x| x.to_string())?;
        instances.push((format!("chain{len}"), chain.fragment));
    }
    for (n, seed) in [(6, 1u64), (8, 2), (10, 3)] {
        let cnf = Cnf::random_3cnf(n, 2 * n, seed);
        check(!brute_sat(n, &cnf.clauses).is_empty(), || format!("instance n={n} is not satisfiable"))?;
        let enc = encode_cnf(&cnf);
        let net = compile_netlist(&enc.netlist, &CompileOptions::penalty(e(2))).map_err(|x| x.to_string())?;
        let (net, _) = attach_dedlu(&net, &enc.netlist.outputs()[0], e(1)).map_err(|x| x.to_string())?;
        instances.push((format!("sat{n}"), net.model));
    }
    let mut runs = 0;
    for (name, model) in &instances {
        let e0 = ground_energy(model, DEFAULT_CAP).map_err(|x| x.to_string())?;
        let mut hits = 0;
        for seed in 0..100u64 {
            let s = AnnealSchedule::geometric(2.0, 0.05, 300, 1, seed).map_err(|x| x.to_string())?;
            let r = metropolis_anneal(model, &s, None).map_err(|x| x.to_string())?;
            check(r.best_energy >= e0, || format!("{name} seed {seed}: {} below ground {e0}", r.best_energy))?;
            check(model.total_energy(&r.best_assignment).unwrap() == r.best_energy, || "reported energy".into())?;
            if r.best_energy == e0 {
                hits += 1;
            }
            runs += 1;
        }
        check(hits >= 1, || format!("{name}: ground never reached in 100 runs"))?;
    }
    let (_, model) = &instances[instances.len() - 1];
    let s = AnnealSchedule::geometric(2.0, 0.05, 300, 8, 77).map_err(|x| x.to_string())?;
    let a = format!("{:?}", metropolis_anneal(model, &s, None).map_err(|x| x.to_string())?);
    let b = format!("{:?}", metropolis_anneal(model, &s, None).map_err(|x| x.to_string())?);
    check(a == b, || "same seed gave different results".into())?;
    Ok(format!("{runs} runs never below E0, every instance reached E0, same-seed runs identical"))
}

fn criterion_scan() -> Outcome {
    let ns: Vec<usize> = (6..=14).collect();
    let family = cnf_family(&ns, 4.2, 2, e(2), e(1), 9).map_err(|x| x.to_string())?;
    let s = AnnealSchedule::geometric(2.0, 0.05, 200, 8, 9).map_err(|x| x.to_string())?;
    let rows = relaxation_scan(&family, &s).map_err(|x| x.to_string())?;
    let mut buf = Vec::new();
    write_relaxation_csv(&rows, &mut buf).map_err(|x| x.to_string())?;
    let text = String::from_utf8(buf).map_err(|x| x.to_string())?;
    let mut lines = text.lines();
    check(
        lines.next() == Some("instance,n,restarts,successes,success_rate,median_first_hit_sweep"),
        || "header".into(),
    )?;
    let mut count = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        check(f.len() == 6, || format!("row `{line}`"))?;
        let n: usize = f[1].parse().map_err(|_| format!("n in `{line}`"))?;
        let restarts: usize = f[2].parse().map_err(|_| format!("restarts in `{line}`"))?;
        let successes: usize = f[3].parse().map_err(|_| format!("successes in `{line}`"))?;
        let rate: f64 = f[4].parse().map_err(|_| format!("rate in `{line}`"))?;
        check((6..=14).contains(&n) && restarts == 8 && successes <= restarts, || format!("row `{line}`"))?;
        check((rate - successes as f64 / restarts as f64).abs() < 1e-12, || format!("rate in `{line}`"))?;
        check(f[5].is_empty() == (successes == 0), || format!("median in `{line}`"))?;
        if !f[5].is_empty() {
            f[5].parse::<f64>().map_err(|_| format!("median in `{line}`"))?;
        }
        count += 1;
    }
    check(count == 18, || format!("{count} rows"))?;
    Ok(format!("{count} well-formed rows for n = 6..14"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 EDC suite", criterion_edc, Duration::from_secs(1)),
        ("2 universal gate check", criterion_universal, Duration::from_secs(5)),
        ("3 SAT oracle equivalence", criterion_sat, Duration::from_secs(300)),
        ("4 SQDTM ground-history bijection", criterion_sqdtm, Duration::from_secs(120)),
        ("5 lattice complexity report", criterion_lattice_report, Duration::from_secs(60)),
        ("6 MEDLU argmin", criterion_medlu, Duration::from_secs(10)),
        ("7 annealer soundness and determinism", criterion_anneal, Duration::from_secs(120)),
        ("8 relaxation scan CSV", criterion_scan, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let t = Instant::now();
        let outcome = run();
        let took = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}; too slow")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({:.2}s, limit {}s): {msg}", took.as_secs_f64(), limit.as_secs()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2}s, limit {}s): {msg}", took.as_secs_f64(), limit.as_secs());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
