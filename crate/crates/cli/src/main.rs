use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sqc_core::anneal::{cnf_family, metropolis_anneal, relaxation_scan, write_relaxation_csv, AnnealSchedule};
use sqc_core::cnf::{encode_cnf, parse_dimacs};
use sqc_core::dump::{parse_gadget, parse_model, print_gadget, print_model};
use sqc_core::edl::{assemble_usqc, default_scale};
use sqc_core::exact::{enumerate_ground_states, project, DEFAULT_CAP};
use sqc_core::gadget::{check_edc, make_physical, symmetrize, synthesize_gadget};
use sqc_core::network::{compile_netlist, CompileOptions, Network, WireOptions};
use sqc_core::sqdtm::{build_lattice, verify_ground_histories_capped, DtmSpec};
use sqc_core::{Energy, Error, Netlist, Role, TruthFunction};

/// Ground-state logic compiler and solver.
#[derive(Parser, Debug)]
#[command(name = "sqc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Penalty,
    Edc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Auto,
    Netlist,
    Cnf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Anneal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Not,
    And,
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RoleArg {
    Input,
    Output,
    Ancilla,
    Wire,
}

#[derive(clap::Args, Debug)]
struct Compilation {
    #[arg(long, value_enum, default_value = "penalty")]
    policy: PolicyArg,
    /// Gate penalty P.
    #[arg(long, default_value = "2")]
    penalty: Energy,
}

impl Compilation {
    fn options(&self) -> CompileOptions {
        match self.policy {
            PolicyArg::Penalty => CompileOptions::penalty(self.penalty),
            PolicyArg::Edc => CompileOptions::edc(self.penalty),
        }
    }
}

#[derive(clap::Args, Debug)]
struct Schedule {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 2.0)]
    t_start: f64,
    #[arg(long, default_value_t = 0.05)]
    t_end: f64,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
}

impl Schedule {
    fn build(&self) -> Result<AnnealSchedule, Error> {
        AnnealSchedule::geometric(self.t_start, self.t_end, self.sweeps, self.restarts, self.seed)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a netlist or DIMACS formula into an energy-model dump.
    Compile {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: InputFormat,
        #[command(flatten)]
        compilation: Compilation,
        /// Attach a decision bias of this size to `--dport`.
        #[arg(long)]
        delta: Option<Energy>,
        /// Output net receiving the decision bias (default: first output).
        #[arg(long)]
        dport: Option<String>,
        /// Output nets, least significant first, read as the minimized integer.
        #[arg(long, value_delimiter = ',')]
        mports: Vec<String>,
        /// Minimization scale c (default: delta / 2^(m+1), or 1 without delta).
        #[arg(long)]
        scale: Option<Energy>,
        /// Route every gate input through a wire chain of this length.
        #[arg(long)]
        wire_length: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the static lattice of a Turing machine.
    Dtm {
        spec: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        head_start: usize,
        /// Input tape as a bit string; free when omitted.
        #[arg(long)]
        tape: Option<String>,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "edc")]
        policy: PolicyArg,
        #[arg(long, default_value = "2")]
        penalty: Energy,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find ground states of a dump.
    Solve {
        dump: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Print distinct ground-state restrictions to variables of this role.
        #[arg(long, value_enum)]
        project: Option<RoleArg>,
        #[command(flatten)]
        schedule: Schedule,
        /// Stop a restart once its energy reaches this value.
        #[arg(long)]
        target: Option<Energy>,
        /// Per-restart CSV (anneal mode).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-input ground energies of a gadget dump.
    CheckEdc { dump: PathBuf },
    /// Emit a basic gate gadget.
    Gadget {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Satisfied-row energies for input patterns 00,10,01,11 (a|b<<1).
        #[arg(long, value_delimiter = ',')]
        profile: Vec<Energy>,
        #[arg(long, default_value = "2")]
        penalty: Energy,
        #[arg(long)]
        symmetrize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Anneal a random 3-CNF family and write relaxation statistics as CSV.
    Scan {
        #[arg(long, default_value_t = 6)]
        n_min: usize,
        #[arg(long, default_value_t = 14)]
        n_max: usize,
        #[arg(long, default_value_t = 4.2)]
        ratio: f64,
        #[arg(long, default_value_t = 3)]
        instances: usize,
        #[arg(long, default_value = "2")]
        penalty: Energy,
        #[arg(long, default_value = "1")]
        delta: Energy,
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Gadget form (with ports) when the network has no clamped variables.
fn network_dump(net: &Network) -> Result<String, Error> {
    if net.model.clamps().is_empty() {
        Ok(print_gadget(&net.clone().into_gadget("network")?))
    } else {
        Ok(print_model(&net.model))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_compile(
    input: &Path,
    format: InputFormat,
    compilation: &Compilation,
    delta: Option<Energy>,
    dport: Option<String>,
    mports: &[String],
    scale: Option<Energy>,
    wire_length: Option<usize>,
    out: Option<&Path>,
) -> CmdResult {
    let text = read(input)?;
    let is_cnf = match format {
        InputFormat::Cnf => true,
        InputFormat::Netlist => false,
        InputFormat::Auto => input.extension().is_some_and(|e| e == "cnf"),
    };
    let netlist = if is_cnf {
        encode_cnf(&parse_dimacs(&text)?).netlist
    } else {
        Netlist::parse(&text)?
    };
    let mut opts = compilation.options();
    if let Some(length) = wire_length {
        opts.wires = Some(WireOptions {
            length,
            coupling: compilation.penalty,
        });
    }
    let base = compile_netlist(&netlist, &opts)?;
    let dedlus: Vec<(String, Energy)> = match delta {
        Some(d) => {
            let port = dport.or_else(|| base.outputs.first().cloned()).ok_or(Error::NothingToDo)?;
            vec![(port, d)]
        }
        None => Vec::new(),
    };
    let medlu_ports: Vec<&str> = mports.iter().map(String::as_str).collect();
    let medlu = if medlu_ports.is_empty() {
        None
    } else {
        let c = scale.unwrap_or_else(|| match delta {
            Some(d) => default_scale(d, medlu_ports.len()),
            None => Energy::ONE,
        });
        Some((medlu_ports.as_slice(), c))
    };
    let dedlu_refs: Vec<(&str, Energy)> = dedlus.iter().map(|(p, d)| (p.as_str(), *d)).collect();
    let (_, net) = assemble_usqc(&base, &dedlu_refs, medlu)?;
    let report = format!("{}\n", net.elements);
    write_or_print(out, &network_dump(&net)?)?;
    if out.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    Ok(())
}

fn parse_bits(s: &str) -> Result<Vec<bool>, Failure> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Failure::Usage(format!("tape must be a bit string, got `{s}`"))),
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_dtm(
    spec: &Path,
    p: usize,
    head_start: usize,
    tape: Option<&str>,
    verify: bool,
    compilation: &Compilation,
    cap: u64,
    out: Option<&Path>,
) -> CmdResult {
    let dtm = DtmSpec::parse(&read(spec)?)?;
    let tape = tape.map(parse_bits).transpose()?;
    let lattice = build_lattice(&dtm, p, head_start, tape.as_deref(), &compilation.options())?;
    println!("{}", lattice.complexity.report());
    println!("{}", lattice.network.elements);
    if let Some(path) = out {
        write_or_print(Some(path), &print_model(&lattice.network.model))?;
    }
    if verify {
        if verify_ground_histories_capped(&lattice, &dtm, cap)? {
            println!("verify: ok");
        } else {
            println!("verify: FAILED");
            return Err(Failure::Verification("ground states differ from the machine's histories".into()));
        }
    }
    Ok(())
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

fn role_of(r: RoleArg) -> Role {
    match r {
        RoleArg::Input => Role::Input,
        RoleArg::Output => Role::Output,
        RoleArg::Ancilla => Role::Ancilla,
        RoleArg::Wire => Role::Wire,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    dump: &Path,
    mode: Mode,
    cap: u64,
    proj: Option<RoleArg>,
    schedule: &Schedule,
    target: Option<Energy>,
    out: Option<&Path>,
) -> CmdResult {
    let model = parse_model(&read(dump)?)?;
    match mode {
        Mode::Exact => {
            let g = enumerate_ground_states(&model, cap)?;
            let mut text = format!("E0={} deg={}\n", g.energy, g.degeneracy());
            match proj {
                Some(r) => {
                    let vars = model.vars_with_role(role_of(r));
                    for bits in project(&g.states, &vars)? {
                        writeln!(text, "{}", bit_string(&bits)).unwrap();
                    }
                }
                None => {
                    for a in &g.states {
                        writeln!(text, "{a}").unwrap();
                    }
                }
            }
            print!("{text}");
        }
        Mode::Anneal => {
            let res = metropolis_anneal(&model, &schedule.build()?, target)?;
            println!("seed={}", res.seed);
            println!("best_energy={}", res.best_energy);
            println!("best_assignment={}", res.best_assignment);
            if let Some(s) = res.success {
                println!("success={s}");
            }
            match res.first_hit_sweep {
                Some(k) => println!("first_hit_sweep={k}"),
                None => println!("first_hit_sweep="),
            }
            if let Some(path) = out {
                let mut csv = String::from("restart,best_energy,first_hit_sweep\n");
                for r in &res.restarts {
                    let hit = r.first_hit_sweep.map(|k| k.to_string()).unwrap_or_default();
                    writeln!(csv, "{},{},{hit}", r.index, r.best_energy).unwrap();
                }
                write_or_print(Some(path), &csv)?;
            }
        }
    }
    Ok(())
}

fn cmd_check_edc(dump: &Path) -> CmdResult {
    let g = parse_gadget(&read(dump)?, "gadget")?;
    let report = check_edc(&g)?;
    let n = g.inputs.len();
    for (x, e) in report.per_input_ground.iter().enumerate() {
        let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        println!("input {} ground {e}", bit_string(&bits));
    }
    println!("EDC: {}", if report.is_edc { "yes" } else { "no" });
    Ok(())
}

fn cmd_gadget(kind: Kind, profile: &[Energy], penalty: Energy, sym: bool, out: Option<&Path>) -> CmdResult {
    let f = match kind {
        Kind::Not => TruthFunction::not(),
        Kind::And => TruthFunction::and(),
        Kind::Or => TruthFunction::or(),
    };
    let g = if profile.is_empty() {
        synthesize_gadget(&f, penalty)?
    } else {
        if profile.len() != 1 << f.arity() {
            return Err(Failure::Usage(format!(
                "profile needs {} values, got {}",
                1 << f.arity(),
                profile.len()
            )));
        }
        make_physical(&f, profile, penalty)?
    };
    let g = if sym { symmetrize(&g)? } else { g };
    write_or_print(out, &print_gadget(&g))?;
    if out.is_some() {
        println!("{}", g.elements);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    n_min: usize,
    n_max: usize,
    ratio: f64,
    instances: usize,
    penalty: Energy,
    delta: Energy,
    schedule: &Schedule,
    out: Option<&Path>,
) -> CmdResult {
    let ns: Vec<usize> = (n_min..=n_max).collect();
    let sched = schedule.build()?;
    eprintln!("seed={}", sched.seed);
    let family = cnf_family(&ns, ratio, instances, penalty, delta, sched.seed)?;
    let rows = relaxation_scan(&family, &sched)?;
    let mut buf = Vec::new();
    write_relaxation_csv(&rows, &mut buf)?;
    write_or_print(out, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Compile {
            input,
            format,
            compilation,
            delta,
            dport,
            mports,
            scale,
            wire_length,
            out,
        } => cmd_compile(
            &input,
            format,
            &compilation,
            delta,
            dport,
            &mports,
            scale,
            wire_length,
            out.as_deref(),
        ),
        Command::Dtm {
            spec,
            p,
            head_start,
            tape,
            verify,
            policy,
            penalty,
            cap,
            out,
        } => cmd_dtm(
            &spec,
            p,
            head_start,
            tape.as_deref(),
            verify,
            &Compilation { policy, penalty },
            cap,
            out.as_deref(),
        ),
        Command::Solve {
            dump,
            mode,
            cap,
            project,
            schedule,
            target,
            out,
        } => cmd_solve(&dump, mode, cap, project, &schedule, target, out.as_deref()),
        Command::CheckEdc { dump } => cmd_check_edc(&dump),
        Command::Gadget {
            kind,
            profile,
            penalty,
            symmetrize,
            out,
        } => cmd_gadget(kind, &profile, penalty, symmetrize, out.as_deref()),
        Command::Scan {
            n_min,
            n_max,
            ratio,
            instances,
            penalty,
            delta,
            schedule,
            out,
        } => cmd_scan(n_min, n_max, ratio, instances, penalty, delta, &schedule, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e @ Error::Capacity { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
