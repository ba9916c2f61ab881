//! Heuristic ground-state search by single-flip Metropolis annealing.
//!
//! Each restart starts from a uniformly random configuration of the free
//! variables and performs `sweeps` sweeps of `n_free` proposals each. A
//! proposal picks a free variable uniformly and flips it with the
//! Metropolis probability `min(1, exp(-dE / T))`. The temperature falls
//! geometrically from `t_start` to `t_end` over the sweeps. Restart `r`
//! draws from a ChaCha8 generator seeded with `seed` on stream `r`, so a
//! run depends only on the model, the schedule and the seed.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cnf::{encode_cnf, Cnf};
use crate::compiled::Compiled;
use crate::edl::attach_dedlu;
use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::exact::{ground_energy, DEFAULT_CAP};
use crate::model::{Assignment, EnergyModel};
use crate::network::{compile_netlist, CompileOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealSchedule {
    pub t_start: f64,
    pub t_end: f64,
    pub sweeps: usize,
    /// Per-sweep temperature factor.
    pub cooling: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl AnnealSchedule {
    pub fn geometric(t_start: f64, t_end: f64, sweeps: usize, restarts: usize, seed: u64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_start >= t_end && t_end > 0.0) {
            return Err(Error::Invalid(format!(
                "temperatures must satisfy t_start >= t_end > 0, got {t_start} and {t_end}"
            )));
        }
        if sweeps == 0 || restarts == 0 {
            return Err(Error::Invalid("sweeps and restarts must be positive".into()));
        }
        let cooling = if sweeps == 1 {
            1.0
        } else {
            (t_end / t_start).powf(1.0 / (sweeps - 1) as f64)
        };
        Ok(AnnealSchedule {
            t_start,
            t_end,
            sweeps,
            cooling,
            restarts,
            seed,
        })
    }

    pub fn temperature(&self, sweep: usize) -> f64 {
        self.t_start * self.cooling.powi(sweep as i32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestartSummary {
    pub index: usize,
    pub best_energy: String,
    /// First sweep (1-based) after which the target energy was reached.
    pub first_hit_sweep: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnealResult {
    pub best_energy: Energy,
    pub best_assignment: Assignment,
    /// Earliest hit over all restarts.
    pub first_hit_sweep: Option<usize>,
    /// Whether the target was reached; `None` without a target.
    pub success: Option<bool>,
    pub seed: u64,
    pub restarts: Vec<RestartSummary>,
}

/// Accepts a move raising the energy by `delta` at temperature `t` with
/// probability `min(1, exp(-delta / t))`.
pub fn metropolis_accept<R: Rng + ?Sized>(delta: f64, t: f64, rng: &mut R) -> bool {
    delta <= 0.0 || rng.gen::<f64>() < (-delta / t).exp()
}

struct Restart {
    best: i64,
    bits: Vec<bool>,
    first_hit: Option<usize>,
}

fn run_restart(c: &Compiled, free: &[usize], s: &AnnealSchedule, restart: usize, target: Option<i64>) -> Restart {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    rng.set_stream(restart as u64);
    let mut bits: Vec<bool> = c.clamps.iter().map(|c| c.unwrap_or(false)).collect();
    for v in free {
        bits[*v] = rng.gen();
    }
    let mut idx: Vec<usize> = (0..c.terms.len()).map(|t| c.term_index(t, &bits)).collect();
    let mut energy: i64 = idx.iter().enumerate().map(|(t, i)| c.terms[t].table[*i]).sum();
    let mut best = energy;
    let mut best_bits = bits.clone();
    let hit = |e: i64| target.is_some_and(|t| e <= t);
    if hit(energy) {
        return Restart {
            best,
            bits: best_bits,
            first_hit: hit(energy).then_some(0),
        };
    }
    let denom = c.denom as f64;
    let mut steps: u64 = 0;
    for sweep in 0..s.sweeps {
        let t = s.temperature(sweep);
        for _ in 0..free.len() {
            let v = free[rng.gen_range(0..free.len())];
            let delta: i64 = c.var_terms[v]
                .iter()
                .map(|&(term, pos)| {
                    let i = idx[term];
                    c.terms[term].table[i ^ (1 << pos)] - c.terms[term].table[i]
                })
                .sum();
            if metropolis_accept(delta as f64 / denom, t, &mut rng) {
                bits[v] = !bits[v];
                for &(term, pos) in &c.var_terms[v] {
                    idx[term] ^= 1 << pos;
                }
                energy += delta;
                if energy < best {
                    best = energy;
                    best_bits.copy_from_slice(&bits);
                }
            }
            steps += 1;
            debug_assert!(!steps.is_multiple_of(1000) || energy == c.total(&bits));
        }
        if hit(best) {
            return Restart {
                best,
                bits: best_bits,
                first_hit: Some(sweep + 1),
            };
        }
    }
    Restart {
        best,
        bits: best_bits,
        first_hit: None,
    }
}

/// Runs the schedule's restarts in parallel and returns the lowest energy
/// seen (ties broken by restart index). With a `target`, each restart
/// stops once its energy is at or below the target. Fails with
/// `NothingToDo` when every variable is clamped.
pub fn metropolis_anneal(model: &EnergyModel, schedule: &AnnealSchedule, target: Option<Energy>) -> Result<AnnealResult> {
    let c = Compiled::new(model)?;
    let target_scaled = match target {
        Some(t) => Some(t.scaled_to(c.denom).ok_or(Error::Overflow)?),
        None => None,
    };
    let free = c.free_vars();
    if free.is_empty() {
        return Err(Error::NothingToDo);
    }
    let runs: Vec<Restart> = (0..schedule.restarts)
        .into_par_iter()
        .map(|r| run_restart(&c, &free, schedule, r, target_scaled))
        .collect();
    let winner = (0..runs.len()).min_by_key(|r| (runs[*r].best, *r)).unwrap();
    let restarts = runs
        .iter()
        .enumerate()
        .map(|(index, r)| RestartSummary {
            index,
            best_energy: c.energy(r.best).to_string(),
            first_hit_sweep: r.first_hit,
        })
        .collect();
    Ok(AnnealResult {
        best_energy: c.energy(runs[winner].best),
        best_assignment: Assignment::new(runs[winner].bits.clone()),
        first_hit_sweep: runs.iter().filter_map(|r| r.first_hit).min(),
        success: target.map(|_| runs.iter().any(|r| r.first_hit.is_some())),
        seed: schedule.seed,
        restarts,
    })
}

/// One row of a relaxation scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelaxationStats {
    pub instance: String,
    pub n: usize,
    pub restarts: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Median over successful restarts; empty when none succeeded.
    pub median_first_hit_sweep: Option<f64>,
}

/// A model with its exactly known ground energy.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanInstance {
    pub name: String,
    pub n: usize,
    pub model: EnergyModel,
    pub ground: Energy,
}

fn median(mut xs: Vec<usize>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_unstable();
    let k = xs.len();
    Some(if k % 2 == 1 {
        xs[k / 2] as f64
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) as f64 / 2.0
    })
}

/// Anneals every instance with target `ground` and records how many
/// restarts reach it and after how many sweeps.
pub fn relaxation_scan(instances: &[ScanInstance], schedule: &AnnealSchedule) -> Result<Vec<RelaxationStats>> {
    instances
        .iter()
        .map(|inst| {
            let res = metropolis_anneal(&inst.model, schedule, Some(inst.ground))?;
            let hits: Vec<usize> = res.restarts.iter().filter_map(|r| r.first_hit_sweep).collect();
            Ok(RelaxationStats {
                instance: inst.name.clone(),
                n: inst.n,
                restarts: res.restarts.len(),
                successes: hits.len(),
                success_rate: hits.len() as f64 / res.restarts.len() as f64,
                median_first_hit_sweep: median(hits),
            })
        })
        .collect()
}

/// Random 3-CNF networks with `round(ratio * n)` clauses for each `n`:
/// penalty gates plus a decision bias `delta` on the formula output, with
/// the ground energy found by exact search.
pub fn cnf_family(
    ns: &[usize],
    ratio: f64,
    per_n: usize,
    penalty: Energy,
    delta: Energy,
    seed: u64,
) -> Result<Vec<ScanInstance>> {
    let mut out = Vec::new();
    for &n in ns {
        let m = (ratio * n as f64).round() as usize;
        for i in 0..per_n {
            let cnf = Cnf::random_3cnf(n, m, seed ^ ((n as u64) << 32) ^ i as u64);
            let enc = encode_cnf(&cnf);
            let net = compile_netlist(&enc.netlist, &CompileOptions::penalty(penalty))?;
            let (net, _) = attach_dedlu(&net, &enc.netlist.outputs()[0], delta)?;
            let ground = ground_energy(&net.model, DEFAULT_CAP)?;
            out.push(ScanInstance {
                name: format!("n{n}_m{m}_i{i}"),
                n,
                model: net.model,
                ground,
            });
        }
    }
    Ok(out)
}

/// CSV with header
/// `instance,n,restarts,successes,success_rate,median_first_hit_sweep`.
pub fn write_relaxation_csv<W: Write>(rows: &[RelaxationStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Invalid(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(())
}
