//! Energy-degeneracy-lifting units.
//!
//! A decision unit biases one output wire: energy `delta` when it reads 0,
//! nothing when it reads 1. A minimization unit biases the wires
//! `z_0..z_m` by `c * 2^i` each, so its energy is `c * Z` for the integer
//! `Z = sum z_i 2^i`. Attached to an EDC network, they lift the otherwise
//! degenerate ground states so that the remaining minima are the accepted
//! instances (and, among those, the ones of least `Z`).

use std::collections::BTreeSet;

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::exact::{enumerate_ground_states, project};
use crate::model::{Assignment, VarId};
use crate::network::Network;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dedlu {
    pub dport: VarId,
    pub delta: Energy,
}

impl Dedlu {
    pub fn energy(&self, a: &Assignment) -> Energy {
        if a.get(self.dport) {
            Energy::ZERO
        } else {
            self.delta
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Medlu {
    /// `z_0` first.
    pub mports: Vec<VarId>,
    pub scale: Energy,
}

impl Medlu {
    pub fn value(&self, a: &Assignment) -> u64 {
        self.mports
            .iter()
            .enumerate()
            .map(|(i, v)| u64::from(a.get(*v)) << i)
            .sum()
    }

    pub fn energy(&self, a: &Assignment) -> Energy {
        self.scale * self.value(a) as i64
    }

    /// Largest energy the unit can contribute: `c * (2^{m+1} - 1)`.
    pub fn max_energy(&self) -> Energy {
        self.scale * ((1i64 << self.mports.len()) - 1)
    }
}

fn output_port(net: &Network, port: &str) -> Result<VarId> {
    if !net.outputs.iter().any(|n| n == port) {
        return Err(Error::UnknownNet(port.to_string()));
    }
    net.port(port)
}

pub fn attach_dedlu(net: &Network, port: &str, delta: Energy) -> Result<(Network, Dedlu)> {
    if !delta.is_positive() {
        return Err(Error::Invalid(format!("decision bias must be positive, got {delta}")));
    }
    let dport = output_port(net, port)?;
    let mut out = net.clone();
    out.model.add_table(vec![dport], vec![delta, Energy::ZERO])?;
    Ok((out, Dedlu { dport, delta }))
}

pub fn attach_medlu(net: &Network, ports: &[&str], scale: Energy) -> Result<(Network, Medlu)> {
    if !scale.is_positive() {
        return Err(Error::Invalid(format!("minimization scale must be positive, got {scale}")));
    }
    if ports.is_empty() || ports.len() > 62 {
        return Err(Error::Invalid(format!("minimization unit needs 1..=62 ports, got {}", ports.len())));
    }
    let mports = ports.iter().map(|p| net.port(p)).collect::<Result<Vec<_>>>()?;
    let mut out = net.clone();
    for (i, v) in mports.iter().enumerate() {
        out.model.add_table(vec![*v], vec![Energy::ZERO, scale * (1i64 << i)])?;
    }
    Ok((out, Medlu { mports, scale }))
}

/// Largest `c` keeping `c * (2^{m+1} - 1)` strictly below `delta` for
/// `ports` minimization wires: `delta / 2^{m+1}`.
pub fn default_scale(delta: Energy, ports: usize) -> Energy {
    delta / (1i64 << ports)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    /// Gate-violation penalty of the base network.
    pub penalty: Energy,
    /// Sum of all decision biases.
    pub decision_budget: Energy,
    /// Largest minimization energy.
    pub objective_budget: Energy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsqcPlan {
    pub dedlus: Vec<Dedlu>,
    pub medlu: Option<Medlu>,
    pub hierarchy: Hierarchy,
}

/// Attaches the requested units to an EDC base network after checking
/// `P > sum(delta) + c (2^{m+1} - 1)`, and `c (2^{m+1} - 1) < min(delta)`
/// when both kinds of unit are present.
pub fn assemble_usqc(
    base: &Network,
    dedlus: &[(&str, Energy)],
    medlu: Option<(&[&str], Energy)>,
) -> Result<(UsqcPlan, Network)> {
    let decision_budget: Energy = dedlus.iter().map(|(_, d)| *d).sum();
    let objective_budget = medlu
        .map(|(ports, c)| c * ((1i64 << ports.len().min(62)) - 1))
        .unwrap_or(Energy::ZERO);
    let hierarchy = Hierarchy {
        penalty: base.penalty,
        decision_budget,
        objective_budget,
    };
    if !dedlus.is_empty() || medlu.is_some() {
        if base.penalty <= decision_budget + objective_budget {
            return Err(Error::Hierarchy(format!(
                "gate penalty {} must exceed decision budget {} plus objective budget {}",
                base.penalty, decision_budget, objective_budget
            )));
        }
        if let Some(min_delta) = dedlus.iter().map(|(_, d)| *d).min() {
            if medlu.is_some() && objective_budget >= min_delta {
                return Err(Error::Hierarchy(format!(
                    "objective budget {objective_budget} must stay below the smallest decision bias {min_delta}"
                )));
            }
        }
    }
    let mut net = base.clone();
    let mut units = Vec::with_capacity(dedlus.len());
    for (port, delta) in dedlus {
        let (n, d) = attach_dedlu(&net, port, *delta)?;
        net = n;
        units.push(d);
    }
    let medlu = match medlu {
        Some((ports, c)) => {
            let (n, m) = attach_medlu(&net, ports, c)?;
            net = n;
            Some(m)
        }
        None => None,
    };
    Ok((
        UsqcPlan {
            dedlus: units,
            medlu,
            hierarchy,
        },
        net,
    ))
}

/// Input patterns of the ground states whose decision wire reads 1.
/// Empty exactly when no input makes the decided output true.
pub fn decision_witnesses(net: &Network, dedlu: &Dedlu, cap: u64) -> Result<BTreeSet<Vec<bool>>> {
    let ground = enumerate_ground_states(&net.model, cap)?;
    let accepted: Vec<Assignment> = ground.states.into_iter().filter(|a| a.get(dedlu.dport)).collect();
    project(&accepted, &net.input_vars())
}
