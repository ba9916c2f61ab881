//! Variables, k-local energy tables and assignments.

use std::collections::BTreeMap;
use std::fmt;

use crate::energy::Energy;
use crate::error::{Error, Result};

/// Largest supported term arity.
pub const K_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Role metadata; energy evaluation ignores it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    Output,
    Ancilla,
    Wire,
    Constant,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::Ancilla => "ancilla",
            Role::Wire => "wire",
            Role::Constant => "constant",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        Some(match s {
            "input" => Role::Input,
            "output" => Role::Output,
            "ancilla" => Role::Ancilla,
            "wire" => Role::Wire,
            "constant" => Role::Constant,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub id: VarId,
    pub role: Role,
    pub label: Option<String>,
}

/// A k-local energy table.
///
/// Row `i` of the table is the energy of the configuration in which
/// `vars[j]` takes bit `j` of `i` (little-endian in the listed order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyTerm {
    vars: Vec<VarId>,
    table: Vec<Energy>,
}

impl EnergyTerm {
    pub fn new(vars: Vec<VarId>, table: Vec<Energy>) -> Result<Self> {
        let k = vars.len();
        if k == 0 {
            return Err(Error::InvalidTerm("term needs at least one variable".into()));
        }
        if k > K_MAX {
            return Err(Error::ArityOverflow {
                arity: k,
                limit: K_MAX,
            });
        }
        if table.len() != 1 << k {
            return Err(Error::InvalidTerm(format!(
                "table has {} entries, arity {k} needs {}",
                table.len(),
                1 << k
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidTerm(format!("variable {v} repeated")));
            }
        }
        Ok(EnergyTerm { vars, table })
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn table(&self) -> &[Energy] {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, a: &Assignment) -> usize {
        self.vars
            .iter()
            .enumerate()
            .fold(0, |acc, (j, v)| acc | (usize::from(a.get(*v)) << j))
    }

    pub fn energy(&self, a: &Assignment) -> Energy {
        self.table[self.index_of(a)]
    }

    pub(crate) fn remapped(&self, map: &[VarId]) -> EnergyTerm {
        EnergyTerm {
            vars: self.vars.iter().map(|v| map[v.0]).collect(),
            table: self.table.clone(),
        }
    }
}

/// A total assignment of bits to the variables `0..n` of a model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: VarId) -> bool {
        self.0[v.0]
    }

    pub fn set(&mut self, v: VarId, bit: bool) {
        self.0[v.0] = bit;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn project(&self, vars: &[VarId]) -> Vec<bool> {
        vars.iter().map(|v| self.get(*v)).collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Variables plus energy terms plus clamps.
///
/// Variable ids are dense: the i-th declared variable has id `i`.
///
/// Terms are partitioned into consecutive blocks. A block marks terms that
/// belong to one elementary gadget; the exact solver treats each block as
/// a single table when its support is small enough. Blocks never change
/// the energy.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnergyModel {
    variables: Vec<Variable>,
    terms: Vec<EnergyTerm>,
    clamps: BTreeMap<VarId, bool>,
    /// Sorted index of the first term of each block.
    block_starts: Vec<usize>,
}

impl EnergyModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, role: Role, label: Option<String>) -> VarId {
        let id = VarId(self.variables.len());
        self.variables.push(Variable { id, role, label });
        id
    }

    pub fn add_vars(&mut self, n: usize, role: Role) -> Vec<VarId> {
        (0..n).map(|_| self.add_var(role, None)).collect()
    }

    /// Adds a variable with role `Constant` clamped to `bit`.
    pub fn add_constant(&mut self, bit: bool, label: Option<String>) -> VarId {
        let v = self.add_var(Role::Constant, label);
        self.clamps.insert(v, bit);
        v
    }

    pub fn add_term(&mut self, term: EnergyTerm) -> Result<()> {
        if let Some(v) = term.vars.iter().find(|v| v.0 >= self.variables.len()) {
            return Err(Error::UnknownVar(*v));
        }
        self.block_starts.push(self.terms.len());
        self.terms.push(term);
        Ok(())
    }

    /// Makes terms `range` one block.
    pub fn join_terms(&mut self, range: std::ops::Range<usize>) {
        let range = range.start..range.end.min(self.terms.len());
        if range.is_empty() {
            return;
        }
        self.block_starts.retain(|s| *s <= range.start || *s >= range.end);
        if let Err(i) = self.block_starts.binary_search(&range.start) {
            self.block_starts.insert(i, range.start);
        }
        if range.end < self.terms.len() {
            if let Err(i) = self.block_starts.binary_search(&range.end) {
                self.block_starts.insert(i, range.end);
            }
        }
    }

    /// Term index ranges of the blocks, in order.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut ends: Vec<usize> = self.block_starts.iter().skip(1).copied().collect();
        ends.push(self.terms.len());
        self.block_starts.iter().zip(ends).map(|(a, b)| *a..b).collect()
    }

    pub fn add_table(&mut self, vars: Vec<VarId>, table: Vec<Energy>) -> Result<()> {
        self.add_term(EnergyTerm::new(vars, table)?)
    }

    pub fn clamp(&mut self, v: VarId, bit: bool) -> Result<()> {
        if v.0 >= self.variables.len() {
            return Err(Error::UnknownVar(v));
        }
        self.clamps.insert(v, bit);
        Ok(())
    }

    pub fn unclamp(&mut self, v: VarId) {
        self.clamps.remove(&v);
    }

    pub fn set_role(&mut self, v: VarId, role: Role) {
        self.variables[v.0].role = role;
    }

    pub fn set_label(&mut self, v: VarId, label: Option<String>) {
        self.variables[v.0].label = label;
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn var(&self, v: VarId) -> &Variable {
        &self.variables[v.0]
    }

    pub fn terms(&self) -> &[EnergyTerm] {
        &self.terms
    }

    pub fn clamps(&self) -> &BTreeMap<VarId, bool> {
        &self.clamps
    }

    pub fn is_clamped(&self, v: VarId) -> bool {
        self.clamps.contains_key(&v)
    }

    pub fn free_vars(&self) -> Vec<VarId> {
        (0..self.variables.len())
            .map(VarId)
            .filter(|v| !self.clamps.contains_key(v))
            .collect()
    }

    pub fn vars_with_role(&self, role: Role) -> Vec<VarId> {
        self.variables
            .iter()
            .filter(|v| v.role == role)
            .map(|v| v.id)
            .collect()
    }

    pub fn find_label(&self, label: &str) -> Option<VarId> {
        self.variables
            .iter()
            .find(|v| v.label.as_deref() == Some(label))
            .map(|v| v.id)
    }

    /// Sum of all term energies under `a`.
    pub fn total_energy(&self, a: &Assignment) -> Result<Energy> {
        self.check_assignment(a)?;
        Ok(self.terms.iter().map(|t| t.energy(a)).sum())
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.variables.len() {
            return Err(Error::IncompleteAssignment {
                expected: self.variables.len(),
                got: a.len(),
            });
        }
        for (v, bit) in &self.clamps {
            if a.get(*v) != *bit {
                return Err(Error::ClampViolation {
                    var: *v,
                    got: a.get(*v),
                });
            }
        }
        Ok(())
    }

    /// Copies `other` into this model. Variables of `other` listed in
    /// `bind` (pairs of `(other_var, self_var)`) are identified with
    /// existing variables; all others are appended in `other`'s order.
    /// Returns the map from `other`'s ids to ids in `self`.
    pub fn merge(&mut self, other: &EnergyModel, bind: &[(VarId, VarId)]) -> Result<Vec<VarId>> {
        let mut map: Vec<Option<VarId>> = vec![None; other.num_vars()];
        for (o, s) in bind {
            if o.0 >= other.num_vars() {
                return Err(Error::UnknownVar(*o));
            }
            if s.0 >= self.num_vars() {
                return Err(Error::UnknownVar(*s));
            }
            map[o.0] = Some(*s);
        }
        let map: Vec<VarId> = other
            .variables
            .iter()
            .zip(map)
            .map(|(var, m)| m.unwrap_or_else(|| self.add_var(var.role, var.label.clone())))
            .collect();
        let offset = self.terms.len();
        for t in &other.terms {
            self.terms.push(t.remapped(&map));
        }
        self.block_starts.extend(other.block_starts.iter().map(|s| s + offset));
        for (v, bit) in &other.clamps {
            self.clamps.insert(map[v.0], *bit);
        }
        Ok(map)
    }

    /// Smallest and largest table entry summed over terms: trivial bounds
    /// on any assignment's energy.
    pub fn energy_bounds(&self) -> (Energy, Energy) {
        let mut lo = Energy::ZERO;
        let mut hi = Energy::ZERO;
        for t in &self.terms {
            lo += *t.table.iter().min().unwrap();
            hi += *t.table.iter().max().unwrap();
        }
        (lo, hi)
    }
}
