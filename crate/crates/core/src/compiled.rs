//! Integer form of an energy model shared by the exact and annealing
//! solvers. All tables are rescaled to the least common denominator of
//! their entries, so sums and comparisons are exact `i64` arithmetic.

use num_integer::Integer;

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::model::EnergyModel;

pub(crate) struct CTerm {
    pub vars: Vec<usize>,
    pub table: Vec<i64>,
}

pub(crate) struct Compiled {
    pub n: usize,
    pub denom: i64,
    pub terms: Vec<CTerm>,
    /// For each variable, the terms it appears in with its bit position.
    pub var_terms: Vec<Vec<(usize, u8)>>,
    pub clamps: Vec<Option<bool>>,
    pub blocks: Vec<std::ops::Range<usize>>,
}

impl Compiled {
    pub fn new(model: &EnergyModel) -> Result<Self> {
        let mut denom: i64 = 1;
        for t in model.terms() {
            for e in t.table() {
                denom = denom.lcm(&e.denom());
                if denom <= 0 || denom > (1 << 40) {
                    return Err(Error::Overflow);
                }
            }
        }
        let n = model.num_vars();
        let mut var_terms = vec![Vec::new(); n];
        let mut terms = Vec::with_capacity(model.terms().len());
        for (ti, t) in model.terms().iter().enumerate() {
            let table = t
                .table()
                .iter()
                .map(|e| e.scaled_to(denom).ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
            let vars: Vec<usize> = t.vars().iter().map(|v| v.index()).collect();
            for (pos, v) in vars.iter().enumerate() {
                var_terms[*v].push((ti, pos as u8));
            }
            terms.push(CTerm { vars, table });
        }
        let mut clamps = vec![None; n];
        for (v, b) in model.clamps() {
            clamps[v.index()] = Some(*b);
        }
        Ok(Compiled {
            n,
            denom,
            terms,
            var_terms,
            clamps,
            blocks: model.blocks(),
        })
    }

    pub fn energy(&self, scaled: i64) -> Energy {
        Energy::from_scaled(scaled, self.denom)
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.n).filter(|v| self.clamps[*v].is_none()).collect()
    }

    pub fn term_index(&self, t: usize, bits: &[bool]) -> usize {
        self.terms[t]
            .vars
            .iter()
            .enumerate()
            .fold(0, |acc, (j, v)| acc | (usize::from(bits[*v]) << j))
    }

    pub fn total(&self, bits: &[bool]) -> i64 {
        (0..self.terms.len())
            .map(|t| self.terms[t].table[self.term_index(t, bits)])
            .sum()
    }

    /// Equivalent model for search: clamped variables are substituted into
    /// the tables, and the terms of each block whose free support has at
    /// most `max_vars` variables are merged into one table. Merged blocks
    /// have exact minima, which keeps search bounds tight on gadgets made
    /// of several terms.
    pub fn grouped(&self, max_vars: usize) -> Compiled {
        let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let free_of = |t: usize| -> Vec<usize> {
            self.terms[t].vars.iter().copied().filter(|v| self.clamps[*v].is_none()).collect()
        };
        for block in &self.blocks {
            let mut support: Vec<usize> = Vec::new();
            for t in block.clone() {
                for v in free_of(t) {
                    if !support.contains(&v) {
                        support.push(v);
                    }
                }
            }
            if support.len() <= max_vars {
                groups.push((support, block.clone().collect()));
            } else {
                groups.extend(block.clone().map(|t| (free_of(t), vec![t])));
            }
        }
        let mut var_terms = vec![Vec::new(); self.n];
        let mut terms = Vec::with_capacity(groups.len());
        let mut full = vec![false; self.n];
        for (v, c) in self.clamps.iter().enumerate() {
            full[v] = c.unwrap_or(false);
        }
        for (gi, (vars, members)) in groups.into_iter().enumerate() {
            let mut table = vec![0i64; 1 << vars.len()];
            for (row, entry) in table.iter_mut().enumerate() {
                for (j, v) in vars.iter().enumerate() {
                    full[*v] = row >> j & 1 == 1;
                }
                *entry = members.iter().map(|t| self.terms[*t].table[self.term_index(*t, &full)]).sum();
            }
            for (pos, v) in vars.iter().enumerate() {
                var_terms[*v].push((gi, pos as u8));
            }
            terms.push(CTerm { vars, table });
        }
        let blocks = (0..terms.len()).map(|t| t..t + 1).collect();
        Compiled {
            n: self.n,
            denom: self.denom,
            terms,
            var_terms,
            clamps: self.clamps.clone(),
            blocks,
        }
    }
}
