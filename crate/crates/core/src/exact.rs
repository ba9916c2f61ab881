//! Exact ground-state analysis.
//!
//! Depth-first branch and bound over the free variables in ascending id
//! order. The bound at depth `d` is the sum, over terms that touch an
//! assigned variable, of each term's minimum over the rows consistent
//! with the partial assignment, plus the exact minimum of the sub-model
//! formed by the terms lying entirely on the unassigned suffix. Those
//! suffix minima are computed first, from the last variable backwards,
//! each reusing the ones after it. Children are visited lower bound first,
//! so on networks whose ids follow signal flow the first dive already
//! lands on a consistent configuration.
//!
//! The `cap` argument limits the search frontier (leaves plus pruned
//! subtrees) of each search pass and the number of stored ground states.
//! The frontier of a model with `f` free variables never exceeds `2^f`, so
//! a model with at most `log2(cap)` free variables always fits.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::compiled::Compiled;
use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::model::{Assignment, EnergyModel, VarId};

pub const DEFAULT_CAP: u64 = 1 << 24;

/// Free-variable count from which enumeration splits the first variables
/// across worker threads.
const PARALLEL_THRESHOLD: usize = 16;
const SPLIT_BITS: usize = 3;
/// Search effort allowed for each suffix minimum. A suffix whose minimum
/// is not settled within it keeps a weaker, still valid, bound.
const SUFFIX_EFFORT: u64 = 512;
/// Support limit when merging terms for search.
const GROUP_VARS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundStates {
    pub energy: Energy,
    /// Lexicographic by variable id.
    pub states: Vec<Assignment>,
}

impl GroundStates {
    pub fn degeneracy(&self) -> usize {
        self.states.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub ground_energy: Energy,
    pub ground_degeneracy: u64,
    /// Absent when every assignment has the ground energy.
    pub first_excited_energy: Option<Energy>,
    pub gap: Option<Energy>,
}

struct Budget {
    used: AtomicU64,
    limit: u64,
    free: usize,
}

impl Budget {
    fn new(limit: u64, free: usize) -> Self {
        Budget {
            used: AtomicU64::new(0),
            limit,
            free,
        }
    }

    fn tick(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Err(Error::Capacity {
                budget: self.limit,
                free: self.free,
            });
        }
        Ok(())
    }
}

trait Collector {
    fn prune(&self, bound: i64) -> bool;
    fn leaf(&mut self, energy: i64, val: &[i8]) -> Result<()>;
    fn done(&self) -> bool {
        false
    }
}

struct Enumerate {
    best: i64,
    states: Vec<Vec<bool>>,
    cap: u64,
}

impl Collector for Enumerate {
    fn prune(&self, bound: i64) -> bool {
        bound > self.best
    }

    fn leaf(&mut self, energy: i64, val: &[i8]) -> Result<()> {
        if energy < self.best {
            self.best = energy;
            self.states.clear();
        }
        if energy == self.best {
            if self.states.len() as u64 >= self.cap {
                return Err(Error::Capacity {
                    budget: self.cap,
                    free: val.len(),
                });
            }
            self.states.push(val.iter().map(|b| *b == 1).collect());
        }
        Ok(())
    }
}

struct MinOnly {
    best: i64,
    /// A known lower bound; reaching it ends the search.
    floor: i64,
}

impl Collector for MinOnly {
    fn prune(&self, bound: i64) -> bool {
        bound >= self.best
    }

    fn leaf(&mut self, energy: i64, _: &[i8]) -> Result<()> {
        self.best = self.best.min(energy);
        Ok(())
    }

    fn done(&self) -> bool {
        self.best <= self.floor
    }
}

struct TwoLevels {
    ground: i64,
    count: u64,
    excited: i64,
}

impl Collector for TwoLevels {
    fn prune(&self, bound: i64) -> bool {
        bound >= self.excited
    }

    fn leaf(&mut self, energy: i64, _: &[i8]) -> Result<()> {
        if energy < self.ground {
            self.excited = self.ground;
            self.ground = energy;
            self.count = 1;
        } else if energy == self.ground {
            self.count += 1;
        } else if energy < self.excited {
            self.excited = energy;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Default)]
struct Frame {
    tried: u8,
    first: bool,
    bounds: [i64; 2],
}

struct Search<'a> {
    c: &'a Compiled,
    val: Vec<i8>,
    mask: Vec<u16>,
    bits: Vec<u16>,
    tmin: Vec<i64>,
    active: Vec<bool>,
    /// Sum of `tmin` over active terms.
    bound: i64,
    /// Suffix-minimum surplus by depth: exact minimum of the terms lying
    /// on `order[d..]` minus the sum of their `tmin`.
    extra: Vec<i64>,
}

fn masked_min(table: &[i64], mask: u16, bits: u16) -> i64 {
    let full = (table.len() - 1) as u16;
    let free = full & !mask;
    let mut sub = free;
    let mut best = table[bits as usize];
    loop {
        let idx = (bits | sub) as usize;
        best = best.min(table[idx]);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    best
}

impl<'a> Search<'a> {
    fn new(c: &'a Compiled, extra: Vec<i64>) -> Self {
        let tmin: Vec<i64> = c
            .terms
            .iter()
            .map(|t| *t.table.iter().min().unwrap())
            .collect();
        let bound = tmin.iter().sum();
        let mut s = Search {
            c,
            val: vec![-1; c.n],
            mask: vec![0; c.terms.len()],
            bits: vec![0; c.terms.len()],
            tmin,
            active: vec![true; c.terms.len()],
            bound,
            extra,
        };
        for v in 0..c.n {
            if let Some(b) = c.clamps[v] {
                s.assign(v, b);
            }
        }
        s
    }

    fn assign(&mut self, v: usize, bit: bool) {
        self.val[v] = i8::from(bit);
        for &(t, pos) in &self.c.var_terms[v] {
            self.mask[t] |= 1 << pos;
            if bit {
                self.bits[t] |= 1 << pos;
            }
            let m = masked_min(&self.c.terms[t].table, self.mask[t], self.bits[t]);
            if self.active[t] {
                self.bound += m - self.tmin[t];
            }
            self.tmin[t] = m;
        }
    }

    fn unassign(&mut self, v: usize) {
        self.val[v] = -1;
        for &(t, pos) in &self.c.var_terms[v] {
            self.mask[t] &= !(1 << pos);
            self.bits[t] &= !(1 << pos);
            let m = masked_min(&self.c.terms[t].table, self.mask[t], self.bits[t]);
            if self.active[t] {
                self.bound += m - self.tmin[t];
            }
            self.tmin[t] = m;
        }
    }

    fn bound_if(&self, v: usize, bit: bool) -> i64 {
        let mut b = self.bound;
        for &(t, pos) in &self.c.var_terms[v] {
            if !self.active[t] {
                continue;
            }
            let mask = self.mask[t] | (1 << pos);
            let bits = self.bits[t] | (u16::from(bit) << pos);
            b += masked_min(&self.c.terms[t].table, mask, bits) - self.tmin[t];
        }
        b
    }

    fn set_active(&mut self, t: usize, on: bool) {
        if self.active[t] != on {
            self.active[t] = on;
            if on {
                self.bound += self.tmin[t];
            } else {
                self.bound -= self.tmin[t];
            }
        }
    }

    /// Searches `order[start..]`, all of which must be unassigned, and
    /// leaves them unassigned on success.
    fn run<C: Collector>(&mut self, order: &[usize], start: usize, coll: &mut C, budget: &Budget) -> Result<()> {
        let n = order.len();
        if start == n {
            budget.tick()?;
            return coll.leaf(self.bound, &self.val);
        }
        let mut frames = vec![Frame::default(); n];
        let mut d = start;
        loop {
            if d == n {
                budget.tick()?;
                coll.leaf(self.bound, &self.val)?;
                if coll.done() {
                    for v in &order[start..] {
                        self.unassign(*v);
                    }
                    return Ok(());
                }
                d -= 1;
                continue;
            }
            let v = order[d];
            if frames[d].tried == 0 {
                let extra = self.extra[d + 1];
                let b0 = self.bound_if(v, false) + extra;
                let b1 = self.bound_if(v, true) + extra;
                frames[d].bounds = [b0, b1];
                frames[d].first = b1 < b0;
            }
            if self.val[v] >= 0 {
                self.unassign(v);
            }
            let f = &mut frames[d];
            if f.tried == 2 {
                f.tried = 0;
                if d == start {
                    return Ok(());
                }
                d -= 1;
                continue;
            }
            let bit = if f.tried == 0 { f.first } else { !f.first };
            let b = f.bounds[usize::from(bit)];
            f.tried += 1;
            if coll.prune(b) {
                budget.tick()?;
                continue;
            }
            self.assign(v, bit);
            d += 1;
        }
    }
}

/// Suffix-minimum surplus for every depth of `order`.
fn suffix_bounds(c: &Compiled, order: &[usize]) -> Vec<i64> {
    let n = order.len();
    let mut pos = vec![usize::MAX; c.n];
    for (i, v) in order.iter().enumerate() {
        pos[*v] = i;
    }
    let mut starting: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, term) in c.terms.iter().enumerate() {
        if let Some(first) = term.vars.iter().map(|v| pos[*v]).filter(|p| *p != usize::MAX).min() {
            starting[first].push(t);
        }
    }
    let mut s = Search::new(c, vec![0; n + 1]);
    for t in 0..c.terms.len() {
        s.set_active(t, false);
    }
    for d in (0..n).rev() {
        if d == 0 {
            s.extra[0] = s.extra.get(1).copied().unwrap_or(0);
            break;
        }
        if starting[d].is_empty() {
            s.extra[d] = s.extra[d + 1];
            continue;
        }
        for t in &starting[d] {
            s.set_active(*t, true);
        }
        let root = s.bound;
        let mut coll = MinOnly {
            best: i64::MAX,
            floor: root + s.extra[d + 1],
        };
        let effort = Budget::new(SUFFIX_EFFORT, n - d);
        if s.run(order, d, &mut coll, &effort).is_ok() {
            s.extra[d] = coll.best - root;
        } else {
            for v in &order[d..] {
                if s.val[*v] >= 0 {
                    s.unassign(*v);
                }
            }
            s.extra[d] = s.extra[d + 1];
        }
    }
    s.extra
}

fn prepared_search<'a>(c: &'a Compiled, order: &[usize]) -> Search<'a> {
    let extra = suffix_bounds(c, order);
    Search::new(c, extra)
}

/// Exact minimum of the whole model.
fn minimum(s: &mut Search, order: &[usize], budget: &Budget) -> Result<i64> {
    let mut coll = MinOnly {
        best: i64::MAX,
        floor: s.bound + s.extra[0],
    };
    s.run(order, 0, &mut coll, budget)?;
    Ok(coll.best)
}

fn enumerate_compiled(c: &Compiled, cap: u64) -> Result<(i64, Vec<Vec<bool>>)> {
    let order = c.free_vars();
    let budget = Budget::new(cap, order.len());
    let mut base = prepared_search(c, &order);
    let ground = minimum(&mut base, &order, &Budget::new(cap, order.len()))?;
    if order.len() < PARALLEL_THRESHOLD {
        let mut s = base;
        let mut coll = Enumerate {
            best: ground,
            states: Vec::new(),
            cap,
        };
        s.run(&order, 0, &mut coll, &budget)?;
        return Ok((coll.best, coll.states));
    }
    let extra = base.extra;
    let parts = (0..1usize << SPLIT_BITS)
        .into_par_iter()
        .map(|prefix| {
            let mut s = Search::new(c, extra.clone());
            for (j, v) in order[..SPLIT_BITS].iter().enumerate() {
                s.assign(*v, prefix >> j & 1 == 1);
            }
            let mut coll = Enumerate {
                best: ground,
                states: Vec::new(),
                cap,
            };
            if s.bound + s.extra[SPLIT_BITS] > ground {
                return Ok((ground, Vec::new()));
            }
            s.run(&order, SPLIT_BITS, &mut coll, &budget)?;
            Ok((coll.best, coll.states))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = parts.iter().map(|p| p.0).min().unwrap();
    let mut states = Vec::new();
    for (e, mut st) in parts {
        if e == best {
            states.append(&mut st);
        }
    }
    if states.len() as u64 > cap {
        return Err(Error::Capacity {
            budget: cap,
            free: order.len(),
        });
    }
    Ok((best, states))
}

/// Exact minimum energy and every assignment attaining it.
pub fn enumerate_ground_states(model: &EnergyModel, cap: u64) -> Result<GroundStates> {
    let c = Compiled::new(model)?.grouped(GROUP_VARS);
    let (best, mut states) = enumerate_compiled(&c, cap)?;
    states.sort();
    Ok(GroundStates {
        energy: c.energy(best),
        states: states.into_iter().map(Assignment::new).collect(),
    })
}

/// Exact minimum energy without collecting the minimizers.
pub fn ground_energy(model: &EnergyModel, cap: u64) -> Result<Energy> {
    let c = Compiled::new(model)?.grouped(GROUP_VARS);
    let order = c.free_vars();
    let budget = Budget::new(cap, order.len());
    let mut s = prepared_search(&c, &order);
    Ok(c.energy(minimum(&mut s, &order, &budget)?))
}

pub fn spectrum(model: &EnergyModel, cap: u64) -> Result<SpectrumReport> {
    let c = Compiled::new(model)?.grouped(GROUP_VARS);
    let order = c.free_vars();
    let budget = Budget::new(cap, order.len());
    let mut s = prepared_search(&c, &order);
    let mut coll = TwoLevels {
        ground: i64::MAX,
        count: 0,
        excited: i64::MAX,
    };
    s.run(&order, 0, &mut coll, &budget)?;
    let ground_energy = c.energy(coll.ground);
    let first_excited_energy = (coll.excited != i64::MAX).then(|| c.energy(coll.excited));
    Ok(SpectrumReport {
        ground_energy,
        ground_degeneracy: coll.count,
        first_excited_energy,
        gap: first_excited_energy.map(|e| e - ground_energy),
    })
}

/// Distinct restrictions of `assignments` to `vars`, in sorted order.
pub fn project(assignments: &[Assignment], vars: &[VarId]) -> Result<BTreeSet<Vec<bool>>> {
    let mut out = BTreeSet::new();
    for a in assignments {
        if let Some(v) = vars.iter().find(|v| v.index() >= a.len()) {
            return Err(Error::UnknownVar(*v));
        }
        out.insert(a.project(vars));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Role;
    use proptest::prelude::*;

    fn e(v: i64) -> Energy {
        Energy::int(v)
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn wire_pair() -> EnergyModel {
        let mut m = EnergyModel::new();
        let v = m.add_vars(2, Role::Wire);
        m.add_table(v, vec![e(0), e(1), e(1), e(0)]).unwrap();
        m
    }

    fn and_model() -> (EnergyModel, Vec<VarId>) {
        let mut m = EnergyModel::new();
        let v = m.add_vars(3, Role::Ancilla);
        let table = (0..8)
            .map(|i| e(i64::from((i >> 2 & 1) != (i & 1 & (i >> 1)))))
            .collect();
        m.add_table(v.clone(), table).unwrap();
        (m, v)
    }

    #[test]
    fn wire_pair_ground_states() {
        let g = enumerate_ground_states(&wire_pair(), DEFAULT_CAP).unwrap();
        assert_eq!(g.energy, e(0));
        let got: Vec<_> = g.states.iter().map(|a| a.bits().to_vec()).collect();
        assert_eq!(got, vec![bits("00"), bits("11")]);
        let s = spectrum(&wire_pair(), DEFAULT_CAP).unwrap();
        assert_eq!(s.ground_degeneracy, 2);
        assert_eq!(s.gap, Some(e(1)));
    }

    #[test]
    fn clamped_and_has_unique_ground_state() {
        let (mut m, v) = and_model();
        m.clamp(v[0], true).unwrap();
        m.clamp(v[1], true).unwrap();
        let g = enumerate_ground_states(&m, DEFAULT_CAP).unwrap();
        assert_eq!(g.states.len(), 1);
        assert_eq!(g.states[0].bits(), &bits("111")[..]);
    }

    #[test]
    fn and_spectrum_has_four_ground_rows() {
        let (m, _) = and_model();
        let s = spectrum(&m, DEFAULT_CAP).unwrap();
        assert_eq!(s.ground_degeneracy, 4);
        assert_eq!(s.ground_energy, e(0));
        assert_eq!(s.first_excited_energy, Some(e(1)));
    }

    #[test]
    fn single_clamped_variable_without_terms() {
        let mut m = EnergyModel::new();
        m.add_constant(true, None);
        let s = spectrum(&m, DEFAULT_CAP).unwrap();
        assert_eq!(s.ground_energy, e(0));
        assert_eq!(s.ground_degeneracy, 1);
        assert_eq!(s.first_excited_energy, None);
        assert_eq!(s.gap, None);
    }

    #[test]
    fn projection() {
        let g = enumerate_ground_states(&wire_pair(), DEFAULT_CAP).unwrap();
        let p = project(&g.states, &[VarId(0)]).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![bits("0"), bits("1")]);
        assert!(project(&[], &[VarId(0)]).unwrap().is_empty());
        assert_eq!(
            project(&g.states, &[VarId(7)]),
            Err(Error::UnknownVar(VarId(7)))
        );
    }

    #[test]
    fn capacity_error() {
        let mut m = EnergyModel::new();
        m.add_vars(12, Role::Wire);
        assert!(matches!(
            enumerate_ground_states(&m, 1 << 10),
            Err(Error::Capacity { .. })
        ));
        assert_eq!(
            enumerate_ground_states(&m, 1 << 12).unwrap().states.len(),
            4096
        );
    }

    #[test]
    fn rational_energies() {
        let mut m = EnergyModel::new();
        let v = m.add_vars(2, Role::Wire);
        m.add_table(vec![v[0]], vec![Energy::ratio(1, 3), Energy::ratio(1, 2)])
            .unwrap();
        m.add_table(vec![v[1]], vec![Energy::ratio(1, 6), Energy::ratio(1, 6)])
            .unwrap();
        let g = enumerate_ground_states(&m, DEFAULT_CAP).unwrap();
        assert_eq!(g.energy, Energy::ratio(1, 2));
        assert_eq!(g.states.len(), 2);
    }

    fn brute_force(m: &EnergyModel) -> (Energy, Vec<Assignment>) {
        let n = m.num_vars();
        let mut best = None;
        let mut states = Vec::new();
        for x in 0..1usize << n {
            let a = Assignment::new((0..n).map(|j| x >> j & 1 == 1).collect());
            let Ok(en) = m.total_energy(&a) else { continue };
            match best {
                Some(b) if en > b => {}
                Some(b) if en == b => states.push(a),
                _ => {
                    best = Some(en);
                    states = vec![a];
                }
            }
        }
        states.sort();
        (best.unwrap(), states)
    }

    prop_compose! {
        fn arb_model(max_vars: usize)(n in 1..=max_vars)
            (n in Just(n),
             terms in prop::collection::vec(
                 (prop::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n.min(3)),
                  prop::collection::vec(-3i64..4, 8)), 0..8),
             clamps in prop::collection::vec((0..n, any::<bool>()), 0..3))
            -> EnergyModel
        {
            let mut m = EnergyModel::new();
            m.add_vars(n, Role::Wire);
            for (vars, raw) in terms {
                let k = vars.len();
                let table = raw[..1 << k].iter().map(|v| Energy::int(*v)).collect();
                m.add_table(vars.into_iter().map(VarId).collect(), table).unwrap();
            }
            for (v, b) in clamps {
                m.clamp(VarId(v), b).unwrap();
            }
            m
        }
    }

    proptest! {
        #[test]
        fn matches_brute_force(m in arb_model(7)) {
            let (e0, states) = brute_force(&m);
            let g = enumerate_ground_states(&m, DEFAULT_CAP).unwrap();
            prop_assert_eq!(g.energy, e0);
            prop_assert_eq!(&g.states, &states);
            prop_assert_eq!(ground_energy(&m, DEFAULT_CAP).unwrap(), e0);
            let s = spectrum(&m, DEFAULT_CAP).unwrap();
            prop_assert_eq!(s.ground_degeneracy, states.len() as u64);
        }

        #[test]
        fn energy_is_additive_over_term_partitions(m in arb_model(6), split in 0usize..8, x in any::<u64>()) {
            let n = m.num_vars();
            let mut a = Assignment::new((0..n).map(|j| x >> j & 1 == 1).collect());
            for (v, b) in m.clamps() { a.set(*v, *b); }
            let mut left = EnergyModel::new();
            let mut right = EnergyModel::new();
            left.add_vars(n, Role::Wire);
            right.add_vars(n, Role::Wire);
            for (i, t) in m.terms().iter().enumerate() {
                let dst = if i < split { &mut left } else { &mut right };
                dst.add_term(t.clone()).unwrap();
            }
            prop_assert_eq!(
                m.total_energy(&a).unwrap(),
                left.total_energy(&a).unwrap() + right.total_energy(&a).unwrap()
            );
        }

        #[test]
        fn spectrum_is_invariant_under_term_order_and_relabeling(m in arb_model(6), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = m.num_vars();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut terms: Vec<_> = m.terms().to_vec();
            terms.shuffle(&mut rng);
            let mut r = EnergyModel::new();
            r.add_vars(n, Role::Wire);
            for t in terms {
                let vars = t.vars().iter().map(|v| VarId(perm[v.index()])).collect();
                r.add_table(vars, t.table().to_vec()).unwrap();
            }
            for (v, b) in m.clamps() { r.clamp(VarId(perm[v.index()]), *b).unwrap(); }
            prop_assert_eq!(spectrum(&m, DEFAULT_CAP).unwrap(), spectrum(&r, DEFAULT_CAP).unwrap());
        }

        #[test]
        fn clamping_equals_filtering(m in arb_model(6), v in 0usize..6, bit in any::<bool>()) {
            let v = VarId(v % m.num_vars());
            prop_assume!(!m.is_clamped(v));
            let mut clamped = m.clone();
            clamped.clamp(v, bit).unwrap();
            let direct = enumerate_ground_states(&clamped, DEFAULT_CAP).unwrap();
            let (_, _) = brute_force(&m);
            let n = m.num_vars();
            let mut best = None;
            let mut filtered = Vec::new();
            for x in 0..1usize << n {
                let a = Assignment::new((0..n).map(|j| x >> j & 1 == 1).collect());
                if a.get(v) != bit { continue; }
                let Ok(en) = m.total_energy(&a) else { continue };
                match best {
                    Some(b) if en > b => {}
                    Some(b) if en == b => filtered.push(a),
                    _ => { best = Some(en); filtered = vec![a]; }
                }
            }
            filtered.sort();
            prop_assert_eq!(direct.energy, best.unwrap());
            prop_assert_eq!(direct.states, filtered);
        }
    }

    #[test]
    fn parallel_split_matches_serial_search() {
        // 18 free variables: above the split threshold.
        let mut m = EnergyModel::new();
        let v = m.add_vars(18, Role::Wire);
        for w in v.windows(2) {
            m.add_table(w.to_vec(), vec![e(0), e(1), e(1), e(0)]).unwrap();
        }
        m.add_table(vec![v[5]], vec![e(0), e(0)]).unwrap();
        let g = enumerate_ground_states(&m, DEFAULT_CAP).unwrap();
        assert_eq!(g.states.len(), 2);
        assert!(g.states[0].bits().iter().all(|b| !b));
        assert!(g.states[1].bits().iter().all(|b| *b));
    }

    #[test]
    fn non_ground_assignments_are_strictly_higher() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut m = EnergyModel::new();
        let v = m.add_vars(20, Role::Wire);
        for _ in 0..30 {
            let a = rng.gen_range(0..20);
            let b = (a + rng.gen_range(1..20)) % 20;
            let table = (0..4).map(|_| e(rng.gen_range(-2..3))).collect();
            m.add_table(vec![v[a], v[b]], table).unwrap();
        }
        let g = enumerate_ground_states(&m, DEFAULT_CAP).unwrap();
        for s in &g.states {
            assert_eq!(m.total_energy(s).unwrap(), g.energy);
        }
        let mut checked = 0;
        while checked < 1000 {
            let a = Assignment::new((0..20).map(|_| rng.gen()).collect());
            if g.states.binary_search(&a).is_ok() {
                continue;
            }
            assert!(m.total_energy(&a).unwrap() > g.energy);
            checked += 1;
        }
    }
}
