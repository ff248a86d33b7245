//! Hurwitz existence: realizability of branch data by monodromy.
//!
//! A datum of degree `d` over a genus-`h′` target with fibers of cycle types
//! `λ_1, …, λ_k` is realized iff there are permutations `a_i, b_i, σ_j` on
//! `d` letters with `σ_j` of type `λ_j`,
//! `[a_1, b_1] ∘ … ∘ [a_h′, b_h′] ∘ σ_1 ∘ … ∘ σ_k = id` and a transitive
//! generated group.
//!
//! The search conjugates `σ_1` to a fixed representative and runs a forward
//! dynamic program over states `(partial product, orbit partition)`. Over a
//! genus-0 target the last permutation is forced. Over a positive-genus target
//! the first handle is looked up in a table of commutators; further handles
//! are `(long cycle, id)`, whose commutator is trivial.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::BuildHasherDefault;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::perm::packed::{self, Packed};
use super::{validate_rh, BranchDatum, Permutation};
use crate::ids::PointLabel;

type DetMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

/// The commutator table over `S_7` has 25 million entries; beyond that the
/// positive-genus search is out of reach.
pub const HARD_MAX_DEGREE: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_degree: u32,
    /// Maximum number of ramified fibers.
    pub max_branch_points: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_degree: 6,
            max_branch_points: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search bound exceeded: {0}")]
    SearchBoundExceeded(String),
    #[error("malformed branch datum: {0}")]
    Malformed(String),
}

impl OracleError {
    pub fn code(&self) -> &'static str {
        match self {
            OracleError::SearchBoundExceeded(_) => "search_bound_exceeded",
            OracleError::Malformed(_) => "malformed_datum",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPermutation {
    pub point: PointLabel,
    pub permutation: Permutation,
}

/// Monodromy of a cover. The relation is read in the listed order: handles
/// first, then branch points as they appear in `branch`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyWitness {
    pub degree: u32,
    pub handles: Vec<[Permutation; 2]>,
    pub branch: Vec<BranchPermutation>,
    /// Each labeled preimage names a sheet in the matching cycle of its
    /// point's permutation (the smallest letter of that cycle).
    #[serde(default)]
    pub labels: BTreeMap<PointLabel, u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness degree {0} does not match datum degree {1}")]
    Degree(u32, u32),
    #[error("expected {expected} handle pairs, found {found}")]
    HandleCount { expected: u32, found: usize },
    #[error("`{0}` is not a permutation of the right degree")]
    NotAPermutation(String),
    #[error("branch points of witness and datum differ")]
    Points,
    #[error("permutation over `{0}` has the wrong cycle type")]
    CycleType(PointLabel),
    #[error("product relation fails")]
    Product,
    #[error("monodromy group is not transitive")]
    NotTransitive,
    #[error("label `{0}` is not placed on a cycle of its index")]
    Label(PointLabel),
}

/// Independent check of a witness against a datum. Uses plain slice
/// arithmetic rather than the search's packed representation.
pub fn verify_witness(datum: &BranchDatum, w: &MonodromyWitness) -> Result<(), WitnessError> {
    let d = datum.degree as usize;
    if w.degree != datum.degree {
        return Err(WitnessError::Degree(w.degree, datum.degree));
    }
    if w.handles.len() != datum.target_genus as usize {
        return Err(WitnessError::HandleCount {
            expected: datum.target_genus,
            found: w.handles.len(),
        });
    }
    let valid = |p: &[u8]| {
        let mut seen = vec![false; d];
        p.len() == d
            && p.iter()
                .all(|&y| (y as usize) < d && !std::mem::replace(&mut seen[y as usize], true))
    };
    let all_perms = w
        .handles
        .iter()
        .flat_map(|[a, b]| [a, b])
        .chain(w.branch.iter().map(|b| &b.permutation));
    for p in all_perms.clone() {
        if !valid(&p.0) {
            return Err(WitnessError::NotAPermutation(format!("{:?}", p.0)));
        }
    }

    // Every nontrivial fiber appears exactly once; trivial ones may be listed.
    let mut listed: BTreeMap<&PointLabel, &[u8]> = BTreeMap::new();
    for b in &w.branch {
        if listed.insert(&b.point, &b.permutation.0).is_some() {
            return Err(WitnessError::Points);
        }
    }
    for b in &w.branch {
        if datum.fiber(&b.point).is_none() {
            return Err(WitnessError::Points);
        }
    }
    for f in &datum.fibers {
        let expected = f.cycle_type();
        let actual = match listed.get(&f.point) {
            Some(p) => slice_cycle_type(p),
            None if f.is_unramified() => vec![1; d],
            None => return Err(WitnessError::Points),
        };
        if actual != expected {
            return Err(WitnessError::CycleType(f.point.clone()));
        }
    }

    // Product, right to left, as a plain image vector.
    let compose = |p: &[u8], q: &[u8]| -> Vec<u8> { q.iter().map(|&y| p[y as usize]).collect() };
    let inverse = |p: &[u8]| -> Vec<u8> {
        let mut inv = vec![0u8; p.len()];
        for (x, &y) in p.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        inv
    };
    let mut product: Vec<u8> = (0..d as u8).collect();
    for [a, b] in &w.handles {
        let c = compose(
            &compose(&compose(&a.0, &b.0), &inverse(&a.0)),
            &inverse(&b.0),
        );
        product = compose(&product, &c);
    }
    for b in &w.branch {
        product = compose(&product, &b.permutation.0);
    }
    if product.iter().enumerate().any(|(x, &y)| x != y as usize) {
        return Err(WitnessError::Product);
    }

    // Transitivity by breadth-first search from sheet 0.
    let mut reached = vec![false; d];
    let mut stack = vec![0usize];
    if d > 0 {
        reached[0] = true;
    }
    while let Some(x) = stack.pop() {
        for p in all_perms.clone() {
            let y = p.0[x] as usize;
            if !reached[y] {
                reached[y] = true;
                stack.push(y);
            }
        }
    }
    if !reached.iter().all(|r| *r) {
        return Err(WitnessError::NotTransitive);
    }

    // Labels sit on distinct cycles of the right length.
    for f in &datum.fibers {
        let perm: Vec<u8> = match listed.get(&f.point) {
            Some(p) => p.to_vec(),
            None => (0..d as u8).collect(),
        };
        let mut used_cycles = Vec::new();
        for pre in &f.preimages {
            let Some(label) = &pre.label else { continue };
            let Some(&sheet) = w.labels.get(label) else {
                return Err(WitnessError::Label(label.clone()));
            };
            if sheet as usize >= d {
                return Err(WitnessError::Label(label.clone()));
            }
            let mut cycle = vec![sheet];
            let mut x = perm[sheet as usize];
            while x != sheet {
                cycle.push(x);
                x = perm[x as usize];
            }
            cycle.sort_unstable();
            if cycle.len() as u32 != pre.e || used_cycles.contains(&cycle) {
                return Err(WitnessError::Label(label.clone()));
            }
            used_cycles.push(cycle);
        }
    }
    Ok(())
}

fn slice_cycle_type(p: &[u8]) -> Vec<u32> {
    let mut seen = vec![false; p.len()];
    let mut t = Vec::new();
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = p[x] as usize;
        }
        if len > 0 {
            t.push(len);
        }
    }
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// Permutations found for a sorted list of nontrivial cycle types.
#[derive(Clone, Debug)]
struct Solution {
    handles: Vec<[Packed; 2]>,
    sigmas: Vec<Packed>,
}

type Key = (u32, u32, Vec<Vec<u32>>);

/// For each commutator value, one generating pair per reachable orbit partition.
type CommutatorTable = DetMap<Packed, Vec<(Packed, Packed, Packed)>>;
type ClassTable = BTreeMap<(u32, Vec<u32>), Arc<Vec<Packed>>>;
/// Search state (product, orbits) mapped to its predecessor and the letter taken.
type Layer = DetMap<(Packed, Packed), ((Packed, Packed), Packed)>;

/// Realizability oracle with shared caches. Safe to use from many threads.
#[derive(Debug, Default)]
pub struct HurwitzOracle {
    bounds: SearchBounds,
    results: RwLock<BTreeMap<Key, Option<Solution>>>,
    classes: RwLock<ClassTable>,
    commutators: RwLock<BTreeMap<u32, Arc<CommutatorTable>>>,
}

impl HurwitzOracle {
    pub fn new(bounds: SearchBounds) -> Result<Self, OracleError> {
        if bounds.max_degree == 0 || bounds.max_branch_points == 0 {
            return Err(OracleError::Malformed(
                "search bounds must be positive".into(),
            ));
        }
        if bounds.max_degree > HARD_MAX_DEGREE {
            return Err(OracleError::SearchBoundExceeded(format!(
                "degree bound {} is above the supported maximum {HARD_MAX_DEGREE}",
                bounds.max_degree
            )));
        }
        Ok(HurwitzOracle {
            bounds,
            ..Default::default()
        })
    }

    /// A process-wide oracle with default bounds.
    pub fn shared() -> &'static HurwitzOracle {
        static SHARED: OnceLock<HurwitzOracle> = OnceLock::new();
        SHARED.get_or_init(|| HurwitzOracle::new(SearchBounds::default()).unwrap())
    }

    pub fn bounds(&self) -> SearchBounds {
        self.bounds
    }

    /// Errors if the datum is outside the configured bounds.
    pub fn check_bounds(&self, datum: &BranchDatum) -> Result<(), OracleError> {
        if datum.degree > self.bounds.max_degree {
            return Err(OracleError::SearchBoundExceeded(format!(
                "degree {} exceeds {}",
                datum.degree, self.bounds.max_degree
            )));
        }
        let k = datum.branch_fibers().count();
        if k > self.bounds.max_branch_points {
            return Err(OracleError::SearchBoundExceeded(format!(
                "{k} branch points exceed {}",
                self.bounds.max_branch_points
            )));
        }
        Ok(())
    }

    /// A witness if the datum is realized by a connected cover, `None` if it
    /// is not (including data failing Riemann–Hurwitz).
    pub fn is_realizable(
        &self,
        datum: &BranchDatum,
    ) -> Result<Option<MonodromyWitness>, OracleError> {
        let structural = datum.structural_errors();
        if let Some(err) = structural.into_iter().next() {
            return Err(OracleError::Malformed(err));
        }
        self.check_bounds(datum)?;
        if !validate_rh(datum).valid {
            return Ok(None);
        }
        let d = datum.degree;
        // Nontrivial fibers in a canonical order: by cycle type, then position.
        let mut order: Vec<usize> = (0..datum.fibers.len())
            .filter(|&i| !datum.fibers[i].is_unramified())
            .collect();
        order.sort_by_key(|&i| datum.fibers[i].cycle_type());
        let types: Vec<Vec<u32>> = order
            .iter()
            .map(|&i| datum.fibers[i].cycle_type())
            .collect();
        let key = (d, datum.target_genus, types.clone());

        let cached = self.results.read().unwrap().get(&key).cloned();
        let solution = match cached {
            Some(s) => s,
            None => {
                let s = self.search(d, datum.target_genus, &types);
                self.results.write().unwrap().insert(key, s.clone());
                s
            }
        };
        let Some(solution) = solution else {
            return Ok(None);
        };

        let du = d as usize;
        let mut branch: Vec<BranchPermutation> = order
            .iter()
            .zip(&solution.sigmas)
            .map(|(&i, &s)| BranchPermutation {
                point: datum.fibers[i].point.clone(),
                permutation: Permutation(packed::unpack(s, du)),
            })
            .collect();
        for f in datum.fibers.iter().filter(|f| f.is_unramified()) {
            branch.push(BranchPermutation {
                point: f.point.clone(),
                permutation: Permutation::identity(du),
            });
        }
        let mut labels = BTreeMap::new();
        for b in &branch {
            let fiber = datum.fiber(&b.point).unwrap();
            let mut cycles = b.permutation.cycles();
            for pre in &fiber.preimages {
                let Some(label) = &pre.label else { continue };
                let pos = cycles
                    .iter()
                    .position(|c| c.len() as u32 == pre.e)
                    .expect("cycle type matches the fiber");
                labels.insert(label.clone(), cycles.remove(pos)[0]);
            }
        }
        Ok(Some(MonodromyWitness {
            degree: d,
            handles: solution
                .handles
                .iter()
                .map(|[a, b]| {
                    [
                        Permutation(packed::unpack(*a, du)),
                        Permutation(packed::unpack(*b, du)),
                    ]
                })
                .collect(),
            branch,
            labels,
        }))
    }

    fn class(&self, d: u32, cycle_type: &[u32]) -> Arc<Vec<Packed>> {
        let key = (d, cycle_type.to_vec());
        if let Some(c) = self.classes.read().unwrap().get(&key) {
            return c.clone();
        }
        let members: Vec<Packed> = Permutation::all(d as usize)
            .into_iter()
            .filter(|p| p.cycle_type() == cycle_type)
            .map(|p| packed::pack(&p.0))
            .collect();
        let members = Arc::new(members);
        self.classes.write().unwrap().insert(key, members.clone());
        members
    }

    fn commutator_table(&self, d: u32) -> Arc<CommutatorTable> {
        if let Some(t) = self.commutators.read().unwrap().get(&d) {
            return t.clone();
        }
        let du = d as usize;
        let all: Vec<Packed> = Permutation::all(du)
            .into_iter()
            .map(|p| packed::pack(&p.0))
            .collect();
        let inverses: Vec<Packed> = all.iter().map(|&p| packed::inverse(p, du)).collect();
        let mut table: CommutatorTable = DetMap::default();
        for (i, &a) in all.iter().enumerate() {
            let a_orbits = packed::join_orbits(packed::discrete_orbits(du), a, du);
            for (j, &b) in all.iter().enumerate() {
                let ab = packed::compose(a, b, du);
                let c = packed::compose(packed::compose(ab, inverses[i], du), inverses[j], du);
                let orbits = packed::join_orbits(a_orbits, b, du);
                let entry = table.entry(c).or_default();
                if !entry.iter().any(|(o, _, _)| *o == orbits) {
                    entry.push((orbits, a, b));
                }
            }
        }
        let table = Arc::new(table);
        self.commutators.write().unwrap().insert(d, table.clone());
        table
    }

    fn search(&self, d: u32, h: u32, types: &[Vec<u32>]) -> Option<Solution> {
        let du = d as usize;
        let id = packed::identity(du);
        let long = packed::pack(&Permutation::long_cycle(du).0);
        let extra_handles =
            |count: u32| -> Vec<[Packed; 2]> { (0..count).map(|_| [long, id]).collect() };

        if d == 1 {
            return Some(Solution {
                handles: extra_handles(h),
                sigmas: vec![id; types.len()],
            });
        }
        if types.is_empty() {
            // Unramified: needs a positive-genus target.
            return (h >= 1).then(|| Solution {
                handles: extra_handles(h),
                sigmas: Vec::new(),
            });
        }

        if h == 0 && types.len() == 1 {
            // A single nontrivial permutation cannot be the identity.
            return None;
        }

        // Layered forward search. Layer j holds states after σ_1..σ_{j+1}.
        let first = packed::pack(&Permutation::canonical_of_type(&types[0]).0);
        let start = (
            first,
            packed::join_orbits(packed::discrete_orbits(du), first, du),
        );
        let free = if h == 0 { types.len() - 1 } else { types.len() };
        let mut layers: Vec<Layer> = Vec::new();
        let mut frontier: Vec<(Packed, Packed)> = vec![start];
        for t in &types[1..free] {
            let class = self.class(d, t);
            let mut next: Layer = DetMap::default();
            for &(prod, orbits) in &frontier {
                for &s in class.iter() {
                    let state = (
                        packed::compose(prod, s, du),
                        packed::join_orbits(orbits, s, du),
                    );
                    next.entry(state).or_insert(((prod, orbits), s));
                }
            }
            let mut keys: Vec<(Packed, Packed)> = next.keys().copied().collect();
            keys.sort_unstable();
            frontier = keys;
            layers.push(next);
        }

        let backtrack = |mut state: (Packed, Packed), layers: &[DetMap<_, _>]| -> Vec<Packed> {
            let mut sigmas = Vec::new();
            for layer in layers.iter().rev() {
                let (prev, s): ((Packed, Packed), Packed) = layer[&state];
                sigmas.push(s);
                state = prev;
            }
            sigmas.push(first);
            sigmas.reverse();
            sigmas
        };

        if h == 0 {
            let last = types.last().unwrap();
            for &(prod, orbits) in &frontier {
                let s = packed::inverse(prod, du);
                if packed::is_transitive(orbits, du) && &packed::cycle_type(s, du) == last {
                    let mut sigmas = backtrack((prod, orbits), &layers);
                    sigmas.push(s);
                    return Some(Solution {
                        handles: Vec::new(),
                        sigmas,
                    });
                }
            }
            return None;
        }

        let table = self.commutator_table(d);
        for &(prod, orbits) in &frontier {
            // [a, b] ∘ prod = id
            let needed = packed::inverse(prod, du);
            let Some(pairs) = table.get(&needed) else {
                continue;
            };
            let hit = pairs.iter().find(|(o, _, _)| {
                h >= 2 || packed::is_transitive(join_partitions(orbits, *o, du), du)
            });
            if let Some(&(_, a, b)) = hit {
                let mut handles = vec![[a, b]];
                handles.extend(extra_handles(h - 1));
                return Some(Solution {
                    handles,
                    sigmas: backtrack((prod, orbits), &layers),
                });
            }
        }
        None
    }
}

/// Join of two orbit partitions given as packed smallest-representative vectors.
fn join_partitions(p: Packed, q: Packed, d: usize) -> Packed {
    // Uniting every x with its representative in q is the same as joining q.
    packed::join_orbits(p, q, d)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::datum;
    use super::super::{Fiber, Preimage};
    use super::*;

    fn oracle() -> &'static HurwitzOracle {
        HurwitzOracle::shared()
    }

    /// Oracle: brute force over all tuples in S_d, for tiny cases.
    fn brute_force(d: usize, h: u32, types: &[Vec<u32>]) -> bool {
        let all = Permutation::all(d);
        let classes: Vec<Vec<&Permutation>> = types
            .iter()
            .map(|t| all.iter().filter(|p| &p.cycle_type() == t).collect())
            .collect();
        let mut slots: Vec<Vec<&Permutation>> = Vec::new();
        for _ in 0..2 * h {
            slots.push(all.iter().collect());
        }
        slots.extend(classes);
        let mut chosen: Vec<&Permutation> = Vec::new();
        fn go<'a>(
            d: usize,
            h: usize,
            slots: &[Vec<&'a Permutation>],
            chosen: &mut Vec<&'a Permutation>,
        ) -> bool {
            if chosen.len() == slots.len() {
                let mut prod = Permutation::identity(d);
                for i in 0..h {
                    prod = prod.compose(&Permutation::commutator(chosen[2 * i], chosen[2 * i + 1]));
                }
                for p in &chosen[2 * h..] {
                    prod = prod.compose(p);
                }
                if !prod.is_identity() {
                    return false;
                }
                let mut reached = vec![false; d];
                reached[0] = true;
                let mut stack = vec![0u8];
                while let Some(x) = stack.pop() {
                    for p in chosen.iter() {
                        let y = p.apply(x);
                        if !reached[y as usize] {
                            reached[y as usize] = true;
                            stack.push(y);
                        }
                    }
                }
                return reached.iter().all(|r| *r);
            }
            for p in slots[chosen.len()].clone() {
                chosen.push(p);
                if go(d, h, slots, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        go(d, h as usize, &slots, &mut chosen)
    }

    fn realizable(d: u32, g: u32, h: u32, types: &[&[u32]]) -> bool {
        let b = datum(d, g, h, types);
        let w = oracle().is_realizable(&b).unwrap();
        if let Some(w) = &w {
            verify_witness(&b, w).unwrap();
        }
        w.is_some()
    }

    #[test]
    fn bielliptic_double_cover() {
        assert!(realizable(2, 2, 1, &[&[2], &[2]]));
    }

    #[test]
    fn d2_parity() {
        for k in 0..=8u32 {
            let types: Vec<&[u32]> = vec![&[2]; k as usize];
            let g = (k / 2).saturating_sub(1);
            let b = datum(2, g, 0, &types);
            let rh = validate_rh(&b).valid;
            let w = oracle().is_realizable(&b).unwrap();
            assert_eq!(w.is_some(), rh && k >= 2 && k % 2 == 0, "k = {k}");
        }
    }

    #[test]
    fn klein_exception() {
        assert!(!realizable(4, 0, 0, &[&[2, 2], &[2, 2], &[3, 1]]));
        assert!(!brute_force(4, 0, &[vec![2, 2], vec![2, 2], vec![3, 1]]));
    }

    #[test]
    fn agrees_with_brute_force_genus_zero() {
        for d in 2..=4u32 {
            let types = super::super::partitions(d);
            let nontrivial: Vec<&Vec<u32>> =
                types.iter().filter(|t| t.len() < d as usize).collect();
            for a in &nontrivial {
                for b in &nontrivial {
                    for c in &nontrivial {
                        let ts = vec![(*a).clone(), (*b).clone(), (*c).clone()];
                        let ram: u32 = ts.iter().map(|t| d - t.len() as u32).sum();
                        let Some(g) = super::super::rh_source_genus(d, 0, ram) else {
                            continue;
                        };
                        let refs: Vec<&[u32]> = ts.iter().map(|t| t.as_slice()).collect();
                        assert_eq!(
                            realizable(d, g, 0, &refs),
                            brute_force(d as usize, 0, &ts),
                            "d={d} {ts:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_genus_one() {
        for d in 2..=3u32 {
            for t in super::super::partitions(d) {
                let ram = d - t.len() as u32;
                let Some(g) = super::super::rh_source_genus(d, 1, ram) else {
                    continue;
                };
                let types: Vec<&[u32]> = if ram == 0 { vec![] } else { vec![&t] };
                let expected = brute_force(
                    d as usize,
                    1,
                    &if ram == 0 { vec![] } else { vec![t.clone()] },
                );
                assert_eq!(realizable(d, g, 1, &types), expected, "d={d} {t:?}");
            }
        }
    }

    #[test]
    fn genus_zero_needs_ramification() {
        assert!(!realizable(3, 0, 0, &[]));
        assert!(!realizable(2, 0, 0, &[&[2]]));
        assert!(realizable(1, 0, 0, &[]));
    }

    #[test]
    fn higher_genus_targets() {
        assert!(realizable(3, 4, 2, &[]));
        assert!(realizable(2, 4, 2, &[&[2], &[2]]));
        assert!(realizable(3, 4, 1, &[&[3], &[3], &[2, 1], &[2, 1]]));
    }

    #[test]
    fn labels_attached() {
        let b = BranchDatum::new(
            3,
            0,
            0,
            vec![
                Fiber::new("q1", vec![Preimage::labeled("n1", 3)]),
                Fiber::new("q2", vec![Preimage::labeled("n2", 3)]),
                Fiber::new(
                    "q3",
                    vec![
                        Preimage::labeled("x", 1),
                        Preimage::labeled("y", 1),
                        Preimage::unlabeled(1),
                    ],
                ),
            ],
        );
        let w = oracle().is_realizable(&b).unwrap().unwrap();
        verify_witness(&b, &w).unwrap();
        assert_eq!(w.labels.len(), 4);
        assert_ne!(
            w.labels[&PointLabel::from("x")],
            w.labels[&PointLabel::from("y")]
        );
    }

    #[test]
    fn verifier_rejects_tampering() {
        let b = datum(2, 0, 0, &[&[2], &[2]]);
        let mut w = oracle().is_realizable(&b).unwrap().unwrap();
        w.branch[0].permutation = Permutation::identity(2);
        assert!(verify_witness(&b, &w).is_err());
    }

    #[test]
    fn bounds_enforced() {
        let b = datum(7, 0, 0, &[&[7], &[7]]);
        assert_eq!(
            oracle().is_realizable(&b).unwrap_err().code(),
            "search_bound_exceeded"
        );
        let many: Vec<&[u32]> = vec![&[2]; 10];
        let b = datum(2, 4, 0, &many);
        assert!(oracle().is_realizable(&b).is_err());
    }

    #[test]
    fn d6_search_finishes() {
        assert!(realizable(
            6,
            1,
            0,
            &[&[6], &[3, 3], &[2, 2, 1, 1], &[2, 1, 1, 1, 1]]
        ));
        let mut types: Vec<&[u32]> = vec![&[6]];
        types.extend(std::iter::repeat_n(&[2u32, 1, 1, 1, 1][..], 7));
        assert!(realizable(6, 1, 0, &types));
        assert!(realizable(6, 0, 0, &[&[6], &[6]]));
    }
}
