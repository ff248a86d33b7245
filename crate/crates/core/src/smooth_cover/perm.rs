//! Permutations on `{0, …, d−1}` and integer partitions.
//!
//! Composition is right to left: `(p ∘ q)(x) = p(q(x))`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A permutation stored as its image vector: `self.0[x]` is the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<u8>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((0..d as u8).collect())
    }

    /// The cycle `(0 1 … d−1)`.
    pub fn long_cycle(d: usize) -> Self {
        Permutation((0..d).map(|x| ((x + 1) % d) as u8).collect())
    }

    /// Builds a permutation from disjoint cycles; letters not mentioned are fixed.
    pub fn from_cycles(d: usize, cycles: &[&[u8]]) -> Self {
        let mut images: Vec<u8> = (0..d as u8).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0
            .iter()
            .all(|&y| (y as usize) < seen.len() && !std::mem::replace(&mut seen[y as usize], true))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&y| self.0[y as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Permutation(inv)
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b).compose(&a.inverse()).compose(&b.inverse())
    }

    /// Disjoint cycles, each starting at its smallest letter, ordered by that letter.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u8);
                x = self.0[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut t: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// The permutation with consecutive cycles of the given lengths.
    pub fn canonical_of_type(cycle_type: &[u32]) -> Permutation {
        let d: u32 = cycle_type.iter().sum();
        let mut images = vec![0u8; d as usize];
        let mut start = 0u32;
        for &len in cycle_type {
            for i in 0..len {
                images[(start + i) as usize] = (start + (i + 1) % len) as u8;
            }
            start += len;
        }
        Permutation(images)
    }

    /// Every permutation of `{0, …, d−1}` in lexicographic order.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = (0..d as u8).collect();
        loop {
            out.push(Permutation(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..d).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..d).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on letters `1..=d`, fixed points omitted; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let letters: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", letters.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// All partitions of `n` into positive parts, each non-increasing, listed
/// in reverse lexicographic order (`[n]` first).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` into exactly `k` parts.
pub fn partitions_into(n: u32, k: usize) -> Vec<Vec<u32>> {
    partitions(n).into_iter().filter(|p| p.len() == k).collect()
}

/// Permutations packed four bits per letter, for the search. Supports d ≤ 16.
pub(crate) mod packed {
    pub type Packed = u64;

    pub fn get(p: Packed, x: usize) -> usize {
        ((p >> (4 * x)) & 0xF) as usize
    }

    pub fn pack(images: &[u8]) -> Packed {
        images
            .iter()
            .enumerate()
            .fold(0, |acc, (x, &y)| acc | (u64::from(y) << (4 * x)))
    }

    pub fn unpack(p: Packed, d: usize) -> Vec<u8> {
        (0..d).map(|x| get(p, x) as u8).collect()
    }

    pub fn identity(d: usize) -> Packed {
        (0..d).fold(0, |acc, x| acc | ((x as u64) << (4 * x)))
    }

    /// `p ∘ q`
    pub fn compose(p: Packed, q: Packed, d: usize) -> Packed {
        (0..d).fold(0, |acc, x| acc | ((get(p, get(q, x)) as u64) << (4 * x)))
    }

    pub fn inverse(p: Packed, d: usize) -> Packed {
        (0..d).fold(0, |acc, x| acc | ((x as u64) << (4 * get(p, x))))
    }

    /// Orbits of the group generated by the letters' current partition and
    /// `p`, as a packed vector of smallest representatives.
    pub fn join_orbits(orbits: Packed, p: Packed, d: usize) -> Packed {
        let mut root: [usize; 16] = [0; 16];
        for (x, r) in root.iter_mut().enumerate().take(d) {
            *r = get(orbits, x);
        }
        fn find(root: &mut [usize; 16], mut x: usize) -> usize {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        for x in 0..d {
            let (a, b) = (find(&mut root, x), find(&mut root, get(p, x)));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                root[hi] = lo;
            }
        }
        (0..d).fold(0, |acc, x| acc | ((find(&mut root, x) as u64) << (4 * x)))
    }

    /// The partition into singletons.
    pub fn discrete_orbits(d: usize) -> Packed {
        identity(d)
    }

    pub fn is_transitive(orbits: Packed, d: usize) -> bool {
        (0..d).all(|x| get(orbits, x) == 0)
    }

    pub fn cycle_type(p: Packed, d: usize) -> Vec<u32> {
        let mut seen = [false; 16];
        let mut t = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = get(p, x);
            }
            t.push(len);
        }
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}
