// SPDX-License-Identifier: Apache-2.0

//! Deliberately naive reference code for tests.
//!
//! Nothing here shares code with the optimized crate: permutations are plain
//! arrays, gates are evaluated bit by bit, and search stores every function
//! explicitly with no symmetry reduction.

use std::collections::{HashMap, HashSet};
use std::fmt;

/// A permutation of 0..16 stored as its images.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrayPerm(pub [u8; 16]);

impl ArrayPerm {
    pub fn identity() -> ArrayPerm {
        let mut images = [0u8; 16];
        for (i, v) in images.iter_mut().enumerate() {
            *v = i as u8;
        }
        ArrayPerm(images)
    }

    /// `None` unless `images` holds each of 0..16 exactly once.
    pub fn new(images: [u8; 16]) -> Option<ArrayPerm> {
        let mut seen = [false; 16];
        for &v in &images {
            if v > 15 || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(ArrayPerm(images))
    }

    /// `x -> next(self(x))`: apply `self` first.
    pub fn then(&self, next: &ArrayPerm) -> ArrayPerm {
        let mut out = [0u8; 16];
        for (o, &y) in out.iter_mut().zip(&self.0) {
            *o = next.0[y as usize];
        }
        ArrayPerm(out)
    }

    pub fn inverse(&self) -> ArrayPerm {
        let mut out = [0u8; 16];
        for x in 0..16 {
            out[self.0[x] as usize] = x as u8;
        }
        ArrayPerm(out)
    }
}

impl fmt::Debug for ArrayPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}


/// All 32 gates: every target with every subset of the other three wires.
pub fn all_gates() -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for target in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&w| w != target).collect();
        for subset in 0..8 {
            let controls = (0..3).filter(|i| subset & (1 << i) != 0).map(|i| others[i]).collect();
            out.push((target, controls));
        }
    }
    out
}

/// The permutation computed by one gate.
pub fn gate_perm(target: usize, controls: &[usize]) -> ArrayPerm {
    let mut out = [0u8; 16];
    for (x, v) in out.iter_mut().enumerate() {
        let bits: Vec<bool> = (0..4).map(|w| (x >> w) & 1 == 1).collect();
        let fire = controls.iter().all(|&c| bits[c]);
        let mut y = bits.clone();
        if fire {
            y[target] = !y[target];
        }
        *v = (0..4).map(|w| (y[w] as u8) << w).sum();
    }
    ArrayPerm(out)
}

pub fn gate_perms() -> Vec<ArrayPerm> {
    all_gates().iter().map(|(t, c)| gate_perm(*t, c)).collect()
}

/// Optimal size of every function with at most `max_size` gates, found by
/// unreduced breadth-first search from the identity.
pub fn naive_bfs(max_size: u8) -> HashMap<ArrayPerm, u8> {
    assert!(max_size <= 4, "the naive search stores every function explicitly");
    let gates = gate_perms();
    let mut sizes = HashMap::from([(ArrayPerm::identity(), 0u8)]);
    let mut frontier = vec![ArrayPerm::identity()];
    for size in 1..=max_size {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gates {
                let h = f.then(g);
                if let std::collections::hash_map::Entry::Vacant(e) = sizes.entry(h) {
                    e.insert(size);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    sizes
}

/// Every function computed by a circuit of at most two gates.
pub fn exhaustive_two_gate() -> HashSet<ArrayPerm> {
    let gates = gate_perms();
    let mut out = HashSet::from([ArrayPerm::identity()]);
    for g in &gates {
        out.insert(*g);
        for h in &gates {
            out.insert(g.then(h));
        }
    }
    out
}

/// Number of functions of each size in `sizes`.
pub fn level_counts(sizes: &HashMap<ArrayPerm, u8>) -> Vec<u64> {
    let max = sizes.values().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u64; max + 1];
    for &s in sizes.values() {
        counts[s as usize] += 1;
    }
    counts
}
