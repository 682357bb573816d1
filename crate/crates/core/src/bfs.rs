// SPDX-License-Identifier: Apache-2.0

//! Breadth-first generation of the canonical representatives of every size up
//! to `k`.
//!
//! Level `i` is found by appending each of the 32 gates to every
//! representative of size `i - 1` and to its inverse. Together these cover a
//! circuit for some member of every size-`i` class, since a minimal circuit's
//! class can always be rotated so that its first `i - 1` gates build a stored
//! representative or that representative's inverse.

use crate::canonical::{canonical_of, canonical_rep, class_size};
use crate::gate::GateSet;
use crate::lanes::Lanes;
use crate::perm::Perm;
use crate::store::{capacity_for, CanonicalEntry, CanonicalTable, GateSide, StoreError, DEFAULT_MAX_LOAD};

/// Representatives per size for sizes `0..=9`, used to size the slot array.
pub const REDUCED_COUNTS: [u64; 10] =
    [1, 4, 33, 425, 6538, 101_983, 1_482_686, 19_466_575, 225_242_556, 2_208_511_226];

/// Expected number of representatives of size at most `k`. Past the known
/// counts each level is assumed ten times the previous one.
pub fn expected_entries(k: u8) -> u64 {
    let mut total = 0u64;
    let mut last = 0u64;
    for i in 0..=k as usize {
        last = REDUCED_COUNTS.get(i).copied().unwrap_or(last.saturating_mul(10));
        total = total.saturating_add(last);
    }
    total
}

/// Builds the sealed table for sizes `0..=k`.
pub fn build(k: u8, load_target: f64) -> Result<CanonicalTable, StoreError> {
    build_with_progress(k, load_target, |_, _| {})
}

/// [`build`], calling `progress(size, count)` after each level is complete.
pub fn build_with_progress(
    k: u8,
    load_target: f64,
    mut progress: impl FnMut(u8, usize),
) -> Result<CanonicalTable, StoreError> {
    let capacity = capacity_for(expected_entries(k) as usize, load_target);
    let mut table = CanonicalTable::new(k, capacity, DEFAULT_MAX_LOAD);
    table.insert(CanonicalEntry::identity())?;
    progress(0, 1);
    let gates: Vec<_> = GateSet::new().iter().map(|(g, p)| (g, Lanes::from_perm(p))).collect();
    for size in 1..=k {
        table.sort_level(size as usize - 1);
        let frontier = table.level(size as usize - 1).to_vec();
        for f in frontier {
            let inv = f.inverse();
            let sides: &[Perm] = if inv == f { &[f] } else { &[f, inv] };
            for &x in sides {
                let (xl, xil) = (Lanes::from_perm(x), Lanes::from_perm(x.inverse()));
                for &(gate, gl) in &gates {
                    // h = x then gate; its inverse is gate then x⁻¹
                    let h = xl.then(gl);
                    if table.contains(canonical_of(h, gl.then(xil))) {
                        continue;
                    }
                    let (rep, w) = canonical_rep(h.to_perm());
                    let side = if w.inverted { GateSide::First } else { GateSide::Last };
                    let witness = gate.conjugate(w.sigma.inverse());
                    table.insert(CanonicalEntry { rep, witness: Some((witness, side)), size })?;
                }
            }
        }
        progress(size, table.level(size as usize).len());
    }
    table.seal();
    Ok(table)
}

/// Number of functions of each size: the class sizes of each level summed.
pub fn expanded_counts(table: &CanonicalTable) -> Vec<u64> {
    table
        .levels()
        .iter()
        .map(|level| level.iter().map(|&r| class_size(r) as u64).sum())
        .collect()
}
