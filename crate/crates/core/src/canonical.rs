// SPDX-License-Identifier: Apache-2.0

//! Equivalence classes under wire relabeling and inversion.
//!
//! Relabeling the wires of a circuit, or reversing it, preserves its gate
//! count. So a function `f`, its 24 relabelings `f.conjugate(sigma)`, and the
//! 24 relabelings of `f.inverse()` all have the same size. This set of at most
//! 48 functions is the equivalence class of `f`; its smallest member under the
//! word order is the canonical representative.
//!
//! The 24 relabelings are visited by a fixed walk of 23 adjacent wire swaps
//! (plain changes), so each step is one cheap [`conjugate_adjacent`]. The fast
//! path skips most of them: see [`canonical_word`].

use crate::lanes::Lanes;
use crate::perm::{conjugate_adjacent, Perm, Transposition, WirePerm};

use Transposition::{AB, BC, CD};

/// Adjacent swaps visiting every wire permutation exactly once.
pub const WALK: [Transposition; 23] = [
    CD, BC, AB, CD, AB, BC, CD, AB, CD, BC, AB, CD, AB, BC, CD, AB, CD, BC, AB, CD, AB, BC, CD,
];

/// `WALK_SIGMAS[j]` is the relabeling reached after the first `j` swaps of [`WALK`].
pub const WALK_SIGMAS: [WirePerm; 24] = {
    let mut out = [WirePerm::IDENTITY; 24];
    let mut j = 0;
    while j < 23 {
        out[j + 1] = WALK[j].wire_perm().after(out[j]);
        j += 1;
    }
    out
};

pub fn walk_sigmas() -> &'static [WirePerm; 24] {
    &WALK_SIGMAS
}

/// `POSITIONS[k][sigma_k(x)] = x`
const POSITIONS: [[u8; 16]; 24] = {
    let mut out = [[0u8; 16]; 24];
    let mut k = 0;
    while k < 24 {
        let fwd = WALK_SIGMAS[k].bit_map();
        let mut x = 0;
        while x < 16 {
            out[k][fwd[x] as usize] = x as u8;
            x += 1;
        }
        k += 1;
    }
    out
};

/// `VALUES[k][x] = sigma_k(x)`
const VALUES: [[u8; 16]; 24] = {
    let mut out = [[0u8; 16]; 24];
    let mut k = 0;
    while k < 24 {
        out[k] = WALK_SIGMAS[k].bit_map();
        k += 1;
    }
    out
};

/// Candidate relabelings for a given top nibble `v`.
///
/// The top nibble of a relabeled word is `sigma(f(15))`, because 15 is fixed
/// by every wire permutation. Its smallest possible value is the number with
/// the popcount of `v` and all bits low, so only relabelings reaching that
/// value can produce the class minimum. There are 6 of them for popcount 1
/// and 3, 4 for popcount 2 (padded to 6 by repeating the last) and all 24 for
/// `v = 0` and `v = 15`. Walk indices are ascending.
struct Candidates {
    ks: [[u8; 24]; 16],
    len: [u8; 16],
}

const CANDIDATES: Candidates = {
    let mut c = Candidates { ks: [[0; 24]; 16], len: [0; 16] };
    let mut v = 0;
    while v < 16 {
        let low = (1u8 << (v as u8).count_ones()) - 1;
        let mut n = 0;
        let mut k = 0;
        while k < 24 {
            if VALUES[k][v] == low {
                c.ks[v][n] = k as u8;
                n += 1;
            }
            k += 1;
        }
        while n < 6 {
            c.ks[v][n] = c.ks[v][n - 1];
            n += 1;
        }
        c.len[v] = n as u8;
        v += 1;
    }
    c
};

/// Word of `p.conjugate(WALK_SIGMAS[k])`.
#[inline(always)]
pub fn relabel_word(p: Lanes, k: usize) -> u64 {
    p.relabel_word(&POSITIONS[k], &VALUES[k])
}

/// How to rebuild a class member from the canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassWitness {
    pub sigma: WirePerm,
    pub inverted: bool,
}

impl ClassWitness {
    /// `rep.conjugate(sigma)`, or `rep.inverse().conjugate(sigma)` when inverted.
    pub fn reconstruct(self, rep: Perm) -> Perm {
        let base = if self.inverted { rep.inverse() } else { rep };
        base.conjugate(self.sigma)
    }
}

/// The 24 relabelings of `f` in walk order.
#[inline]
pub fn conjugates(f: Perm) -> [Perm; 24] {
    let mut out = [f; 24];
    let mut cur = f;
    for (j, &t) in WALK.iter().enumerate() {
        cur = conjugate_adjacent(cur, t);
        out[j + 1] = cur;
    }
    out
}

/// The distinct members of the equivalence class of `f`, sorted.
pub fn equivalence_class(f: Perm) -> Vec<Perm> {
    let mut members = class_members(f);
    let n = sort_dedup(&mut members);
    members[..n].to_vec()
}

/// All 48 relabelings of `f` and `f⁻¹`, duplicates included: the relabelings
/// of `f` in walk order, then those of `f⁻¹`.
#[inline]
pub fn class_members(f: Perm) -> [Perm; 48] {
    let mut out = [f; 48];
    out[..24].copy_from_slice(&conjugates(f));
    out[24..].copy_from_slice(&conjugates(f.inverse()));
    out
}

/// Sorts `members` and moves the distinct values to the front; returns how many.
#[inline]
pub fn sort_dedup(members: &mut [Perm; 48]) -> usize {
    members.sort_unstable();
    let mut n = 1;
    for i in 1..48 {
        if members[i] != members[n - 1] {
            members[n] = members[i];
            n += 1;
        }
    }
    n
}

/// Canonical representative of the class of `f` and a witness that rebuilds `f`.
///
/// When the minimum is reachable both with and without inversion, the
/// non-inverted witness is returned; among relabelings the first in walk
/// order wins.
pub fn canonical_rep(f: Perm) -> (Perm, ClassWitness) {
    let sides = [Lanes::from_perm(f), Lanes::from_perm(f.inverse())];
    let mut best = u64::MAX;
    let mut best_k = 0usize;
    let mut inverted = false;
    for (s, lanes) in sides.into_iter().enumerate() {
        let top = lanes.top() as usize;
        for &k in &CANDIDATES.ks[top][..CANDIDATES.len[top] as usize] {
            let w = relabel_word(lanes, k as usize);
            if w < best {
                best = w;
                best_k = k as usize;
                inverted = s == 1;
            }
        }
    }
    let sigma = WALK_SIGMAS[best_k].inverse();
    (Perm::from_word_unchecked(best), ClassWitness { sigma, inverted })
}

/// Only the representative.
#[inline]
pub fn canonical_word(f: Perm) -> Perm {
    canonical_of(Lanes::from_perm(f), Lanes::from_perm(f.inverse()))
}

/// Canonical representative given a permutation and its inverse in byte form;
/// the inner loop of every search.
///
/// Both sides are always tried: candidates from a side whose top nibble has
/// the larger popcount are real class members that cannot win, and skipping
/// them would cost an unpredictable branch.
#[inline(always)]
pub fn canonical_of(plain: Lanes, inv: Lanes) -> Perm {
    #[cfg(all(target_arch = "x86_64", target_feature = "avx512bw", target_feature = "avx512vl"))]
    {
        Perm::from_word_unchecked(wide::canonical_of(plain, inv))
    }
    #[cfg(not(all(target_arch = "x86_64", target_feature = "avx512bw", target_feature = "avx512vl")))]
    {
        let mut best = u64::MAX;
        for lanes in [plain, inv] {
            let top = lanes.top() as usize;
            let ks = &CANDIDATES.ks[top];
            for &k in &ks[..6] {
                best = best.min(relabel_word(lanes, k as usize));
            }
            if CANDIDATES.len[top] > 6 {
                for &k in &ks[6..] {
                    best = best.min(relabel_word(lanes, k as usize));
                }
            }
        }
        Perm::from_word_unchecked(best)
    }
}

/// Four candidate relabelings per 512-bit shuffle.
#[cfg(all(target_arch = "x86_64", target_feature = "avx512bw", target_feature = "avx512vl"))]
mod wide {
    use std::arch::x86_64::*;

    use super::{CANDIDATES, POSITIONS, VALUES};
    use crate::lanes::Lanes;

    /// Shuffle tables of four relabelings, one per 128-bit lane.
    #[derive(Clone, Copy)]
    #[repr(C, align(64))]
    struct Block {
        positions: [u8; 64],
        values: [u8; 64],
    }

    /// `BLOCKS[v]` covers the candidates for top nibble `v`: the first two
    /// blocks hold the (padded) six, all six blocks hold 24.
    const BLOCKS: [[Block; 6]; 16] = {
        let mut out = [[Block { positions: [0; 64], values: [0; 64] }; 6]; 16];
        let mut v = 0;
        while v < 16 {
            let len = CANDIDATES.len[v] as usize;
            let mut slot = 0;
            while slot < 24 {
                // pad by repeating the last candidate
                let i = if slot < len { slot } else { len - 1 };
                let k = CANDIDATES.ks[v][i] as usize;
                let (b, lane) = (slot / 4, slot % 4);
                let mut x = 0;
                while x < 16 {
                    out[v][b].positions[16 * lane + x] = POSITIONS[k][x];
                    out[v][b].values[16 * lane + x] = VALUES[k][x];
                    x += 1;
                }
                slot += 1;
            }
            v += 1;
        }
        out
    };

    /// Each 128-bit lane holds its candidate's packed word twice.
    #[inline(always)]
    unsafe fn relabel4(bytes: __m512i, block: &Block) -> __m512i {
        let pos = _mm512_load_si512(block.positions.as_ptr() as *const _);
        let val = _mm512_load_si512(block.values.as_ptr() as *const _);
        let c = _mm512_shuffle_epi8(val, _mm512_shuffle_epi8(bytes, pos));
        let pairs = _mm512_maddubs_epi16(c, _mm512_set1_epi16(0x1001));
        _mm512_packus_epi16(pairs, pairs)
    }

    #[inline(always)]
    pub fn canonical_of(plain: Lanes, inv: Lanes) -> u64 {
        // SAFETY: AVX-512 BW and VL are enabled for this compilation target
        // and every load is from an aligned 64-byte table.
        unsafe {
            let mut best = _mm512_set1_epi64(-1);
            for lanes in [plain, inv] {
                let blocks = &BLOCKS[lanes.top() as usize];
                let bytes = _mm512_broadcast_i32x4(lanes.raw());
                best = _mm512_min_epu64(best, relabel4(bytes, &blocks[0]));
                best = _mm512_min_epu64(best, relabel4(bytes, &blocks[1]));
                if CANDIDATES.len[lanes.top() as usize] > 6 {
                    for block in &blocks[2..] {
                        best = _mm512_min_epu64(best, relabel4(bytes, block));
                    }
                }
            }
            _mm512_reduce_min_epu64(best)
        }
    }
}

/// Number of distinct members of the class of `f`.
///
/// Relabeling and inversion form a group of order 48 acting on functions, so
/// the class size is 48 divided by the number of group elements fixing `f`.
pub fn class_size(f: Perm) -> usize {
    let (plain, inv) = (Lanes::from_perm(f), Lanes::from_perm(f.inverse()));
    let mut fixed = 0;
    for k in 0..24 {
        fixed += (relabel_word(plain, k) == f.word()) as usize;
        fixed += (relabel_word(inv, k) == f.word()) as usize;
    }
    48 / fixed
}

/// Reference [`canonical_rep`]: walks all 46 adjacent conjugations.
pub fn canonical_rep_walk(f: Perm) -> (Perm, ClassWitness) {
    let mut plain = f;
    let mut inv = f.inverse();
    let mut best = plain;
    let mut best_j = 0usize;
    let mut best_inverted = false;
    if inv < best {
        best = inv;
        best_inverted = true;
    }
    for (j, &t) in WALK.iter().enumerate() {
        plain = conjugate_adjacent(plain, t);
        inv = conjugate_adjacent(inv, t);
        if plain < best || (plain == best && best_inverted) {
            best = plain;
            best_j = j + 1;
            best_inverted = false;
        }
        if inv < best {
            best = inv;
            best_j = j + 1;
            best_inverted = true;
        }
    }
    let sigma = WALK_SIGMAS[best_j].inverse();
    (best, ClassWitness { sigma, inverted: best_inverted })
}
