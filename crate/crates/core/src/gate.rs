// SPDX-License-Identifier: Apache-2.0

//! The 32-gate library: NOT, CNOT, TOF and TOF4 on four wires.

use std::fmt;

use crate::perm::{Perm, WirePerm};

pub const WIRE_NAMES: [char; 4] = ['a', 'b', 'c', 'd'];

/// A multiple-control Toffoli gate: flips `target` when every control wire is 1.
///
/// `controls` is a bit mask over wires and never contains the target. The
/// number of controls selects the gate name: 0 NOT, 1 CNOT, 2 TOF, 3 TOF4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    target: u8,
    controls: u8,
}

impl Gate {
    /// Returns `None` unless `target < 4`, `controls < 16` and the target is
    /// not one of the controls.
    pub const fn new(target: u8, controls: u8) -> Option<Gate> {
        if target > 3 || controls > 15 || controls & (1 << target) != 0 {
            return None;
        }
        Some(Gate { target, controls })
    }

    pub const fn not(target: u8) -> Gate {
        Gate { target, controls: 0 }
    }

    #[inline]
    pub const fn target(self) -> u8 {
        self.target
    }

    #[inline]
    pub const fn controls(self) -> u8 {
        self.controls
    }

    pub const fn num_controls(self) -> u32 {
        self.controls.count_ones()
    }

    pub const fn name(self) -> &'static str {
        match self.num_controls() {
            0 => "NOT",
            1 => "CNOT",
            2 => "TOF",
            _ => "TOF4",
        }
    }

    /// Applies the gate to one 4-bit value.
    #[inline]
    pub fn apply(self, x: u8) -> u8 {
        if x & self.controls == self.controls {
            x ^ (1 << self.target)
        } else {
            x
        }
    }

    pub fn to_perm(self) -> Perm {
        let mut word = 0u64;
        for x in 0..16u8 {
            word |= (self.apply(x) as u64) << (4 * x);
        }
        Perm::from_word_unchecked(word)
    }

    /// The gate whose permutation is `self.to_perm().conjugate(sigma)`: every
    /// wire `w` is renamed `sigma(w)`.
    pub fn conjugate(self, sigma: WirePerm) -> Gate {
        let mut controls = 0;
        for w in 0..4u8 {
            if self.controls & (1 << w) != 0 {
                controls |= 1 << sigma.wire(w);
            }
        }
        Gate { target: sigma.wire(self.target), controls }
    }

    /// Storage byte: bits 0..3 control mask, bits 4..5 target.
    #[inline]
    pub const fn to_byte(self) -> u8 {
        self.controls | (self.target << 4)
    }

    /// Inverse of [`Gate::to_byte`]; bits 6 and 7 must be clear.
    pub const fn from_byte(byte: u8) -> Option<Gate> {
        if byte & 0xC0 != 0 {
            return None;
        }
        Gate::new((byte >> 4) & 3, byte & 15)
    }

    /// Wires in text order: controls ascending, then the target.
    pub fn wires(self) -> Vec<u8> {
        let mut wires: Vec<u8> = (0..4).filter(|w| self.controls & (1 << w) != 0).collect();
        wires.push(self.target);
        wires
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, w) in self.wires().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", WIRE_NAMES[w as usize])?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All 32 gates ordered by control count, then target, then control mask.
pub fn enumerate_gates() -> Vec<Gate> {
    let mut gates = Vec::with_capacity(32);
    for n in 0..4 {
        for target in 0..4u8 {
            for controls in 0..16u8 {
                if controls.count_ones() == n {
                    if let Some(g) = Gate::new(target, controls) {
                        gates.push(g);
                    }
                }
            }
        }
    }
    gates
}

/// The gate library with each gate's permutation precomputed.
#[derive(Debug, Clone)]
pub struct GateSet {
    gates: Vec<Gate>,
    perms: Vec<Perm>,
}

impl GateSet {
    /// Identifier written into table files for this library.
    pub const NCT4_ID: u8 = 1;

    pub fn new() -> GateSet {
        let gates = enumerate_gates();
        let perms = gates.iter().map(|g| g.to_perm()).collect();
        GateSet { gates, perms }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gate, Perm)> + '_ {
        self.gates.iter().copied().zip(self.perms.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

impl Default for GateSet {
    fn default() -> Self {
        GateSet::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::compose;

    #[test]
    fn library_has_32_distinct_self_inverse_gates() {
        let gates = enumerate_gates();
        assert_eq!(gates.len(), 32);
        let counts: Vec<usize> = (0..4)
            .map(|n| gates.iter().filter(|g| g.num_controls() == n).count())
            .collect();
        assert_eq!(counts, [4, 12, 12, 4]);
        let mut perms: Vec<Perm> = gates.iter().map(|g| g.to_perm()).collect();
        for &p in &perms {
            assert_eq!(compose(p, p), Perm::IDENTITY);
            assert_eq!(p.inverse(), p);
        }
        perms.sort();
        perms.dedup();
        assert_eq!(perms.len(), 32);
    }

    #[test]
    fn enumeration_order() {
        let gates = enumerate_gates();
        for pair in gates.windows(2) {
            let key = |g: Gate| (g.num_controls(), g.target(), g.controls());
            assert!(key(pair[0]) < key(pair[1]));
        }
    }

    #[test]
    fn not_a_table() {
        let expected = [1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14];
        assert_eq!(Gate::not(0).to_perm().images(), expected);
    }

    #[test]
    fn tof4_swaps_7_and_15() {
        let g = Gate::new(3, 0b0111).unwrap();
        let mut expected: [u8; 16] = core::array::from_fn(|i| i as u8);
        expected.swap(7, 15);
        assert_eq!(g.to_perm().images(), expected);
        assert_eq!(g.to_string(), "TOF4(a,b,c,d)");
    }

    #[test]
    fn conjugation_renames_wires() {
        let swap_ab = WirePerm([1, 0, 2, 3]);
        assert_eq!(Gate::not(0).conjugate(swap_ab), Gate::not(1));
        let cnot = Gate::new(1, 0b0001).unwrap();
        assert_eq!(cnot.conjugate(WirePerm::IDENTITY), cnot);
    }

    #[test]
    fn conjugation_commutes_with_to_perm() {
        for g in enumerate_gates() {
            for sigma in WirePerm::all() {
                assert_eq!(g.conjugate(sigma).to_perm(), g.to_perm().conjugate(sigma), "{g} {sigma:?}");
            }
        }
    }

    #[test]
    fn byte_encoding() {
        for g in enumerate_gates() {
            assert_eq!(Gate::from_byte(g.to_byte()), Some(g));
        }
        // target a with a among the controls
        assert_eq!(Gate::from_byte(0x01), None);
        assert_eq!(Gate::from_byte(0x40), None);
    }
}
