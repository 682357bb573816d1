// SPDX-License-Identifier: Apache-2.0

//! Packed 4-bit reversible functions.
//!
//! A reversible function on four bits is a permutation of `0..16`. We store it
//! in a single `u64`: nibble `i` (bits `4i..4i+3`) holds the image of `i`. With
//! this layout composition, inversion and wire relabeling are a handful of
//! shifts and masks, and two permutations can be ordered with one integer
//! comparison.
//!
//! Wires are numbered `a = 0`, `b = 1`, `c = 2`, `d = 3`, and wire `w` is bit
//! `w` of the 4-bit value.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A permutation of `0..16` packed into a 64-bit word.
///
/// The derived `Ord` compares the raw words as unsigned integers, which is the
/// total order used to choose canonical representatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(u64);

/// Errors produced when building a [`Perm`] from untrusted input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("expected 16 images, found {0}")]
    WrongLength(usize),
    #[error("image {value} at position {index} is out of range 0..16")]
    OutOfRange { index: usize, value: u64 },
    #[error("value {0} appears more than once")]
    Repeated(u8),
    #[error("cannot parse {token:?} as an image: {reason}")]
    Syntax { token: String, reason: String },
    #[error("point {0} is out of range 0..16")]
    PointOutOfRange(u8),
}

impl Perm {
    pub const IDENTITY: Perm = Perm(0xFEDC_BA98_7654_3210);

    /// Wraps a raw word, checking that its nibbles form a permutation.
    pub fn from_word(word: u64) -> Result<Perm, PermError> {
        let mut seen = 0u16;
        for i in 0..16 {
            let v = ((word >> (4 * i)) & 15) as u8;
            if seen & (1 << v) != 0 {
                return Err(PermError::Repeated(v));
            }
            seen |= 1 << v;
        }
        Ok(Perm(word))
    }

    /// Wraps a raw word without validation.
    ///
    /// The caller guarantees the word is a permutation; every operation on
    /// `Perm` assumes it.
    #[inline(always)]
    pub const fn from_word_unchecked(word: u64) -> Perm {
        Perm(word)
    }

    #[inline(always)]
    pub const fn word(self) -> u64 {
        self.0
    }

    pub fn from_images(images: &[u8]) -> Result<Perm, PermError> {
        if images.len() != 16 {
            return Err(PermError::WrongLength(images.len()));
        }
        let mut word = 0u64;
        for (i, &v) in images.iter().enumerate() {
            if v > 15 {
                return Err(PermError::OutOfRange { index: i, value: v as u64 });
            }
            word |= (v as u64) << (4 * i);
        }
        Perm::from_word(word)
    }

    pub fn images(self) -> [u8; 16] {
        let mut out = [0u8; 16];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = ((self.0 >> (4 * i)) & 15) as u8;
        }
        out
    }

    /// Builds a permutation from a function on `0..16`, which must be a bijection.
    pub fn from_fn(f: impl Fn(u8) -> u8) -> Result<Perm, PermError> {
        let images: Vec<u8> = (0..16u8).map(f).collect();
        Perm::from_images(&images)
    }

    #[inline(always)]
    pub fn is_identity(self) -> bool {
        self == Perm::IDENTITY
    }

    /// Image of `x`.
    pub fn apply(self, x: u8) -> Result<u8, PermError> {
        if x > 15 {
            return Err(PermError::PointOutOfRange(x));
        }
        Ok(self.image(x))
    }

    #[inline(always)]
    pub fn image(self, x: u8) -> u8 {
        ((self.0 >> (4 * (x as u32 & 15))) & 15) as u8
    }

    /// The permutation `x -> q(p(x))`: `self` is applied first.
    #[inline(always)]
    pub fn then(self, q: Perm) -> Perm {
        compose(self, q)
    }

    #[inline(always)]
    pub fn inverse(self) -> Perm {
        inverse(self)
    }

    /// Relabels wires by `sigma`: the result on `sigma(x)` is `sigma(self(x))`.
    pub fn conjugate(self, sigma: WirePerm) -> Perm {
        let forward = sigma.bit_map();
        let mut word = 0u64;
        for x in 0..16u8 {
            let y = forward[self.image(x) as usize];
            word |= (y as u64) << (4 * forward[x as usize]);
        }
        Perm(word)
    }

    /// Conjugation by one of the adjacent wire swaps (a b), (b c), (c d).
    #[inline(always)]
    pub fn conjugate_adjacent(self, t: Transposition) -> Perm {
        conjugate_adjacent(self, t)
    }

    /// Cyclic shift `x -> x + 1 mod 16`.
    pub fn shift(by: u8) -> Perm {
        let mut word = 0u64;
        for x in 0..16u64 {
            word |= ((x + by as u64) & 15) << (4 * x);
        }
        Perm(word)
    }
}

impl Default for Perm {
    fn default() -> Self {
        Perm::IDENTITY
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

/// Formats as `[f(0),f(1),...,f(15)]`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.images().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Parses 16 comma-separated images, with or without surrounding brackets.
impl FromStr for Perm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Perm, PermError> {
        let s = s.trim();
        let s = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(s);
        let mut images = Vec::with_capacity(16);
        for (index, token) in s.split(',').enumerate() {
            let token = token.trim();
            let value: u64 = token.parse().map_err(|e: std::num::ParseIntError| {
                PermError::Syntax { token: token.to_string(), reason: e.to_string() }
            })?;
            if value > 15 {
                return Err(PermError::OutOfRange { index, value });
            }
            images.push(value as u8);
        }
        Perm::from_images(&images)
    }
}

/// `r(x) = q(p(x))`.
#[inline(always)]
pub fn compose(p: Perm, q: Perm) -> Perm {
    let (mut p, q) = (p.0, q.0);
    let mut r = 0u64;
    let mut shift = 0;
    while shift < 64 {
        r |= ((q >> ((p & 15) << 2)) & 15) << shift;
        p >>= 4;
        shift += 4;
    }
    Perm(r)
}

#[inline(always)]
pub fn inverse(p: Perm) -> Perm {
    let mut p = p.0;
    let mut q = 0u64;
    let mut x = 0u64;
    while x < 16 {
        q |= x << ((p & 15) << 2);
        p >>= 4;
        x += 1;
    }
    Perm(q)
}

/// One of the three adjacent wire transpositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transposition {
    /// swap wires a and b
    AB,
    /// swap wires b and c
    BC,
    /// swap wires c and d
    CD,
}

impl Transposition {
    pub const ALL: [Transposition; 3] = [Transposition::AB, Transposition::BC, Transposition::CD];

    /// Index of the lower wire.
    pub const fn low_wire(self) -> u8 {
        match self {
            Transposition::AB => 0,
            Transposition::BC => 1,
            Transposition::CD => 2,
        }
    }

    pub const fn wire_perm(self) -> WirePerm {
        let mut map = [0, 1, 2, 3];
        let i = self.low_wire() as usize;
        map[i] = i as u8 + 1;
        map[i + 1] = i as u8;
        WirePerm(map)
    }
}

/// Conjugation by an adjacent wire swap in two mask-and-shift phases: first
/// the nibbles trade places (positions whose two swapped bits differ), then
/// the two bits are swapped inside every nibble value.
#[inline(always)]
pub fn conjugate_adjacent(p: Perm, t: Transposition) -> Perm {
    let p = p.0;
    let r = match t {
        Transposition::AB => {
            let p = (p & 0xF00F_F00F_F00F_F00F)
                | ((p & 0x00F0_00F0_00F0_00F0) << 4)
                | ((p & 0x0F00_0F00_0F00_0F00) >> 4);
            (p & 0xCCCC_CCCC_CCCC_CCCC)
                | ((p & 0x1111_1111_1111_1111) << 1)
                | ((p & 0x2222_2222_2222_2222) >> 1)
        }
        Transposition::BC => {
            let p = (p & 0xFF00_00FF_FF00_00FF)
                | ((p & 0x0000_FF00_0000_FF00) << 8)
                | ((p & 0x00FF_0000_00FF_0000) >> 8);
            (p & 0x9999_9999_9999_9999)
                | ((p & 0x2222_2222_2222_2222) << 1)
                | ((p & 0x4444_4444_4444_4444) >> 1)
        }
        Transposition::CD => {
            let p = (p & 0xFFFF_0000_0000_FFFF)
                | ((p & 0x0000_0000_FFFF_0000) << 16)
                | ((p & 0x0000_FFFF_0000_0000) >> 16);
            (p & 0x3333_3333_3333_3333)
                | ((p & 0x4444_4444_4444_4444) << 1)
                | ((p & 0x8888_8888_8888_8888) >> 1)
        }
    };
    Perm(r)
}

/// Thomas Wang's 64-bit integer mix (`hash64shift`); all right shifts are logical.
#[inline(always)]
pub fn hash64(key: u64) -> u64 {
    let mut key = (!key).wrapping_add(key << 21);
    key ^= key >> 24;
    key = key.wrapping_add(key << 3).wrapping_add(key << 8);
    key ^= key >> 14;
    key = key.wrapping_add(key << 2).wrapping_add(key << 4);
    key ^= key >> 28;
    key.wrapping_add(key << 31)
}

/// A permutation of the four wires: wire `i` is relabeled `self.0[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WirePerm(pub [u8; 4]);

impl WirePerm {
    pub const IDENTITY: WirePerm = WirePerm([0, 1, 2, 3]);

    pub fn new(map: [u8; 4]) -> Option<WirePerm> {
        let mut seen = 0u8;
        for &w in &map {
            if w > 3 || seen & (1 << w) != 0 {
                return None;
            }
            seen |= 1 << w;
        }
        Some(WirePerm(map))
    }

    /// All 24 wire permutations in lexicographic order of their maps.
    pub fn all() -> [WirePerm; 24] {
        let mut out = [WirePerm::IDENTITY; 24];
        let mut n = 0;
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    if a == b || a == c || b == c {
                        continue;
                    }
                    let d = 6 - a - b - c;
                    out[n] = WirePerm([a, b, c, d]);
                    n += 1;
                }
            }
        }
        debug_assert_eq!(n, 24);
        out
    }

    #[inline]
    pub const fn wire(self, w: u8) -> u8 {
        self.0[w as usize]
    }

    pub const fn inverse(self) -> WirePerm {
        let mut inv = [0u8; 4];
        let mut i = 0;
        while i < 4 {
            inv[self.0[i] as usize] = i as u8;
            i += 1;
        }
        WirePerm(inv)
    }

    /// `self` after `first`: wire `w` goes to `self(first(w))`.
    pub const fn after(self, first: WirePerm) -> WirePerm {
        WirePerm([
            self.0[first.0[0] as usize],
            self.0[first.0[1] as usize],
            self.0[first.0[2] as usize],
            self.0[first.0[3] as usize],
        ])
    }

    /// Moves each bit `i` of a 4-bit value to position `self(i)`.
    #[inline]
    pub const fn map_bits(self, x: u8) -> u8 {
        let mut y = 0;
        let mut i = 0;
        while i < 4 {
            y |= ((x >> i) & 1) << self.0[i];
            i += 1;
        }
        y
    }

    /// [`WirePerm::map_bits`] tabulated over `0..16`.
    pub const fn bit_map(self) -> [u8; 16] {
        let mut out = [0u8; 16];
        let mut x = 0;
        while x < 16 {
            out[x] = self.map_bits(x as u8);
            x += 1;
        }
        out
    }

    /// The reversible function that moves bits around as `map_bits` does.
    pub fn to_perm(self) -> Perm {
        let mut word = 0u64;
        for x in 0..16u8 {
            word |= (self.map_bits(x) as u64) << (4 * x);
        }
        Perm(word)
    }
}

impl Default for WirePerm {
    fn default() -> Self {
        WirePerm::IDENTITY
    }
}
