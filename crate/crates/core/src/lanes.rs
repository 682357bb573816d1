// SPDX-License-Identifier: Apache-2.0

//! Permutations unpacked to one byte per image.
//!
//! In this form composition and wire relabeling are byte shuffles. With SSSE3
//! (enabled at compile time) a shuffle is one instruction; otherwise the
//! portable fallback loops over the sixteen bytes.

use crate::perm::Perm;

/// Byte `i` holds the image of `i`.
#[derive(Clone, Copy)]
pub struct Lanes(imp::Raw);

impl Lanes {
    #[inline(always)]
    pub fn from_perm(p: Perm) -> Lanes {
        Lanes(imp::unpack(p.word()))
    }

    #[inline(always)]
    pub fn to_perm(self) -> Perm {
        Perm::from_word_unchecked(imp::pack(self.0))
    }

    /// `x -> q(self(x))`, the byte form of [`crate::perm::compose`].
    #[inline(always)]
    pub fn then(self, q: Lanes) -> Lanes {
        Lanes(imp::shuffle(q.0, self.0))
    }

    /// The image of 15, which is the top nibble of the packed word.
    #[inline(always)]
    pub fn top(self) -> u8 {
        imp::top(self.0)
    }

    /// Packed word of `r` with `r[y] = values[self[positions[y]]]`.
    #[inline(always)]
    pub(crate) fn relabel_word(self, positions: &[u8; 16], values: &[u8; 16]) -> u64 {
        imp::relabel(self.0, positions, values)
    }
}

#[cfg(all(target_arch = "x86_64", target_feature = "ssse3"))]
impl Lanes {
    #[inline(always)]
    pub(crate) fn raw(self) -> std::arch::x86_64::__m128i {
        self.0
    }
}

impl std::fmt::Debug for Lanes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lanes({})", self.to_perm())
    }
}

#[cfg(all(target_arch = "x86_64", target_feature = "ssse3"))]
mod imp {
    use std::arch::x86_64::*;

    pub type Raw = __m128i;

    #[inline(always)]
    pub fn unpack(word: u64) -> Raw {
        // SAFETY: SSE2 and SSSE3 are enabled for this compilation target.
        unsafe {
            let w = _mm_cvtsi64_si128(word as i64);
            let lo = _mm_and_si128(w, _mm_set1_epi8(0x0F));
            let hi = _mm_and_si128(_mm_srli_epi64(w, 4), _mm_set1_epi8(0x0F));
            _mm_unpacklo_epi8(lo, hi)
        }
    }

    #[inline(always)]
    pub fn pack(v: Raw) -> u64 {
        // SAFETY: as above.
        unsafe {
            let pairs = _mm_maddubs_epi16(v, _mm_set1_epi16(0x1001));
            _mm_cvtsi128_si64(_mm_packus_epi16(pairs, pairs)) as u64
        }
    }

    /// `out[i] = table[index[i]]`
    #[inline(always)]
    pub fn shuffle(table: Raw, index: Raw) -> Raw {
        // SAFETY: as above.
        unsafe { _mm_shuffle_epi8(table, index) }
    }

    #[inline(always)]
    pub fn top(v: Raw) -> u8 {
        // SAFETY: as above.
        unsafe { (_mm_extract_epi16::<7>(v) >> 8) as u8 }
    }

    #[inline(always)]
    pub fn relabel(v: Raw, positions: &[u8; 16], values: &[u8; 16]) -> u64 {
        // SAFETY: as above; both tables are 16 bytes.
        unsafe {
            let pos = _mm_loadu_si128(positions.as_ptr() as *const __m128i);
            let val = _mm_loadu_si128(values.as_ptr() as *const __m128i);
            pack(_mm_shuffle_epi8(val, _mm_shuffle_epi8(v, pos)))
        }
    }
}

#[cfg(not(all(target_arch = "x86_64", target_feature = "ssse3")))]
mod imp {
    pub type Raw = [u8; 16];

    #[inline(always)]
    pub fn unpack(word: u64) -> Raw {
        core::array::from_fn(|i| ((word >> (4 * i)) & 15) as u8)
    }

    #[inline(always)]
    pub fn pack(v: Raw) -> u64 {
        v.iter().enumerate().fold(0, |w, (i, &b)| w | (b as u64) << (4 * i))
    }

    #[inline(always)]
    pub fn shuffle(table: Raw, index: Raw) -> Raw {
        core::array::from_fn(|i| table[index[i] as usize])
    }

    #[inline(always)]
    pub fn top(v: Raw) -> u8 {
        v[15]
    }

    #[inline(always)]
    pub fn relabel(v: Raw, positions: &[u8; 16], values: &[u8; 16]) -> u64 {
        pack(core::array::from_fn(|i| values[v[positions[i] as usize] as usize]))
    }
}
