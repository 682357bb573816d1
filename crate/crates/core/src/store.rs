// SPDX-License-Identifier: Apache-2.0

//! The table of canonical representatives and its file format.
//!
//! Keys live in one open-addressed array probed linearly from
//! `hash64(word) & (capacity - 1)`; an all-ones word marks an empty slot (it
//! is not a permutation). A parallel array holds each entry's gate byte and
//! size. The per-size lists `levels[i]` hold the representatives of size `i`.
//!
//! # File format
//!
//! All integers are little-endian.
//!
//! | bytes | content |
//! |---|---|
//! | 4 | magic `ORC1` |
//! | 1 | number of bits, always 4 |
//! | 1 | `k`, the largest stored size |
//! | 1 | gate set id ([`GateSet::NCT4_ID`]) |
//! | 8 × (k+1) | number of representatives of each size |
//! | 9 per entry | per size, ascending by word: the word, then the gate byte |
//! | 8 | CRC-64/XZ of every preceding byte |
//!
//! The gate byte is [`Gate::to_byte`] with bit 6 set when the gate is the
//! first one of the circuit rather than the last. The identity has no gate and
//! stores `0x80`.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crc::{Crc, CRC_64_XZ};
use thiserror::Error;

use crate::gate::{Gate, GateSet};
use crate::perm::{hash64, Perm};

const EMPTY: u64 = u64::MAX;
const FIRST_FLAG: u8 = 0x40;
const NO_GATE: u8 = 0x80;
const MAGIC: &[u8; 4] = b"ORC1";
const CHECKSUM: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

/// Default fraction of slots a table is sized to fill.
pub const DEFAULT_LOAD_TARGET: f64 = 0.6;
/// Default load above which inserts are refused.
pub const DEFAULT_MAX_LOAD: f64 = 0.9;

/// Which end of a minimal circuit for the representative the witness gate is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSide {
    First,
    Last,
}

/// One stored representative.
///
/// Removing `witness` from the given side of a minimal circuit for `rep`
/// leaves a function of size `size - 1`. Only the identity has no witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalEntry {
    pub rep: Perm,
    pub witness: Option<(Gate, GateSide)>,
    pub size: u8,
}

impl CanonicalEntry {
    pub fn identity() -> CanonicalEntry {
        CanonicalEntry { rep: Perm::IDENTITY, witness: None, size: 0 }
    }

    pub fn gate_byte(&self) -> u8 {
        match self.witness {
            None => NO_GATE,
            Some((g, GateSide::Last)) => g.to_byte(),
            Some((g, GateSide::First)) => g.to_byte() | FIRST_FLAG,
        }
    }

    fn from_parts(rep: Perm, byte: u8, size: u8) -> Option<CanonicalEntry> {
        let witness = match byte {
            NO_GATE => None,
            b => {
                let side = if b & FIRST_FLAG != 0 { GateSide::First } else { GateSide::Last };
                Some((Gate::from_byte(b & !FIRST_FLAG)?, side))
            }
        };
        Some(CanonicalEntry { rep, witness, size })
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{0} is already in the table")]
    Duplicate(Perm),
    #[error("table of {capacity} slots cannot take entry {len} without exceeding load {max_load}")]
    CapacityExceeded { capacity: usize, len: usize, max_load: f64 },
    #[error("size {size} is larger than the table's k = {k}")]
    SizeOutOfRange { size: u8, k: u8 },
    #[error("the identity is stored without a gate and nothing else is")]
    WitnessMismatch,
    #[error("not a table file (bad magic)")]
    BadMagic,
    #[error("unsupported table: {bits} bits, gate set {gate_set}")]
    UnsupportedFormat { bits: u8, gate_set: u8 },
    #[error("table file truncated")]
    Truncated,
    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    ChecksumMismatch { stored: u64, computed: u64 },
    #[error("corrupt table file: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Probe statistics of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableStats {
    pub k: u8,
    pub level_counts: Vec<u64>,
    pub capacity: usize,
    pub len: usize,
    pub load_factor: f64,
    /// Mean number of slots inspected by a successful lookup.
    pub mean_chain: f64,
    /// Longest successful lookup, in slots.
    pub max_chain: usize,
}

impl fmt::Display for TableStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k\t{}", self.k)?;
        for (i, c) in self.level_counts.iter().enumerate() {
            writeln!(f, "level {i}\t{c}")?;
        }
        writeln!(f, "entries\t{}", self.len)?;
        writeln!(f, "capacity\t{}", self.capacity)?;
        writeln!(f, "load factor\t{:.4}", self.load_factor)?;
        writeln!(f, "mean chain\t{:.3}", self.mean_chain)?;
        write!(f, "max chain\t{}", self.max_chain)
    }
}

/// Canonical representatives of size `0..=k` with their witness gates.
///
/// Once built the table is only read, and any number of threads may share it.
#[derive(Clone)]
pub struct CanonicalTable {
    keys: Vec<u64>,
    /// gate byte, then size in the high byte
    vals: Vec<u16>,
    mask: usize,
    len: usize,
    max_load: f64,
    levels: Vec<Vec<Perm>>,
}

/// Smallest power of two `c` with `entries / c <= load_target`.
pub fn capacity_for(entries: usize, load_target: f64) -> usize {
    let mut cap = 1usize;
    while (entries as f64) > load_target * cap as f64 {
        cap *= 2;
    }
    cap
}

impl CanonicalTable {
    /// An empty table for sizes `0..=k` with `capacity` slots (rounded up to a
    /// power of two).
    pub fn new(k: u8, capacity: usize, max_load: f64) -> CanonicalTable {
        let cap = capacity.max(1).next_power_of_two();
        CanonicalTable {
            keys: vec![EMPTY; cap],
            vals: vec![0; cap],
            mask: cap - 1,
            len: 0,
            max_load,
            levels: vec![Vec::new(); k as usize + 1],
        }
    }

    pub fn k(&self) -> u8 {
        (self.levels.len() - 1) as u8
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.keys.len()
    }

    pub fn load_factor(&self) -> f64 {
        self.len as f64 / self.capacity() as f64
    }

    /// Representatives of size `i`, in insertion order until
    /// [`CanonicalTable::seal`] sorts them.
    pub fn level(&self, i: usize) -> &[Perm] {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Vec<Perm>] {
        &self.levels
    }

    pub fn level_counts(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.len() as u64).collect()
    }

    #[inline(always)]
    fn home(&self, word: u64) -> usize {
        hash64(word) as usize & self.mask
    }

    pub fn insert(&mut self, e: CanonicalEntry) -> Result<(), StoreError> {
        if e.size > self.k() {
            return Err(StoreError::SizeOutOfRange { size: e.size, k: self.k() });
        }
        if (e.size == 0) != e.witness.is_none() {
            return Err(StoreError::WitnessMismatch);
        }
        if (self.len + 1) as f64 > self.max_load * self.capacity() as f64 {
            return Err(StoreError::CapacityExceeded {
                capacity: self.capacity(),
                len: self.len + 1,
                max_load: self.max_load,
            });
        }
        let word = e.rep.word();
        let mut slot = self.home(word);
        loop {
            match self.keys[slot] {
                EMPTY => break,
                w if w == word => return Err(StoreError::Duplicate(e.rep)),
                _ => slot = (slot + 1) & self.mask,
            }
        }
        self.keys[slot] = word;
        self.vals[slot] = e.gate_byte() as u16 | (e.size as u16) << 8;
        self.len += 1;
        self.levels[e.size as usize].push(e.rep);
        Ok(())
    }

    #[inline(always)]
    fn find(&self, word: u64) -> Option<usize> {
        let mut slot = self.home(word);
        loop {
            match self.keys[slot] {
                w if w == word => return Some(slot),
                EMPTY => return None,
                _ => slot = (slot + 1) & self.mask,
            }
        }
    }

    pub fn contains(&self, rep: Perm) -> bool {
        self.find(rep.word()).is_some()
    }

    pub fn lookup(&self, rep: Perm) -> Option<CanonicalEntry> {
        let v = self.vals[self.find(rep.word())?];
        CanonicalEntry::from_parts(rep, v as u8, (v >> 8) as u8)
    }

    /// Stored size of `rep`, if present.
    #[inline(always)]
    pub fn size_of_rep(&self, rep: Perm) -> Option<u8> {
        self.find(rep.word()).map(|s| (self.vals[s] >> 8) as u8)
    }

    /// Home slot of `rep`, with a hint to the CPU to start fetching it. Pass
    /// the result to [`CanonicalTable::size_from`] once the fetch has had time.
    #[inline(always)]
    pub fn prefetch(&self, rep: Perm) -> usize {
        let slot = self.home(rep.word());
        #[cfg(target_arch = "x86_64")]
        // SAFETY: prefetching never faults and the pointer is in bounds.
        unsafe {
            use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
            _mm_prefetch::<_MM_HINT_T0>(self.keys.as_ptr().add(slot) as *const i8);
        }
        slot
    }

    /// [`CanonicalTable::size_of_rep`] given the home slot from
    /// [`CanonicalTable::prefetch`].
    #[inline(always)]
    pub fn size_from(&self, home: usize, rep: Perm) -> Option<u8> {
        let word = rep.word();
        let mut slot = home;
        loop {
            match self.keys[slot] {
                w if w == word => return Some((self.vals[slot] >> 8) as u8),
                EMPTY => return None,
                _ => slot = (slot + 1) & self.mask,
            }
        }
    }

    /// All entries, by size and then in level order.
    pub fn entries(&self) -> impl Iterator<Item = CanonicalEntry> + '_ {
        self.levels
            .iter()
            .flatten()
            .map(|&rep| self.lookup(rep).expect("level lists only hold stored keys"))
    }

    /// Sorts level `i` by word.
    pub fn sort_level(&mut self, i: usize) {
        self.levels[i].sort_unstable();
    }

    /// Sorts every level by word and rebuilds the slot array in that order, so
    /// the layout depends only on the set of entries.
    pub fn seal(&mut self) {
        for level in &mut self.levels {
            level.sort_unstable();
        }
        let mut keys = vec![EMPTY; self.capacity()];
        let mut vals = vec![0u16; self.capacity()];
        for rep in self.levels.iter().flatten() {
            let old = self.find(rep.word()).expect("level lists only hold stored keys");
            let mut slot = self.home(rep.word());
            while keys[slot] != EMPTY {
                slot = (slot + 1) & self.mask;
            }
            keys[slot] = rep.word();
            vals[slot] = self.vals[old];
        }
        self.keys = keys;
        self.vals = vals;
    }

    pub fn stats(&self) -> TableStats {
        let mut total = 0usize;
        let mut max_chain = 0usize;
        for (slot, &w) in self.keys.iter().enumerate() {
            if w != EMPTY {
                let chain = (slot.wrapping_sub(self.home(w)) & self.mask) + 1;
                total += chain;
                max_chain = max_chain.max(chain);
            }
        }
        TableStats {
            k: self.k(),
            level_counts: self.level_counts(),
            capacity: self.capacity(),
            len: self.len,
            load_factor: self.load_factor(),
            mean_chain: if self.len == 0 { 0.0 } else { total as f64 / self.len as f64 },
            max_chain,
        }
    }

    /// The file image described in the module docs. Levels are written in
    /// ascending word order whether or not the table is sealed.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(7 + 8 * self.levels.len() + 9 * self.len + 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&[4, self.k(), GateSet::NCT4_ID]);
        for level in &self.levels {
            out.extend_from_slice(&(level.len() as u64).to_le_bytes());
        }
        for level in &self.levels {
            let mut sorted = level.clone();
            sorted.sort_unstable();
            for rep in sorted {
                let v = self.vals[self.find(rep.word()).expect("stored")];
                out.extend_from_slice(&rep.word().to_le_bytes());
                out.push(v as u8);
            }
        }
        let sum = CHECKSUM.checksum(&out);
        out.extend_from_slice(&sum.to_le_bytes());
        out
    }

    /// Parses a file image into a sealed table with [`DEFAULT_LOAD_TARGET`]
    /// sizing.
    pub fn from_bytes(bytes: &[u8]) -> Result<CanonicalTable, StoreError> {
        CanonicalTable::from_bytes_with_load(bytes, DEFAULT_LOAD_TARGET)
    }

    pub fn from_bytes_with_load(bytes: &[u8], load_target: f64) -> Result<CanonicalTable, StoreError> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(StoreError::BadMagic);
        }
        if bytes.len() < 4 + 8 {
            return Err(StoreError::Truncated);
        }
        let (body, tail) = bytes.split_at(bytes.len() - 8);
        let stored = u64::from_le_bytes(tail.try_into().expect("8 bytes"));
        let computed = CHECKSUM.checksum(body);
        if stored != computed {
            return Err(StoreError::ChecksumMismatch { stored, computed });
        }
        if body.len() < 7 {
            return Err(StoreError::Truncated);
        }
        let (bits, k, gate_set) = (body[4], body[5], body[6]);
        if bits != 4 || gate_set != GateSet::NCT4_ID {
            return Err(StoreError::UnsupportedFormat { bits, gate_set });
        }
        let header = 7 + 8 * (k as usize + 1);
        let counts: Vec<usize> = body
            .get(7..header)
            .ok_or(StoreError::Truncated)?
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")) as usize)
            .collect();
        let total: usize = counts.iter().sum();
        if body.len() != header + 9 * total {
            return Err(StoreError::Corrupt(format!(
                "{} record bytes for {total} entries",
                body.len() - header
            )));
        }
        let mut table = CanonicalTable::new(k, capacity_for(total, load_target), DEFAULT_MAX_LOAD);
        let mut records = body[header..].chunks_exact(9);
        for (size, &count) in counts.iter().enumerate() {
            let mut prev: Option<u64> = None;
            for rec in records.by_ref().take(count) {
                let word = u64::from_le_bytes(rec[..8].try_into().expect("8 bytes"));
                let rep = Perm::from_word(word)
                    .map_err(|e| StoreError::Corrupt(format!("record {word:#018x}: {e}")))?;
                if prev.is_some_and(|p| p >= word) {
                    return Err(StoreError::Corrupt(format!("level {size} is not sorted")));
                }
                prev = Some(word);
                let entry = CanonicalEntry::from_parts(rep, rec[8], size as u8)
                    .ok_or_else(|| StoreError::Corrupt(format!("bad gate byte {:#04x}", rec[8])))?;
                table.insert(entry)?;
            }
        }
        Ok(table)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        let mut file = io::BufWriter::new(fs::File::create(path)?);
        file.write_all(&self.to_bytes())?;
        file.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<CanonicalTable, StoreError> {
        CanonicalTable::from_bytes(&fs::read(path)?)
    }
}

impl fmt::Debug for CanonicalTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CanonicalTable")
            .field("k", &self.k())
            .field("levels", &self.level_counts())
            .field("capacity", &self.capacity())
            .finish()
    }
}
