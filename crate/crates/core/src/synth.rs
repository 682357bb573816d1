// SPDX-License-Identifier: Apache-2.0

//! Optimal synthesis by table lookup and meet-in-the-middle search.
//!
//! A function whose class is stored in the table is rebuilt gate by gate from
//! the witnesses. Otherwise, for `i = 1, 2, ..., m` we try every function `g`
//! of size `i` until `h = f then g` has size exactly `k`; then `f` is `h`
//! followed by `g⁻¹`, with `k + i` gates, and no smaller `i` worked, so that
//! count is optimal. Functions needing more than `L = k + m` gates are
//! reported as exceeding `L`.

use std::thread;

use thiserror::Error;

use crate::canonical::{canonical_of, canonical_rep, canonical_word, class_members, WALK_SIGMAS};
use crate::circuit::Circuit;
use crate::lanes::Lanes;
use crate::perm::{compose, Perm};
use crate::store::{CanonicalTable, GateSide};

/// How the lists of all functions of size `1..=m` are held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExpandMode {
    /// Every function stored explicitly.
    Materialized,
    /// Only representatives stored; class members generated while scanning.
    #[default]
    OnTheFly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    /// Largest size stored in the table.
    pub k: u8,
    /// Largest size scanned in the second phase.
    pub m: u8,
    pub expand_mode: ExpandMode,
}

impl SearchConfig {
    /// `m` defaults to `min(k, 6)`.
    pub fn new(k: u8) -> SearchConfig {
        SearchConfig { k, m: k.min(6), expand_mode: ExpandMode::default() }
    }

    pub fn with_m(self, m: u8) -> SearchConfig {
        SearchConfig { m, ..self }
    }

    pub fn with_expand_mode(self, expand_mode: ExpandMode) -> SearchConfig {
        SearchConfig { expand_mode, ..self }
    }

    /// Largest size the search can certify.
    pub fn l(&self) -> u8 {
        self.k + self.m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("size is greater than L = {l}")]
    SizeExceedsL { l: u8 },
    #[error("scan depth m = {m} is larger than k = {k}")]
    ScanTooDeep { m: u8, k: u8 },
    #[error("configuration expects k = {expected} but the table holds k = {found}")]
    TableMismatch { expected: u8, found: u8 },
}

/// Result of [`Synthesizer::size_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Size {
    Exact(u8),
    /// Larger than `L`.
    Exceeds,
}

impl Size {
    pub fn exact(self) -> Option<u8> {
        match self {
            Size::Exact(s) => Some(s),
            Size::Exceeds => None,
        }
    }
}

/// A decomposition found by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub size: u8,
    /// Number of second-phase candidates tried; 0 when the table held `f`.
    pub probes: u64,
    /// `g` of the hit; `f` is `f then g` followed by `g⁻¹`.
    pub tail: Option<Perm>,
}

struct OnTheFlyLevel {
    reps: Vec<Perm>,
    /// representative and its inverse, unpacked
    lanes: Vec<[Lanes; 2]>,
    /// bit `24 s + j`: relabeling `j` of side `s` is a member not seen earlier
    /// for this representative
    masks: Vec<u64>,
}

enum ScanLevel {
    Materialized(Vec<Perm>),
    OnTheFly(OnTheFlyLevel),
}

const ALL_MEMBERS: u64 = (1 << 48) - 1;

/// The functions of each size `1..=m`, in scan order: representatives in
/// level order, and for each the distinct members among its relabelings,
/// then the relabelings of its inverse, each in walk order.
pub struct ScanLists {
    levels: Vec<ScanLevel>,
}

fn member_mask(rep: Perm) -> u64 {
    let members = class_members(rep);
    if members.iter().filter(|&&g| g == rep).count() == 1 {
        // trivial stabilizer, so all 48 are distinct
        return ALL_MEMBERS;
    }
    let mut mask = 0u64;
    for (i, g) in members.iter().enumerate() {
        if !members[..i].contains(g) {
            mask |= 1 << i;
        }
    }
    mask
}

impl ScanLists {
    pub fn from_table(table: &CanonicalTable, m: u8, mode: ExpandMode) -> Result<ScanLists, SynthError> {
        if m > table.k() {
            return Err(SynthError::ScanTooDeep { m, k: table.k() });
        }
        let levels = (1..=m as usize)
            .map(|i| {
                let reps = table.level(i).to_vec();
                let masks: Vec<u64> = reps.iter().map(|&r| member_mask(r)).collect();
                match mode {
                    ExpandMode::OnTheFly => {
                        let lanes = reps
                            .iter()
                            .map(|&r| [Lanes::from_perm(r), Lanes::from_perm(r.inverse())])
                            .collect();
                        ScanLevel::OnTheFly(OnTheFlyLevel { reps, lanes, masks })
                    }
                    ExpandMode::Materialized => {
                        let mut all = Vec::new();
                        for (&r, &mask) in reps.iter().zip(&masks) {
                            let members = class_members(r);
                            all.extend((0..48).filter(|b| mask & (1 << b) != 0).map(|b| members[b]));
                        }
                        ScanLevel::Materialized(all)
                    }
                }
            })
            .collect();
        Ok(ScanLists { levels })
    }

    pub fn m(&self) -> u8 {
        self.levels.len() as u8
    }

    /// Number of functions of size `i`.
    pub fn len(&self, i: usize) -> usize {
        match &self.levels[i - 1] {
            ScanLevel::Materialized(all) => all.len(),
            ScanLevel::OnTheFly(l) => l.masks.iter().map(|m| m.count_ones() as usize).sum(),
        }
    }

    /// The functions of size `i` in scan order.
    pub fn iter(&self, i: usize) -> Box<dyn Iterator<Item = Perm> + '_> {
        match &self.levels[i - 1] {
            ScanLevel::Materialized(all) => Box::new(all.iter().copied()),
            ScanLevel::OnTheFly(l) => Box::new(l.reps.iter().zip(&l.masks).flat_map(|(&r, &mask)| {
                let members = class_members(r);
                (0..48).filter(move |b| mask & (1 << b) != 0).map(move |b| members[b])
            })),
        }
    }
}

/// `f` relabeled by the inverse of each walk relabeling, and the inverses of
/// those, unpacked.
struct Relabeled {
    plain: [Lanes; 24],
    inv: [Lanes; 24],
}

impl Relabeled {
    fn new(f: Perm) -> Relabeled {
        let plain = WALK_SIGMAS.map(|s| Lanes::from_perm(f.conjugate(s.inverse())));
        let inv = WALK_SIGMAS.map(|s| Lanes::from_perm(f.inverse().conjugate(s.inverse())));
        Relabeled { plain, inv }
    }
}

/// Table plus scan lists; answers synthesis queries.
pub struct Synthesizer<'t> {
    table: &'t CanonicalTable,
    cfg: SearchConfig,
    scan: ScanLists,
}

impl<'t> Synthesizer<'t> {
    pub fn new(table: &'t CanonicalTable, cfg: SearchConfig) -> Result<Synthesizer<'t>, SynthError> {
        if table.k() != cfg.k {
            return Err(SynthError::TableMismatch { expected: cfg.k, found: table.k() });
        }
        let scan = ScanLists::from_table(table, cfg.m, cfg.expand_mode)?;
        Ok(Synthesizer { table, cfg, scan })
    }

    pub fn config(&self) -> SearchConfig {
        self.cfg
    }

    pub fn table(&self) -> &'t CanonicalTable {
        self.table
    }

    pub fn scan_lists(&self) -> &ScanLists {
        &self.scan
    }

    /// A minimal circuit for `f`.
    pub fn synthesize(&self, f: Perm) -> Result<Circuit, SynthError> {
        let found = self.search(f)?;
        Ok(match found.tail {
            None => self.from_table(f).expect("first phase hit"),
            Some(g) => {
                let mut c = self.from_table(compose(f, g)).expect("hit is stored");
                c.extend(&self.from_table(g).expect("scanned functions are stored").reversed());
                c
            }
        })
    }

    /// Size of `f` without building a circuit.
    pub fn size_of(&self, f: Perm) -> Size {
        match self.search(f) {
            Ok(found) => Size::Exact(found.size),
            Err(_) => Size::Exceeds,
        }
    }

    /// [`Synthesizer::size_of`] over many inputs, split across `threads` workers.
    pub fn size_of_many(&self, fs: &[Perm], threads: usize) -> Vec<Size> {
        let threads = threads.max(1);
        if threads == 1 || fs.len() < 2 {
            return fs.iter().map(|&f| self.size_of(f)).collect();
        }
        let chunk = fs.len().div_ceil(threads);
        thread::scope(|s| {
            let handles: Vec<_> = fs
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(|&f| self.size_of(f)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    }

    /// Runs both phases and reports where the answer came from.
    pub fn search(&self, f: Perm) -> Result<Found, SynthError> {
        if let Some(size) = self.table.size_of_rep(canonical_word(f)) {
            return Ok(Found { size, probes: 0, tail: None });
        }
        let k = self.cfg.k;
        let rel = Relabeled::new(f);
        let mut probes = 0u64;
        for (i, level) in self.scan.levels.iter().enumerate() {
            let hit = match level {
                ScanLevel::OnTheFly(l) => self.scan_on_the_fly(&rel, l, &mut probes),
                ScanLevel::Materialized(all) => self.scan_materialized(f, all, &mut probes),
            };
            if let Some(g) = hit {
                return Ok(Found { size: k + i as u8 + 1, probes, tail: Some(g) });
            }
        }
        Err(SynthError::SizeExceedsL { l: self.cfg.l() })
    }

    #[inline(always)]
    fn is_hit(&self, home: usize, word: Perm) -> bool {
        self.table.size_from(home, word) == Some(self.cfg.k)
    }

    fn scan_on_the_fly(&self, rel: &Relabeled, level: &OnTheFlyLevel, probes: &mut u64) -> Option<Perm> {
        let mut words = [Perm::IDENTITY; 48];
        let mut homes = [0usize; 48];
        let mut bits = [0u8; 48];
        for (r, (&[gl, gil], &mask)) in level.lanes.iter().zip(&level.masks).enumerate() {
            // member (s, j) is side s of the representative relabeled by
            // sigma_j; then f then member has the class of
            // (f relabeled by sigma_j⁻¹) then side s
            let mut n = 0;
            let mut rest = mask;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let j = b % 24;
                let (x, xi) = if b < 24 { (gl, gil) } else { (gil, gl) };
                let w = canonical_of(rel.plain[j].then(x), xi.then(rel.inv[j]));
                homes[n] = self.table.prefetch(w);
                words[n] = w;
                bits[n] = b as u8;
                n += 1;
            }
            for t in 0..n {
                if self.is_hit(homes[t], words[t]) {
                    *probes += t as u64 + 1;
                    let b = bits[t] as usize;
                    let rep = level.reps[r];
                    let side = if b < 24 { rep } else { rep.inverse() };
                    return Some(side.conjugate(WALK_SIGMAS[b % 24]));
                }
            }
            *probes += n as u64;
        }
        None
    }

    fn scan_materialized(&self, f: Perm, all: &[Perm], probes: &mut u64) -> Option<Perm> {
        let fl = Lanes::from_perm(f);
        let fil = Lanes::from_perm(f.inverse());
        let mut words = [Perm::IDENTITY; 32];
        let mut homes = [0usize; 32];
        for chunk in all.chunks(32) {
            for (t, &g) in chunk.iter().enumerate() {
                let (gl, gil) = (Lanes::from_perm(g), Lanes::from_perm(g.inverse()));
                words[t] = canonical_of(fl.then(gl), gil.then(fil));
                homes[t] = self.table.prefetch(words[t]);
            }
            for (t, &g) in chunk.iter().enumerate() {
                if self.is_hit(homes[t], words[t]) {
                    *probes += t as u64 + 1;
                    return Some(g);
                }
            }
            *probes += chunk.len() as u64;
        }
        None
    }

    /// Rebuilds a minimal circuit for a function whose class is stored.
    pub fn from_table(&self, f: Perm) -> Option<Circuit> {
        circuit_from_table(self.table, f)
    }
}

/// Peels witness gates until the identity is reached.
///
/// With `f` equal to the representative relabeled by `sigma` (possibly after
/// inverting), the stored gate relabeled by `sigma` is a first or last gate of
/// `f`: which end follows from the stored side, swapped when inverted.
pub fn circuit_from_table(table: &CanonicalTable, f: Perm) -> Option<Circuit> {
    let mut front = Vec::new();
    let mut back = Vec::new();
    let mut cur = f;
    loop {
        let (rep, w) = canonical_rep(cur);
        let entry = table.lookup(rep)?;
        let Some((gate, side)) = entry.witness else { break };
        let gate = gate.conjugate(w.sigma);
        let last = (side == GateSide::Last) != w.inverted;
        if last {
            cur = compose(cur, gate.to_perm());
            back.push(gate);
        } else {
            cur = compose(gate.to_perm(), cur);
            front.push(gate);
        }
    }
    front.extend(back.into_iter().rev());
    Some(Circuit::from_gates(front))
}
