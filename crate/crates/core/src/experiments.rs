// SPDX-License-Identifier: Apache-2.0

//! Drivers for the counting and benchmark experiments.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canonical::{canonical_word, class_size};
use crate::circuit::Circuit;
use crate::gate::{enumerate_gates, Gate};
use crate::perm::{compose, Perm};
use crate::synth::{Size, SynthError, Synthesizer};

/// Name of the generator behind [`random_perms`].
pub const PRNG_NAME: &str = "ChaCha8";

/// Default seed of the random-sample experiment.
pub const DEFAULT_SEED: u64 = 20_100_913;

/// Number of functions of each size, plus those larger than `L`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SizeHistogram {
    pub counts: BTreeMap<u8, u64>,
    pub exceeded: u64,
}

impl SizeHistogram {
    pub fn new() -> SizeHistogram {
        SizeHistogram::default()
    }

    pub fn add(&mut self, s: Size) {
        self.add_many(s, 1);
    }

    pub fn add_many(&mut self, s: Size, n: u64) {
        match s {
            Size::Exact(s) => *self.counts.entry(s).or_default() += n,
            Size::Exceeds => self.exceeded += n,
        }
    }

    pub fn merge(&mut self, other: &SizeHistogram) {
        for (&s, &n) in &other.counts {
            *self.counts.entry(s).or_default() += n;
        }
        self.exceeded += other.exceeded;
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum::<u64>() + self.exceeded
    }

    pub fn count(&self, size: u8) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    pub fn fraction(&self, size: u8) -> f64 {
        self.count(size) as f64 / self.total().max(1) as f64
    }

    pub fn exceeded_fraction(&self) -> f64 {
        self.exceeded as f64 / self.total().max(1) as f64
    }

    /// Mean over the functions whose size is known.
    pub fn mean_size(&self) -> f64 {
        let n: u64 = self.counts.values().sum();
        let sum: u64 = self.counts.iter().map(|(&s, &c)| s as u64 * c).sum();
        sum as f64 / n.max(1) as f64
    }

    /// `size<TAB>count` lines; the exceeded count is labeled `>L`.
    pub fn to_tsv(&self, l: u8) -> String {
        let mut out = String::new();
        for (s, c) in &self.counts {
            out.push_str(&format!("{s}\t{c}\n"));
        }
        if self.exceeded > 0 {
            out.push_str(&format!(">{l}\t{}\n", self.exceeded));
        }
        out
    }
}

impl fmt::Display for SizeHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.total().max(1) as f64;
        writeln!(f, "{:>6}  {:>12}  {:>9}", "size", "count", "fraction")?;
        for (s, c) in &self.counts {
            writeln!(f, "{s:>6}  {c:>12}  {:>9.6}", *c as f64 / total)?;
        }
        if self.exceeded > 0 {
            writeln!(f, "{:>6}  {:>12}  {:>9.6}", "> L", self.exceeded, self.exceeded as f64 / total)?;
        }
        write!(f, "{:>6}  {:>12}", "total", self.total())
    }
}

/// `n` uniform random permutations, each a Fisher–Yates shuffle driven by a
/// ChaCha8 generator seeded with `seed`.
pub fn random_perms(n: usize, seed: u64) -> Vec<Perm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images: [u8; 16] = core::array::from_fn(|i| i as u8);
    (0..n)
        .map(|_| {
            images.shuffle(&mut rng);
            Perm::from_images(&images).expect("a shuffle is a permutation")
        })
        .collect()
}

/// Size histogram of `n` random permutations. The samples depend only on
/// `seed`, so any number of threads gives the same result.
pub fn random_distribution(n: usize, seed: u64, synth: &Synthesizer, threads: usize) -> SizeHistogram {
    let mut h = SizeHistogram::new();
    for s in synth.size_of_many(&random_perms(n, seed), threads) {
        h.add(s);
    }
    h
}

/// The NOT and CNOT gates.
pub fn linear_gates() -> Vec<Gate> {
    enumerate_gates().into_iter().filter(|g| g.num_controls() <= 1).collect()
}

/// Every function built from NOT and CNOT gates, sorted: the closure of the
/// identity under appending those gates.
pub fn enumerate_linear() -> Vec<Perm> {
    let gates: Vec<Perm> = linear_gates().iter().map(|g| g.to_perm()).collect();
    let mut seen = HashSet::from([Perm::IDENTITY]);
    let mut queue = VecDeque::from([Perm::IDENTITY]);
    while let Some(f) = queue.pop_front() {
        for &g in &gates {
            let h = compose(f, g);
            if seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// The affine functions `x -> Mx xor c` for every invertible 4×4 matrix `M`
/// over GF(2) and every mask `c`, sorted.
pub fn enumerate_affine() -> Vec<Perm> {
    let mut out = Vec::with_capacity(322_560);
    // columns[i] is the image of the unit vector for wire i
    for cols in 0u16..=0xFFFF {
        let columns: [u8; 4] = core::array::from_fn(|i| ((cols >> (4 * i)) & 15) as u8);
        let apply = |x: u8| (0..4).filter(|i| x & (1 << i) != 0).fold(0, |acc, i| acc ^ columns[i]);
        let images: Vec<u8> = (0..16).map(apply).collect();
        let Ok(linear) = Perm::from_images(&images) else { continue };
        for c in 0..16u8 {
            out.push(Perm::from_fn(|x| linear.image(x) ^ c).expect("xor by a constant is a bijection"));
        }
    }
    out.sort_unstable();
    out
}

/// Size histogram over all linear functions.
pub fn linear_distribution(synth: &Synthesizer, threads: usize) -> SizeHistogram {
    let mut h = SizeHistogram::new();
    for s in synth.size_of_many(&enumerate_linear(), threads) {
        h.add(s);
    }
    h
}

/// A published benchmark function with its best known and optimal sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkCase {
    pub name: &'static str,
    pub spec: [u8; 16],
    /// Size of the best circuit known before exhaustive search, if any.
    pub known_best: Option<u8>,
    /// Whether that circuit had been proved optimal.
    pub proved_optimal: bool,
    pub expected_soc: u8,
    /// The known circuit also needed SWAP gates to order its outputs.
    pub known_needs_swaps: bool,
    /// A published optimal circuit, where the printed one evaluates to `spec`.
    pub published_circuit: Option<&'static str>,
}

impl BenchmarkCase {
    pub fn perm(&self) -> Perm {
        Perm::from_images(&self.spec).expect("fixture is a permutation")
    }
}

macro_rules! case {
    ($name:expr, $spec:expr, $known:expr, $po:expr, $soc:expr, $swaps:expr, $circ:expr) => {
        BenchmarkCase {
            name: $name,
            spec: $spec,
            known_best: $known,
            proved_optimal: $po,
            expected_soc: $soc,
            known_needs_swaps: $swaps,
            published_circuit: $circ,
        }
    };
}

pub const BENCHMARKS: [BenchmarkCase; 13] = [
    case!("4_49", [15, 1, 12, 3, 5, 6, 8, 7, 0, 10, 13, 9, 2, 4, 14, 11], Some(12), false, 12, false,
        Some("NOT(a) CNOT(c,a) CNOT(a,d) TOF(a,b,d) CNOT(d,a) TOF(c,d,b) TOF(a,d,c) TOF(b,c,a) TOF(a,b,d) NOT(a) CNOT(d,b) CNOT(d,c)")),
    case!("4bit-7-8", [0, 1, 2, 3, 4, 5, 6, 8, 7, 9, 10, 11, 12, 13, 14, 15], Some(7), false, 7, false,
        Some("CNOT(d,b) CNOT(d,a) CNOT(c,d) TOF4(a,b,d,c) CNOT(c,d) CNOT(d,b) CNOT(d,a)")),
    case!("decode42", [1, 2, 4, 8, 0, 3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15], Some(11), false, 10, false,
        Some("CNOT(c,b) CNOT(d,a) CNOT(c,a) TOF(a,d,b) CNOT(b,c) TOF4(a,b,c,d) TOF(b,d,c) CNOT(c,a) CNOT(a,b) NOT(a)")),
    case!("hwb4", [0, 2, 4, 12, 8, 5, 9, 11, 1, 6, 10, 13, 3, 14, 7, 15], Some(11), true, 11, false,
        Some("CNOT(b,d) CNOT(d,a) CNOT(a,c) TOF4(b,c,d,a) CNOT(d,b) CNOT(c,d) TOF(a,c,b) TOF4(b,c,d,a) CNOT(d,c) CNOT(a,c) CNOT(b,d)")),
    case!("imark", [4, 5, 2, 14, 0, 3, 6, 10, 11, 8, 15, 1, 12, 13, 7, 9], Some(7), false, 7, false,
        Some("TOF(c,d,a) TOF(a,b,d) CNOT(d,c) CNOT(b,c) CNOT(d,a) TOF(a,c,b) NOT(c)")),
    case!("mperk", [3, 11, 2, 10, 0, 7, 1, 6, 15, 8, 14, 9, 13, 5, 12, 4], Some(9), false, 9, true,
        Some("NOT(c) CNOT(d,c) TOF(c,d,b) TOF(a,c,d) CNOT(b,a) CNOT(d,a) CNOT(c,a) CNOT(a,b) CNOT(b,c)")),
    case!("oc5", [6, 0, 12, 15, 7, 1, 5, 2, 4, 10, 13, 3, 11, 8, 14, 9], Some(15), false, 11, false,
        Some("TOF(b,d,c) TOF(c,d,b) TOF(a,b,c) NOT(a) CNOT(d,b) CNOT(a,c) TOF(b,c,d) CNOT(a,b) CNOT(c,a) CNOT(a,c) TOF4(a,b,d,c)")),
    case!("oc6", [9, 0, 2, 15, 11, 6, 7, 8, 14, 3, 4, 13, 5, 1, 12, 10], Some(14), false, 12, false,
        Some("TOF4(b,c,d,a) TOF4(a,c,d,b) CNOT(d,c) TOF(b,c,d) TOF(c,d,a) TOF4(a,b,d,c) CNOT(b,a) NOT(a) CNOT(c,b) CNOT(d,c) CNOT(a,d) TOF(b,d,c)")),
    case!("oc7", [6, 15, 9, 5, 13, 12, 3, 7, 2, 10, 1, 11, 0, 14, 4, 8], Some(17), false, 13, false,
        Some("TOF(b,d,c) TOF(a,b,d) CNOT(b,a) TOF4(a,c,d,b) CNOT(c,b) CNOT(d,c) TOF(a,c,d) NOT(b) NOT(d) CNOT(b,c) TOF(b,d,a) TOF(a,c,d) CNOT(c,a)")),
    // the published 11-gate circuit does not compute this function
    case!("oc8", [11, 3, 9, 2, 7, 13, 15, 14, 8, 1, 4, 10, 0, 12, 6, 5], Some(16), false, 12, false, None),
    case!("primes4", [2, 3, 5, 7, 11, 13, 0, 1, 4, 6, 8, 9, 10, 12, 14, 15], None, false, 10, false,
        Some("CNOT(d,c) CNOT(c,a) CNOT(b,c) NOT(b) TOF(b,c,d) TOF4(a,b,d,c) TOF(a,c,b) NOT(a) TOF4(a,c,d,b) CNOT(b,a)")),
    case!("rd32", [0, 7, 6, 9, 4, 11, 10, 13, 8, 15, 14, 1, 12, 3, 2, 5], Some(4), true, 4, false,
        Some("TOF(a,b,d) CNOT(a,b) TOF(b,c,d) CNOT(b,c)")),
    case!("shift4", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 0], Some(4), true, 4, false,
        Some("TOF4(a,b,c,d) TOF(a,b,c) CNOT(a,b) NOT(a)")),
];

/// Outcome of one benchmark case.
#[derive(Debug, Clone)]
pub struct BenchmarkResult {
    pub case: BenchmarkCase,
    pub outcome: Result<Circuit, SynthError>,
    pub elapsed: Duration,
}

impl BenchmarkResult {
    pub fn size(&self) -> Option<u8> {
        self.outcome.as_ref().ok().map(|c| c.len() as u8)
    }

    /// The circuit computes the case's function.
    pub fn verified(&self) -> bool {
        self.outcome.as_ref().is_ok_and(|c| c.eval() == self.case.perm())
    }

    pub fn matches_expected(&self) -> bool {
        self.verified() && self.size() == Some(self.case.expected_soc)
    }
}

/// Synthesizes every case; a case larger than `L` is reported and the run
/// continues.
pub fn run_benchmarks(cases: &[BenchmarkCase], synth: &Synthesizer) -> Vec<BenchmarkResult> {
    cases
        .iter()
        .map(|case| {
            let start = Instant::now();
            let outcome = synth.synthesize(case.perm());
            BenchmarkResult { case: case.clone(), outcome, elapsed: start.elapsed() }
        })
        .collect()
}

/// Aligned report of benchmark results, one case per line followed by its circuit.
pub fn format_benchmarks(results: &[BenchmarkResult], l: u8) -> String {
    let mut out = format!(
        "L = {l}\n* known circuit needs extra SWAP gates\n{:<10} {:>5} {:>4} {:>8} {:>5} {:>8} {:>10}\n",
        "name", "known", "PO", "expected", "size", "verified", "time"
    );
    for r in results {
        let known = r.case.known_best.map_or("N/A".to_string(), |s| {
            format!("{s}{}", if r.case.known_needs_swaps { "*" } else { "" })
        });
        let expected = r.case.expected_soc;
        let size = r.size().map_or(format!(">{l}"), |s| s.to_string());
        let status = match (&r.outcome, r.matches_expected()) {
            (Err(_), _) => "exceeds",
            (Ok(_), _) if !r.verified() => "WRONG",
            (Ok(_), true) => "yes",
            (Ok(_), false) => "MISMATCH",
        };
        out.push_str(&format!(
            "{:<10} {:>5} {:>4} {:>8} {:>5} {:>8} {:>9.3}s\n",
            r.case.name,
            known,
            if r.case.proved_optimal { "yes" } else { "no" },
            expected,
            size,
            status,
            r.elapsed.as_secs_f64()
        ));
        if let Ok(c) = &r.outcome {
            out.push_str(&format!("           {c}\n"));
        }
    }
    out
}

/// How long [`hard_search`] may run.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub time: Option<Duration>,
    /// Maximum number of size evaluations.
    pub evaluations: Option<u64>,
}

impl Budget {
    pub fn time(limit: Duration) -> Budget {
        Budget { time: Some(limit), evaluations: None }
    }

    pub fn evaluations(n: u64) -> Budget {
        Budget { time: None, evaluations: Some(n) }
    }

    pub fn unlimited() -> Budget {
        Budget { time: None, evaluations: None }
    }
}

#[derive(Debug, Clone)]
pub struct HardSearchReport {
    /// Largest certified size found.
    pub best_size: u8,
    /// Canonical representatives of the classes of that size found, sorted.
    pub best: Vec<Perm>,
    /// Number of functions in those classes.
    pub best_functions: u64,
    pub evaluations: u64,
    /// Every extension of the largest functions was tried before the budget ran out.
    pub exhausted: bool,
}

/// Extends the largest functions found so far by one gate at either end,
/// until nothing grows or the budget runs out.
///
/// Work is done on class representatives: prepending and appending gates to
/// a representative reaches, up to equivalence, every extension of every
/// member of its class. Classes are expanded in the order found, and a class
/// stays worth expanding while it is at most one gate smaller than the best,
/// so starting from the identity with no budget the search is a breadth-first
/// sweep and finds every class of the largest size below `L`.
pub fn hard_search(seeds: &[Perm], synth: &Synthesizer, budget: Budget) -> HardSearchReport {
    let start = Instant::now();
    let gates: Vec<Perm> = enumerate_gates().iter().map(|g| g.to_perm()).collect();
    let over_budget = |evaluations: u64| {
        budget.evaluations.is_some_and(|n| evaluations >= n) || budget.time.is_some_and(|t| start.elapsed() >= t)
    };
    let mut evaluations = 0u64;
    let mut best_size = 0u8;
    let mut best: Vec<Perm> = Vec::new();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue: VecDeque<(Perm, u8)> = VecDeque::new();

    let mut consider = |f: Perm, best_size: &mut u8, best: &mut Vec<Perm>, queue: &mut VecDeque<(Perm, u8)>| {
        let Size::Exact(s) = synth.size_of(f) else { return };
        if s < *best_size {
            return;
        }
        let rep = canonical_word(f);
        if !seen.insert(rep) {
            return;
        }
        if s > *best_size || best.is_empty() {
            *best_size = s;
            best.clear();
        }
        best.push(rep);
        queue.push_back((rep, s));
    };

    for &f in seeds {
        consider(f, &mut best_size, &mut best, &mut queue);
        evaluations += 1;
    }
    let mut exhausted = true;
    'outer: while let Some((f, s)) = queue.pop_front() {
        if s + 1 < best_size {
            continue;
        }
        for &g in &gates {
            for h in [compose(g, f), compose(f, g)] {
                if over_budget(evaluations) {
                    exhausted = false;
                    break 'outer;
                }
                consider(h, &mut best_size, &mut best, &mut queue);
                evaluations += 1;
            }
        }
    }
    best.sort_unstable();
    let best_functions = best.iter().map(|&r| class_size(r) as u64).sum();
    HardSearchReport { best_size, best, best_functions, evaluations, exhausted }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_accounting() {
        let mut a = SizeHistogram::new();
        a.add(Size::Exact(3));
        a.add(Size::Exact(3));
        a.add(Size::Exceeds);
        let mut b = SizeHistogram::new();
        b.add(Size::Exact(1));
        a.merge(&b);
        assert_eq!(a.total(), 4);
        assert_eq!(a.count(3), 2);
        assert_eq!(a.to_tsv(5), "1\t1\n3\t2\n>5\t1\n");
        assert!((a.mean_size() - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_perms_are_reproducible() {
        let a = random_perms(100, 7);
        assert_eq!(a, random_perms(100, 7));
        assert_ne!(a, random_perms(100, 8));
    }

    #[test]
    fn published_circuits_compute_their_specs() {
        for case in &BENCHMARKS {
            if let Some(text) = case.published_circuit {
                let c: Circuit = text.parse().unwrap();
                assert_eq!(c.eval(), case.perm(), "{}", case.name);
                assert_eq!(c.len(), case.expected_soc as usize, "{}", case.name);
            }
        }
    }

    #[test]
    fn hard_search_small_table() {
        let table = crate::bfs::build(2, 0.6).unwrap();
        let synth = Synthesizer::new(&table, crate::synth::SearchConfig::new(2).with_m(2)).unwrap();
        let r = hard_search(&[Perm::IDENTITY], &synth, Budget::unlimited());
        assert!(r.exhausted);
        assert_eq!(r.best_size, 4);
        assert_eq!(r.best.len(), 6538);
        assert_eq!(r.best_functions, 294_507);
    }

    #[test]
    fn linear_matches_affine() {
        let lin = enumerate_linear();
        assert_eq!(lin.len(), 322_560);
        assert_eq!(lin, enumerate_affine());
    }
}
