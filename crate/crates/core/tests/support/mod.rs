// SPDX-License-Identifier: Apache-2.0

//! Strategies and laws shared by the property suite and the acceptance run.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rev4::canonical::{canonical_rep, canonical_word, class_members, class_size, equivalence_class};
use rev4::circuit::Circuit;
use rev4::gate::{enumerate_gates, Gate};
use rev4::perm::{compose, conjugate_adjacent, inverse, Perm, Transposition, WirePerm};

pub const CASES: u32 = 100_000;

pub fn perm() -> impl Strategy<Value = Perm> {
    Just((0u8..16).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(&v).unwrap())
}

pub fn wire_perm() -> impl Strategy<Value = WirePerm> {
    (0usize..24).prop_map(|i| WirePerm::all()[i])
}

pub fn transposition() -> impl Strategy<Value = Transposition> {
    prop::sample::select(Transposition::ALL.to_vec())
}

pub fn gate() -> impl Strategy<Value = Gate> {
    prop::sample::select(enumerate_gates())
}

pub fn circuit(max_len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(gate(), 0..=max_len).prop_map(Circuit::from_gates)
}

pub type Law = Result<(), TestCaseError>;

pub fn compose_inverse_round_trip(p: Perm) -> Law {
    prop_assert_eq!(compose(p, inverse(p)), Perm::IDENTITY);
    prop_assert_eq!(compose(inverse(p), p), Perm::IDENTITY);
    prop_assert_eq!(inverse(inverse(p)), p);
    Ok(())
}

pub fn compose_is_associative(p: Perm, q: Perm, r: Perm) -> Law {
    prop_assert_eq!(compose(compose(p, q), r), compose(p, compose(q, r)));
    Ok(())
}

pub fn compose_matches_naive(p: Perm, q: Perm) -> Law {
    let (pi, qi) = (p.images(), q.images());
    let naive: [u8; 16] = core::array::from_fn(|x| qi[pi[x] as usize]);
    prop_assert_eq!(compose(p, q).images(), naive);
    Ok(())
}

pub fn adjacent_conjugation(p: Perm, q: Perm, t: Transposition) -> Law {
    prop_assert_eq!(conjugate_adjacent(conjugate_adjacent(p, t), t), p);
    prop_assert_eq!(
        conjugate_adjacent(compose(p, q), t),
        compose(conjugate_adjacent(p, t), conjugate_adjacent(q, t))
    );
    prop_assert_eq!(conjugate_adjacent(p, t), p.conjugate(t.wire_perm()));
    Ok(())
}

pub fn conjugation_commutes_with_inversion(p: Perm) -> Law {
    for sigma in WirePerm::all() {
        prop_assert_eq!(inverse(p.conjugate(sigma)), inverse(p).conjugate(sigma));
    }
    Ok(())
}

pub fn canonical_rep_is_idempotent(p: Perm) -> Law {
    let (rep, _) = canonical_rep(p);
    prop_assert_eq!(canonical_rep(rep).0, rep);
    prop_assert_eq!(canonical_word(p), rep);
    Ok(())
}

pub fn canonical_rep_is_a_class_invariant(p: Perm, sigma: WirePerm, invert: bool) -> Law {
    let q = if invert { inverse(p) } else { p }.conjugate(sigma);
    prop_assert_eq!(canonical_rep(q).0, canonical_rep(p).0);
    Ok(())
}

pub fn canonical_rep_is_the_class_minimum(p: Perm) -> Law {
    let class = equivalence_class(p);
    prop_assert_eq!(canonical_rep(p).0, class[0]);
    prop_assert!(class.windows(2).all(|w| w[0] < w[1]));
    prop_assert_eq!(class.len(), class_size(p));
    prop_assert!(class_members(p).contains(&p));
    Ok(())
}

pub fn class_size_divides_48(p: Perm) -> Law {
    prop_assert_eq!(48 % class_size(p), 0);
    Ok(())
}

pub fn witness_reconstructs(p: Perm) -> Law {
    let (rep, w) = canonical_rep(p);
    prop_assert_eq!(w.reconstruct(rep), p);
    Ok(())
}

pub fn circuit_reversal_law(c: Circuit) -> Law {
    prop_assert_eq!(c.reversed().eval(), inverse(c.eval()));
    let mut both = c.clone();
    both.extend(&c.reversed());
    prop_assert_eq!(both.eval(), Perm::IDENTITY);
    Ok(())
}

pub fn circuit_relabeling_law(c: Circuit, sigma: WirePerm) -> Law {
    prop_assert_eq!(c.conjugated(sigma).eval(), c.eval().conjugate(sigma));
    Ok(())
}

/// Runs every law with `cases` cases each; the names of the failing laws.
pub fn run_all_laws(cases: u32) -> Vec<String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut failures = Vec::new();
    let mut check = |name: &str, result: Result<(), String>| {
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    };
    macro_rules! run {
        ($name:literal, $strategy:expr, $law:expr) => {
            check($name, TestRunner::new(config.clone()).run(&$strategy, $law).map_err(|e| e.to_string()))
        };
    }
    run!("compose/inverse round trip", perm(), compose_inverse_round_trip);
    run!("associativity", (perm(), perm(), perm()), |(p, q, r)| compose_is_associative(p, q, r));
    run!("compose vs naive", (perm(), perm()), |(p, q)| compose_matches_naive(p, q));
    run!("adjacent conjugation", (perm(), perm(), transposition()), |(p, q, t)| adjacent_conjugation(p, q, t));
    run!("conjugation/inversion commutation", perm(), conjugation_commutes_with_inversion);
    run!("canonical idempotence", perm(), canonical_rep_is_idempotent);
    run!("canonical class invariance", (perm(), wire_perm(), any::<bool>()), |(p, s, i)| {
        canonical_rep_is_a_class_invariant(p, s, i)
    });
    run!("canonical minimum", perm(), canonical_rep_is_the_class_minimum);
    run!("class size divides 48", perm(), class_size_divides_48);
    run!("witness reconstruction", perm(), witness_reconstructs);
    run!("circuit reversal", circuit(20), circuit_reversal_law);
    run!("circuit relabeling", (circuit(20), wire_perm()), |(c, s)| circuit_relabeling_law(c, s));
    failures
}
