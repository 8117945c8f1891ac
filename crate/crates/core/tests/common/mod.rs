//! Shared oracle helpers for the integration suites.
//!
//! The brute-force fiber here deliberately avoids the library's admissible
//! set search: it enumerates every realizable rational class below a bound
//! by plain odometer and keeps the ones whose restriction equals the target
//! class. Agreement between the two paths is what the oracle tests check.

// Each integration target compiles its own copy and uses a subset.
#![allow(dead_code)]

use rand::Rng;

use brauerlab::brauer::{restrict, BrauerClass};
use brauerlab::fiber::member;
use brauerlab::fields::FieldProfile;
use brauerlab::invariants::InvariantValue;

/// Primes up to and including `bound`, by trial division, written out here
/// so the oracle does not share the library's sieve.
pub fn small_primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

fn fraction(num: u32, den: u32) -> InvariantValue {
    InvariantValue::new(i64::from(num), u64::from(den)).expect("positive denominator")
}

/// Every realizable rational class of degree `d` supported below `bound`:
/// all assignments of `k/d` to the primes and of 0 (or 1/2 for even `d`) to
/// infinity, filtered by integral sum.
pub fn all_rational_classes(d: u32, bound: u64) -> Vec<BrauerClass> {
    let primes = small_primes(bound);
    let arch_choices: Vec<InvariantValue> = if d.is_multiple_of(2) {
        vec![InvariantValue::ZERO, fraction(1, 2)]
    } else {
        vec![InvariantValue::ZERO]
    };
    let mut classes = Vec::new();
    let mut counters = vec![0u32; primes.len()];
    loop {
        for &arch in &arch_choices {
            let finite = primes
                .iter()
                .zip(&counters)
                .map(|(&q, &k)| (q, fraction(k, d)));
            let sum: InvariantValue = finite.clone().map(|(_, v)| v).chain([arch]).sum();
            if sum.is_zero() {
                classes.push(BrauerClass::rational(d, finite, arch).expect("degree fits"));
            }
        }
        // Odometer over the per-prime numerators.
        let mut idx = 0;
        loop {
            if idx == counters.len() {
                return classes;
            }
            counters[idx] += 1;
            if counters[idx] < d {
                break;
            }
            counters[idx] = 0;
            idx += 1;
        }
    }
}

/// Sorted labels of every rational class below the bound whose restriction
/// equals `a`; the membership test itself is the definition, not the search.
pub fn brute_force_fiber_labels(
    a: &BrauerClass,
    profile: &FieldProfile,
    d: u32,
    bound: u64,
) -> Vec<String> {
    let mut labels: Vec<String> = all_rational_classes(d, bound)
        .iter()
        .filter(|b| member(b, a, profile).expect("profiled support"))
        .map(|b| b.label())
        .collect();
    labels.sort();
    labels
}

/// A random realizable rational class: random numerators over a random
/// subset of the primes below the bound, with one slot adjusted so the sum
/// is integral.
pub fn random_rational_class<R: Rng>(rng: &mut R, d: u32, bound: u64) -> BrauerClass {
    let primes = small_primes(bound);
    let mut finite: Vec<(u64, InvariantValue)> = Vec::new();
    for &q in &primes {
        if rng.gen_bool(0.4) {
            finite.push((q, fraction(rng.gen_range(0..d), d)));
        }
    }
    let arch = if d.is_multiple_of(2) && rng.gen_bool(0.2) {
        fraction(1, 2)
    } else {
        InvariantValue::ZERO
    };
    let sum: InvariantValue = finite.iter().map(|&(_, v)| v).chain([arch]).sum();
    if !sum.is_zero() {
        // Cancel the deficit at a prime not yet used, or fold it into the
        // first slot if every prime is taken.
        let deficit = -sum;
        match primes.iter().find(|q| finite.iter().all(|&(used, _)| used != **q)) {
            Some(&fresh) => finite.push((fresh, deficit)),
            None => finite[0].1 = finite[0].1 + deficit,
        }
    }
    BrauerClass::rational(d, finite, arch).expect("degree fits")
}

/// A random class over a profiled field that is valid by construction.
/// Half the time it is a restriction (so its fiber is nonempty), half the
/// time a restriction perturbed inside one prime (usually emptying the
/// fiber while preserving validity).
pub fn random_class_over<R: Rng>(
    rng: &mut R,
    profile: &FieldProfile,
    d: u32,
    bound: u64,
) -> BrauerClass {
    let mut a = restrict(&random_rational_class(rng, d, bound), profile)
        .expect("restriction of a rational class");
    let spread: Vec<u64> = profile
        .decompositions
        .iter()
        .filter(|dec| dec.places.len() >= 2)
        .map(|dec| dec.q)
        .collect();
    if rng.gen_bool(0.5) && !spread.is_empty() {
        let q = spread[rng.gen_range(0..spread.len())];
        let delta = fraction(1, d);
        a.set_finite(q, 0, a.finite_invariant(q, 0) + delta);
        a.set_finite(q, 1, a.finite_invariant(q, 1) + (-delta));
    }
    debug_assert!(a.validate(profile).is_empty());
    a
}
