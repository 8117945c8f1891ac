//! Fibers of restriction: which rational classes restrict to a given one.
//!
//! Fix a profiled field `K` and a degree-`d` class `A` over it. The fiber
//! of `A` is the set of degree-`d` classes `B` over Q with
//! `restrict(B, K) = A`. Because restriction scales the invariant at each
//! place by its local degree, the fiber is cut out by one independent
//! condition per rational prime: the value of `B` at `q` must lie in the
//! [`admissible_set`] determined by the local degrees over `q` and the
//! invariants of `A` there. A [`FiberDescription`] collects those per-prime
//! sets (plus an archimedean set and one set per declared Cebotarev class)
//! and classifies how many classes satisfy all of them together with
//! reciprocity, i.e. the requirement that the chosen values sum to zero.
//!
//! Primes a profile says nothing about admit only the zero value for
//! membership questions that must be *certified*; to let a fiber range over
//! primes known only through a Cebotarev class, extend the profile first
//! with [`crate::fields::FieldProfile::assuming`] and recompute. The plain
//! [`enumerate`] refuses bounds that reach unprofiled primes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brauer::{equal, restrict, BrauerClass, BrauerError};
use crate::fields::{FieldProfile, LocalPlace};
use crate::invariants::InvariantValue;

/// Errors for fiber computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("class has degree {class} but the fiber was requested at degree {requested}")]
    DegreeMismatch { class: u32, requested: u32 },
    #[error("class is not valid over the profile: {0}")]
    InvalidClass(String),
    #[error("profile is not valid: {0}")]
    InvalidProfile(String),
    #[error("prime {q} lies under the bound but is not covered by profiled data")]
    CoverageGap { q: u64 },
    #[error("prime {q} is profiled on one side only and no class data determines the other")]
    IncomparableProfiles { q: u64 },
    #[error(transparent)]
    Brauer(#[from] BrauerError),
}

/// Where an admissible set lives: at a finite prime or at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    Finite(u64),
    Arch,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Finite(q) => write!(f, "{q}"),
            Slot::Arch => write!(f, "arch"),
        }
    }
}

/// The admissible values of a rational class at one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub slot: Slot,
    pub values: BTreeSet<InvariantValue>,
}

/// The candidate invariants of order dividing `d`: `k/d` for `0 <= k < d`.
pub fn candidate_values(d: u32) -> Vec<InvariantValue> {
    (0..i64::from(d))
        .map(|k| InvariantValue::new(k, u64::from(d)).expect("positive degree"))
        .collect()
}

fn finite_values(a: &BrauerClass, profile: &FieldProfile, q: u64) -> Result<BTreeSet<InvariantValue>, FiberError> {
    let places = profile
        .places_over(q)
        .map_err(|_| FiberError::Brauer(BrauerError::ProfileGap { field: profile.name.clone(), q }))?;
    let values = candidate_values(a.degree())
        .into_iter()
        .filter(|x| {
            places
                .iter()
                .enumerate()
                .all(|(idx, place)| x.scale(place.local_degree()) == a.finite_invariant(q, idx))
        })
        .collect();
    Ok(values)
}

fn arch_values(a: &BrauerClass, profile: &FieldProfile) -> BTreeSet<InvariantValue> {
    let real = profile.signature.real as usize;
    [InvariantValue::ZERO, InvariantValue::HALF]
        .into_iter()
        .filter(|x| x.order_divides(a.degree()))
        .filter(|x| {
            (0..profile.arch_places()).all(|idx| {
                let expected = a.arch_invariants().get(idx).copied().unwrap_or(InvariantValue::ZERO);
                let restricted = if idx < real { *x } else { x.scale(2) };
                restricted == expected
            })
        })
        .collect()
}

/// Admissible values at one slot for rational classes restricting to `A`.
/// At a finite prime these are the `x` of order dividing `deg A` with
/// `(e_i f_i) * x = Inv_i(A)` for every place `i` over `q`; at infinity the
/// local degree is 1 at real places and 2 at complex ones, and candidates
/// are limited to 0 and 1/2.
pub fn admissible_set(
    a: &BrauerClass,
    profile: &FieldProfile,
    slot: Slot,
) -> Result<AdmissibleSet, FiberError> {
    let values = match slot {
        Slot::Finite(q) => finite_values(a, profile, q)?,
        Slot::Arch => arch_values(a, profile),
    };
    Ok(AdmissibleSet { slot, values })
}

/// Whether any rational value at all is admissible at `q`.
pub fn compatibility(a: &BrauerClass, profile: &FieldProfile, q: u64) -> Result<bool, FiberError> {
    Ok(!finite_values(a, profile, q)?.is_empty())
}

/// A prime (splitting type) is free for degree `d` when `d` divides every
/// local degree over it: any invariant of order dividing `d` placed there
/// restricts to zero, so it never disturbs a fiber membership.
pub fn is_free_prime(splitting: &[LocalPlace], d: u32) -> bool {
    d > 0 && splitting.iter().all(|place| place.local_degree() % u64::from(d) == 0)
}

/// How many rational classes a fiber contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum Cardinality {
    Empty,
    Finite { count: u64 },
    Infinite,
    Unknown,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Empty => write!(f, "EMPTY"),
            Cardinality::Finite { count } => write!(f, "FINITE({count})"),
            Cardinality::Infinite => write!(f, "INFINITE"),
            Cardinality::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// Admissible data contributed by one Cebotarev class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassValueSet {
    pub infinite: bool,
    pub splitting_type: Vec<LocalPlace>,
    pub values: BTreeSet<InvariantValue>,
}

/// Symbolic description of a restriction fiber. See the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDescription {
    /// Identifier of the class the fiber sits over.
    pub algebra: String,
    #[serde(rename = "d")]
    pub degree: u32,
    /// Admissible sets at each profiled prime.
    pub profiled: BTreeMap<u64, BTreeSet<InvariantValue>>,
    /// Admissible archimedean values.
    pub arch: BTreeSet<InvariantValue>,
    /// Admissible sets at primes of each declared Cebotarev class.
    pub classes: BTreeMap<String, ClassValueSet>,
    pub cardinality: Cardinality,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Computes the fiber description of `A` over its profile. `d` must equal
/// the degree of `A`; it is passed explicitly because the fiber is a
/// statement about degree-`d` algebras on both sides.
pub fn fiber_description(
    a: &BrauerClass,
    profile: &FieldProfile,
    d: u32,
) -> Result<FiberDescription, FiberError> {
    if a.degree() != d {
        return Err(FiberError::DegreeMismatch { class: a.degree(), requested: d });
    }
    let profile_report = profile.validate();
    if let Some(first) = profile_report.first() {
        return Err(FiberError::InvalidProfile(first.to_string()));
    }
    let class_report = a.validate(profile);
    if let Some(first) = class_report.first() {
        return Err(FiberError::InvalidClass(first.to_string()));
    }

    let mut profiled = BTreeMap::new();
    for dec in &profile.decompositions {
        profiled.insert(dec.q, finite_values(a, profile, dec.q)?);
    }
    let arch = arch_values(a, profile);
    let mut classes = BTreeMap::new();
    for class in &profile.cebotarev_classes {
        // The class describes primes where A is unramified, so the
        // admissible values are those killed by every local degree.
        let values = candidate_values(d)
            .into_iter()
            .filter(|x| class.splitting_type.iter().all(|p| x.scale(p.local_degree()).is_zero()))
            .collect();
        classes.insert(
            class.label.clone(),
            ClassValueSet {
                infinite: class.infinite,
                splitting_type: class.splitting_type.clone(),
                values,
            },
        );
    }

    let mut description = FiberDescription {
        algebra: a.label(),
        degree: d,
        profiled,
        arch,
        classes,
        cardinality: Cardinality::Unknown,
        notes: Vec::new(),
    };
    description.cardinality = classify_cardinality(&description);
    if description.cardinality == Cardinality::Infinite && d != 2 {
        description
            .notes
            .push(format!("infinitude at degree {d} extrapolates the degree-2 mechanism"));
    }
    Ok(description)
}

/// Residue of `v` in Z/d under `k/den -> k * (d/den)`; all values handled
/// here have order dividing `d`.
fn residue(v: InvariantValue, d: u64) -> u64 {
    debug_assert_eq!(d % v.order(), 0);
    v.numerator() * (d / v.denominator()) % d
}

fn gcd(a: u64, b: u64) -> u64 {
    crate::invariants::gcd(a, b)
}

/// Distribution of achievable reciprocity sums over the profiled slots:
/// maps each achievable sum to the number of selections reaching it.
fn sum_distribution(description: &FiberDescription) -> BTreeMap<InvariantValue, u64> {
    let mut dist = BTreeMap::from([(InvariantValue::ZERO, 1u64)]);
    let slots = description
        .profiled
        .values()
        .chain(std::iter::once(&description.arch));
    for set in slots {
        let mut next: BTreeMap<InvariantValue, u64> = BTreeMap::new();
        for (&sum, &count) in &dist {
            for &value in set {
                *next.entry(sum + value).or_insert(0) += count;
            }
        }
        dist = next;
    }
    dist
}

/// Classifies the number of rational classes in the fiber.
///
/// Selections over the profiled primes and the archimedean slot are
/// enumerated exactly (as a sum distribution, so the cost is polynomial in
/// the number of primes). Cebotarev classes contribute extra primes whose
/// values can absorb a nonzero total: with an infinite class any residual
/// in the subgroup generated by its nonzero values is reachable, because
/// `order(v)` copies of `v` sum to zero and the supply of primes never runs
/// out. Classes declared non-infinite have unknown multiplicity, so any
/// verdict that would depend on them degrades to UNKNOWN.
pub fn classify_cardinality(description: &FiberDescription) -> Cardinality {
    let d = u64::from(description.degree);
    let dist = sum_distribution(description);
    if dist.is_empty() {
        // Some admissible set is empty; no selection exists at all.
        return Cardinality::Empty;
    }

    let infinite_values: Vec<u64> = description
        .classes
        .values()
        .filter(|c| c.infinite)
        .flat_map(|c| c.values.iter())
        .filter(|v| !v.is_zero())
        .map(|&v| residue(v, d))
        .collect();
    let all_values: Vec<u64> = description
        .classes
        .values()
        .flat_map(|c| c.values.iter())
        .filter(|v| !v.is_zero())
        .map(|&v| residue(v, d))
        .collect();
    let g_infinite = infinite_values.iter().fold(d, |g, &r| gcd(g, r));
    let g_all = all_values.iter().fold(d, |g, &r| gcd(g, r));

    let feasible = |g: u64| dist.keys().any(|&sum| residue(sum, d).is_multiple_of(g));

    if !feasible(g_all) {
        return Cardinality::Empty;
    }
    if !feasible(g_infinite) {
        // Only a class of undeclared multiplicity can balance reciprocity.
        return Cardinality::Unknown;
    }
    if !infinite_values.is_empty() {
        return Cardinality::Infinite;
    }
    // No infinite class offers a nonzero value, so members are exactly the
    // profiled selections summing to zero.
    let count = dist.get(&InvariantValue::ZERO).copied().unwrap_or(0);
    debug_assert!(count > 0, "feasible(g_infinite) with trivial subgroup implies a zero sum");
    if !all_values.is_empty() {
        // A non-infinite class might add members beyond the profiled count.
        return Cardinality::Unknown;
    }
    Cardinality::Finite { count }
}

/// Primes up to and including `bound`, by trial division; the bounds used
/// here are tiny.
pub fn rational_primes_up_to(bound: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    for n in 2..=bound {
        if primes.iter().take_while(|&&p| p * p <= n).all(|&p| n % p != 0) {
            primes.push(n);
        }
    }
    primes
}

/// Enumerates the rational classes in the fiber with support below
/// `prime_bound`, in lexicographic order of their invariant choices, up to
/// `limit` results. Every prime below the bound must be profiled (extend
/// the profile via class membership first if needed); profiled primes above
/// the bound must admit the zero value, otherwise no class with support
/// below the bound restricts correctly there and the result is empty.
pub fn enumerate(
    description: &FiberDescription,
    prime_bound: u64,
    limit: usize,
) -> Result<Vec<BrauerClass>, FiberError> {
    for q in rational_primes_up_to(prime_bound) {
        if !description.profiled.contains_key(&q) {
            return Err(FiberError::CoverageGap { q });
        }
    }
    for (&q, values) in description.profiled.range(prime_bound + 1..) {
        if !values.contains(&InvariantValue::ZERO) {
            debug_assert!(q > prime_bound);
            return Ok(Vec::new());
        }
    }

    let slots: Vec<(u64, Vec<InvariantValue>)> = description
        .profiled
        .range(..=prime_bound)
        .map(|(&q, values)| (q, values.iter().copied().collect()))
        .collect();
    let arch: Vec<InvariantValue> = description.arch.iter().copied().collect();

    let mut members = Vec::new();
    let mut choice: Vec<InvariantValue> = Vec::with_capacity(slots.len());
    fn search(
        slots: &[(u64, Vec<InvariantValue>)],
        arch: &[InvariantValue],
        degree: u32,
        choice: &mut Vec<InvariantValue>,
        partial: InvariantValue,
        members: &mut Vec<BrauerClass>,
        limit: usize,
    ) -> Result<(), FiberError> {
        if members.len() >= limit {
            return Ok(());
        }
        if choice.len() == slots.len() {
            for &arch_value in arch {
                if members.len() >= limit {
                    return Ok(());
                }
                if (partial + arch_value).is_zero() {
                    let finite = slots
                        .iter()
                        .zip(choice.iter())
                        .map(|(&(q, _), &v)| (q, v));
                    members.push(BrauerClass::rational(degree, finite, arch_value)?);
                }
            }
            return Ok(());
        }
        let (_, values) = &slots[choice.len()];
        for &value in values {
            choice.push(value);
            search(slots, arch, degree, choice, partial + value, members, limit)?;
            choice.pop();
        }
        Ok(())
    }
    search(&slots, &arch, description.degree, &mut choice, InvariantValue::ZERO, &mut members, limit)?;
    Ok(members)
}

/// Whether `restrict(B, profile)` equals `A`. The support of `B` must be
/// profiled (or the base field rational), otherwise the restriction is not
/// computable and the membership cannot be certified.
pub fn member(b: &BrauerClass, a: &BrauerClass, profile: &FieldProfile) -> Result<bool, FiberError> {
    let restricted = restrict(b, profile)?;
    Ok(equal(&restricted, a)?)
}

/// Verdict of a fiber comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Equal,
    Unequal,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => write!(f, "EQUAL"),
            Verdict::Unequal => write!(f, "UNEQUAL"),
        }
    }
}

/// One slot where two fibers disagree, with both value sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDifference {
    /// A prime rendered as a number, "arch", or "class <label>".
    pub slot: String,
    pub left: BTreeSet<InvariantValue>,
    pub right: BTreeSet<InvariantValue>,
}

/// Outcome of [`compare`]: verdict, witnesses, and how large the common
/// part of the two fibers is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub verdict: Verdict,
    pub witness_differences: Vec<FiberDifference>,
    pub intersection_cardinality: Cardinality,
}

fn sorted_splitting(splitting: &[LocalPlace]) -> Vec<LocalPlace> {
    let mut sorted = splitting.to_vec();
    sorted.sort();
    sorted
}

/// The value set a fiber implies at a prime it does not profile: determined
/// only when every declared class agrees, since the prime could belong to
/// any of them.
fn implied_set(description: &FiberDescription, q: u64) -> Result<BTreeSet<InvariantValue>, FiberError> {
    let mut sets = description.classes.values().map(|c| &c.values);
    let Some(first) = sets.next() else {
        return Err(FiberError::IncomparableProfiles { q });
    };
    if sets.all(|s| s == first) {
        Ok(first.clone())
    } else {
        Err(FiberError::IncomparableProfiles { q })
    }
}

/// Compares two fibers over the rationals slot by slot. The verdict is
/// EQUAL exactly when no witness difference exists; the intersection
/// cardinality classifies the set of rational classes lying in both fibers.
pub fn compare(left: &FiberDescription, right: &FiberDescription) -> Result<ComparisonResult, FiberError> {
    if left.degree != right.degree {
        return Err(FiberError::DegreeMismatch { class: left.degree, requested: right.degree });
    }
    let mut differences = Vec::new();
    let mut intersection = FiberDescription {
        algebra: format!("{} /\\ {}", left.algebra, right.algebra),
        degree: left.degree,
        profiled: BTreeMap::new(),
        arch: &left.arch & &right.arch,
        classes: BTreeMap::new(),
        cardinality: Cardinality::Unknown,
        notes: Vec::new(),
    };

    let primes: BTreeSet<u64> = left.profiled.keys().chain(right.profiled.keys()).copied().collect();
    for q in primes {
        let left_set = match left.profiled.get(&q) {
            Some(set) => set.clone(),
            None => implied_set(left, q)?,
        };
        let right_set = match right.profiled.get(&q) {
            Some(set) => set.clone(),
            None => implied_set(right, q)?,
        };
        if left_set != right_set {
            differences.push(FiberDifference {
                slot: q.to_string(),
                left: left_set.clone(),
                right: right_set.clone(),
            });
        }
        intersection.profiled.insert(q, &left_set & &right_set);
    }

    if left.arch != right.arch {
        differences.push(FiberDifference {
            slot: "arch".to_string(),
            left: left.arch.clone(),
            right: right.arch.clone(),
        });
    }

    // Classes are matched by splitting type, not label.
    let mut right_unmatched: BTreeMap<Vec<LocalPlace>, (&String, &ClassValueSet)> = right
        .classes
        .iter()
        .map(|(label, set)| (sorted_splitting(&set.splitting_type), (label, set)))
        .collect();
    for (label, left_class) in &left.classes {
        let key = sorted_splitting(&left_class.splitting_type);
        match right_unmatched.remove(&key) {
            Some((_, right_class)) => {
                if left_class.values != right_class.values {
                    differences.push(FiberDifference {
                        slot: format!("class {label}"),
                        left: left_class.values.clone(),
                        right: right_class.values.clone(),
                    });
                }
                intersection.classes.insert(
                    label.clone(),
                    ClassValueSet {
                        infinite: left_class.infinite && right_class.infinite,
                        splitting_type: left_class.splitting_type.clone(),
                        values: &left_class.values & &right_class.values,
                    },
                );
            }
            None => differences.push(FiberDifference {
                slot: format!("class {label}"),
                left: left_class.values.clone(),
                right: BTreeSet::new(),
            }),
        }
    }
    for (label, right_class) in right_unmatched.into_values() {
        differences.push(FiberDifference {
            slot: format!("class {label}"),
            left: BTreeSet::new(),
            right: right_class.values.clone(),
        });
    }

    intersection.cardinality = classify_cardinality(&intersection);
    let verdict = if differences.is_empty() { Verdict::Equal } else { Verdict::Unequal };
    Ok(ComparisonResult {
        verdict,
        witness_differences: differences,
        intersection_cardinality: intersection.cardinality,
    })
}
