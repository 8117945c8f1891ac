//! Building pairs of classes with matching fibers over twin fields.
//!
//! Given two profiled fields tied together by a place bijection, the
//! construction picks `r` profiled primes that are unramified and carry a
//! degree-one place, puts the invariant `1/d` at each of them in a rational
//! witness class `B`, and restricts `B` to both fields. When `d` divides
//! `r` the witness satisfies reciprocity outright, and the degree-one
//! places guarantee both restrictions have a place of invariant exactly
//! `1/d`, hence order `d`. Transporting invariants along the bijection
//! reproduces the restriction on the other side whenever the bijection
//! preserves ramification and residue degrees over the chosen primes, so
//! the two restrictions share the rational fiber by construction.
//!
//! [`almost_equal_scenario`] runs the construction over a pair of fields
//! that are arithmetically equivalent but not locally equivalent, where a
//! prime with mismatched splitting drives the two fibers apart at exactly
//! that prime while their intersection stays infinite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brauer::{equal, restrict, BrauerClass, BrauerError};
use crate::fiber::{
    self, compare, enumerate, fiber_description, member, Cardinality, ComparisonResult,
    FiberDescription, FiberError, Verdict,
};
use crate::fields::catalog::{self, CatalogEntry, CatalogError};
use crate::fields::{check_arithmetic_equivalence, check_local_equivalence, FieldProfile};
use crate::invariants::InvariantValue;

/// Errors for the pair construction and its scenario driver.
#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("degree {degree} does not divide the requested tuple length {count}")]
    DegreeConstraint { degree: u32, count: usize },
    #[error("only {available} qualifying primes are profiled, {needed} are needed")]
    InsufficientPrimes { needed: usize, available: usize },
    #[error("bijection does not preserve local data over {q}")]
    BijectionNotLocal { q: u64 },
    #[error("reciprocity certificate mismatch: computed {computed}, symbolic {symbolic}")]
    CertificateMismatch { computed: InvariantValue, symbolic: InvariantValue },
    #[error("prime {q} is not free for degree {degree}")]
    NotFreePrime { q: u64, degree: u32 },
    #[error("prime {q} already carries an invariant in the witness")]
    DuplicatePrime { q: u64 },
    #[error("constructed class fails validation: {0}")]
    OutputInvalid(String),
    #[error("scenario cannot proceed: {0}")]
    ScenarioDegenerate(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Field(#[from] crate::fields::FieldError),
    #[error(transparent)]
    Brauer(#[from] BrauerError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

/// A vetted choice of working primes for the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    /// The field the primes were selected from.
    pub field: String,
    pub degree: u32,
    /// Selected primes, ascending.
    pub primes: Vec<u64>,
    /// Index of a degree-one place over each selected prime; the restricted
    /// class keeps the full invariant 1/d there, which pins its order.
    pub designated: BTreeMap<u64, usize>,
    /// How many profiled primes qualified overall.
    pub qualifying: usize,
}

/// Selects the `count` smallest profiled primes that are unramified and
/// have a place of degree one. The degree must divide `count`, otherwise no
/// witness supported exactly on such a tuple can satisfy reciprocity.
pub fn select_prime_tuple(
    profile: &FieldProfile,
    degree: u32,
    count: usize,
) -> Result<ConstructionPlan, ConstructError> {
    if degree == 0 || count == 0 || !count.is_multiple_of(degree as usize) {
        return Err(ConstructError::DegreeConstraint { degree, count });
    }
    let mut qualifying: Vec<(u64, usize)> = profile
        .decompositions
        .iter()
        .filter(|dec| dec.places.iter().all(|p| !p.is_ramified()))
        .filter_map(|dec| {
            dec.places
                .iter()
                .position(|p| p.local_degree() == 1)
                .map(|idx| (dec.q, idx))
        })
        .collect();
    qualifying.sort_unstable();
    if qualifying.len() < count {
        return Err(ConstructError::InsufficientPrimes {
            needed: count,
            available: qualifying.len(),
        });
    }
    let selected = &qualifying[..count];
    Ok(ConstructionPlan {
        field: profile.name.clone(),
        degree,
        primes: selected.iter().map(|&(q, _)| q).collect(),
        designated: selected.iter().copied().collect(),
        qualifying: qualifying.len(),
    })
}

/// The rational witness of a plan: invariant `1/d` at each selected prime,
/// zero at infinity. Reciprocity holds because `d` divides the number of
/// primes.
pub fn build_witness(plan: &ConstructionPlan) -> Result<BrauerClass, ConstructError> {
    let value = InvariantValue::new(1, u64::from(plan.degree))
        .expect("plan degree is positive");
    let witness = BrauerClass::rational(
        plan.degree,
        plan.primes.iter().map(|&q| (q, value)),
        InvariantValue::ZERO,
    )?;
    let rationals = FieldProfile::rationals();
    let report = witness.validate(&rationals);
    if let Some(first) = report.first() {
        return Err(ConstructError::OutputInvalid(first.to_string()));
    }
    Ok(witness)
}

/// Exact and symbolic forms of the reciprocity sum of a restricted witness:
/// each selected prime contributes the full local degree sum `n/d`, so `r`
/// primes contribute `r * n / d` modulo one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityCertificate {
    pub computed: InvariantValue,
    pub symbolic: InvariantValue,
}

/// Certifies that the invariant sum of a restricted class matches the
/// symbolic prediction `r * n / d` for its plan.
pub fn reciprocity_certificate(
    restricted: &BrauerClass,
    plan: &ConstructionPlan,
    field_degree: u32,
) -> Result<ReciprocityCertificate, ConstructError> {
    let computed = restricted.invariant_sum();
    let numerator = plan.primes.len() as i64 * i64::from(field_degree);
    let symbolic = InvariantValue::new(numerator, u64::from(plan.degree))
        .expect("plan degree is positive");
    if computed != symbolic {
        return Err(ConstructError::CertificateMismatch { computed, symbolic });
    }
    Ok(ReciprocityCertificate { computed, symbolic })
}

/// A witness and its two restrictions, tied together by the entry's place
/// bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructedPair {
    pub plan: ConstructionPlan,
    pub witness: BrauerClass,
    pub left: BrauerClass,
    pub right: BrauerClass,
    pub certificate: ReciprocityCertificate,
}

/// Runs the construction over a catalog entry. The entry's bijection must
/// preserve `(e, f)` over every selected prime; elsewhere it may be looser,
/// since the witness is unramified there and restricts to zero on both
/// sides regardless.
pub fn build_pair(entry: &CatalogEntry, plan: &ConstructionPlan) -> Result<ConstructedPair, ConstructError> {
    for &q in &plan.primes {
        let left_places = entry
            .left
            .places_over(q)
            .map_err(|_| ConstructError::BijectionNotLocal { q })?;
        let right_places = entry
            .right
            .places_over(q)
            .map_err(|_| ConstructError::BijectionNotLocal { q })?;
        let Some(pairs) = entry.bijection.pairs.get(&q) else {
            return Err(ConstructError::BijectionNotLocal { q });
        };
        let aligned = pairs.len() == left_places.len()
            && left_places.iter().enumerate().all(|(i, place)| {
                pairs
                    .get(i)
                    .and_then(|&j| right_places.get(j))
                    .is_some_and(|target| target == place)
            });
        if !aligned {
            return Err(ConstructError::BijectionNotLocal { q });
        }
    }

    let witness = build_witness(plan)?;
    let left = restrict(&witness, &entry.left)?;
    // Transport along the bijection instead of restricting again, then
    // confirm both roads agree.
    let mut right = BrauerClass::zero_over(&entry.right, plan.degree)?;
    for (q, place, value) in left.support() {
        let target = entry.bijection.pairs[&q][place];
        right.set_finite(q, target, value);
    }
    let restricted_right = restrict(&witness, &entry.right)?;
    if !equal(&right, &restricted_right)? {
        return Err(ConstructError::OutputInvalid(format!(
            "transported class disagrees with direct restriction to {}",
            entry.right.name
        )));
    }
    for (class, profile) in [(&left, &entry.left), (&right, &entry.right)] {
        if let Some(first) = class.validate(profile).first() {
            return Err(ConstructError::OutputInvalid(first.to_string()));
        }
    }
    let certificate = reciprocity_certificate(&left, plan, entry.left.degree)?;
    Ok(ConstructedPair { plan: plan.clone(), witness, left, right, certificate })
}

/// Adds `1/d` at each given free prime of the profile. Free primes restrict
/// every order-`d` invariant to zero, so the extended witness stays in the
/// same fiber; the batch length must again be a multiple of `d` to keep the
/// rational sum integral.
pub fn extend_witness(
    witness: &BrauerClass,
    profile: &FieldProfile,
    new_primes: &[u64],
) -> Result<BrauerClass, ConstructError> {
    let degree = witness.degree();
    if new_primes.is_empty() || !new_primes.len().is_multiple_of(degree as usize) {
        return Err(ConstructError::DegreeConstraint { degree, count: new_primes.len() });
    }
    let mut extended = witness.clone();
    for &q in new_primes {
        if !extended.finite_invariant(q, 0).is_zero() {
            return Err(ConstructError::DuplicatePrime { q });
        }
        let places = profile
            .places_over(q)
            .map_err(|_| ConstructError::NotFreePrime { q, degree })?;
        if !fiber::is_free_prime(&places, degree) {
            return Err(ConstructError::NotFreePrime { q, degree });
        }
        let value = InvariantValue::new(1, u64::from(degree)).expect("degree is positive");
        extended.set_finite(q, 0, value);
    }
    debug_assert!(equal(&restrict(&extended, profile).unwrap(), &restrict(witness, profile).unwrap()).unwrap());
    Ok(extended)
}

/// Everything the almost-equal scenario produces, with rendered steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub entry: String,
    pub pair: ConstructedPair,
    pub left_fiber: FiberDescription,
    pub right_fiber: FiberDescription,
    pub comparison: ComparisonResult,
    /// The sole prime at which the two fibers disagree.
    pub witness_prime: u64,
    /// A member of the left fiber ramified at the witness prime; its
    /// restriction to the right field misses the right class there.
    pub distinguished: BrauerClass,
    pub distinguished_in_left: bool,
    pub distinguished_in_right: bool,
    /// Members of the left fiber ramified at the witness prime with support
    /// bounded by the distinguished member's largest prime.
    pub ramified_members_below_bound: u64,
    pub enumeration_bound: u64,
    pub steps: Vec<String>,
    /// Conditions the construction relies on but does not itself enforce.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Runs [`almost_equal_scenario_on`] over the built-in `perlis8` entry.
pub fn almost_equal_scenario() -> Result<ScenarioReport, ConstructError> {
    almost_equal_scenario_on(&catalog::load("perlis8")?)
}

/// Demonstrates two classes over arithmetically equivalent fields whose
/// rational fibers agree everywhere except at one prime, where the two
/// splitting behaviours disagree; the shared part of the fibers is still
/// infinite. Steps: (a) certify the equivalence situation, (b) build the
/// degree-2 pair over the two smallest qualifying primes, (c) compare the
/// fibers and isolate the witness prime, then exhibit a member on one side
/// only.
pub fn almost_equal_scenario_on(entry: &CatalogEntry) -> Result<ScenarioReport, ConstructError> {
    let mut steps = Vec::new();

    let arithmetic = check_arithmetic_equivalence(&entry.left, &entry.right, &entry.bijection);
    if !arithmetic.passes() {
        return Err(ConstructError::ScenarioDegenerate(format!(
            "{} and {} are not arithmetically equivalent under the given bijection",
            entry.left.name, entry.right.name
        )));
    }
    let local = check_local_equivalence(&entry.left, &entry.right, &entry.bijection);
    steps.push(format!(
        "(a) {} and {} are arithmetically equivalent; local equivalence {}",
        entry.left.name,
        entry.right.name,
        if local.passes() {
            "also holds".to_string()
        } else {
            format!("fails with {} defect(s)", local.defects.len())
        }
    ));

    let degree = 2;
    let plan = select_prime_tuple(&entry.left, degree, 2)?;
    let pair = build_pair(entry, &plan)?;
    steps.push(format!(
        "(b) witness {} restricts to matching degree-{} classes on both fields",
        pair.witness.label(),
        degree
    ));

    let left_fiber = fiber_description(&pair.left, &entry.left, degree)?;
    let right_fiber = fiber_description(&pair.right, &entry.right, degree)?;
    let comparison = compare(&left_fiber, &right_fiber)?;
    let prime_differences: Vec<u64> = comparison
        .witness_differences
        .iter()
        .filter_map(|d| d.slot.parse().ok())
        .collect();
    if comparison.verdict == Verdict::Equal {
        return Err(ConstructError::ScenarioDegenerate(
            "the two fibers are equal; no distinguishing prime exists".to_string(),
        ));
    }
    let [witness_prime] = prime_differences.as_slice() else {
        return Err(ConstructError::ScenarioDegenerate(format!(
            "expected exactly one differing prime, found {prime_differences:?}"
        )));
    };
    let witness_prime = *witness_prime;
    if comparison.witness_differences.len() != 1 {
        return Err(ConstructError::ScenarioDegenerate(
            "fibers differ beyond a single prime slot".to_string(),
        ));
    }
    if comparison.intersection_cardinality != Cardinality::Infinite {
        return Err(ConstructError::ScenarioDegenerate(format!(
            "intersection of the fibers is {}, not INFINITE",
            comparison.intersection_cardinality
        )));
    }
    steps.push(format!(
        "(c) the fibers are UNEQUAL with sole witness prime {witness_prime} and INFINITE intersection",
    ));

    // A value admissible on the left but not on the right, compensated at
    // the smallest free prime outside the support so reciprocity survives.
    let difference = comparison
        .witness_differences
        .iter()
        .find(|d| d.slot == witness_prime.to_string())
        .expect("the witness prime came from this list");
    let &extra = difference
        .left
        .difference(&difference.right)
        .find(|v| !v.is_zero())
        .ok_or_else(|| {
            ConstructError::ScenarioDegenerate(format!(
                "left fiber admits nothing extra at {witness_prime}"
            ))
        })?;
    let compensating = entry
        .left
        .decompositions
        .iter()
        .map(|dec| dec.q)
        .filter(|q| !plan.primes.contains(q) && *q != witness_prime)
        .find(|&q| {
            entry
                .left
                .places_over(q)
                .map(|places| fiber::is_free_prime(&places, degree))
                .unwrap_or(false)
        })
        .ok_or_else(|| {
            ConstructError::ScenarioDegenerate("no free prime available for compensation".to_string())
        })?;
    let mut distinguished = pair.witness.clone();
    distinguished.set_finite(witness_prime, 0, extra);
    distinguished.set_finite(compensating, 0, -extra);

    let distinguished_in_left = member(&distinguished, &pair.left, &entry.left)?;
    let distinguished_in_right = member(&distinguished, &pair.right, &entry.right)?;

    let enumeration_bound = distinguished
        .support_primes()
        .into_iter()
        .max()
        .expect("distinguished member is ramified");
    let ramified_members_below_bound = enumerate(&left_fiber, enumeration_bound, usize::MAX)?
        .iter()
        .filter(|b| !b.finite_invariant(witness_prime, 0).is_zero())
        .count() as u64;
    steps.push(format!(
        "(d) {} lies in the {} fiber ({}) and in the {} fiber ({})",
        distinguished.label(),
        entry.left.name,
        distinguished_in_left,
        entry.right.name,
        distinguished_in_right
    ));
    steps.push(format!(
        "(e) it is one of {ramified_members_below_bound} member(s) ramified at {witness_prime} with support below {enumeration_bound}",
    ));

    let mut notes = Vec::new();
    if degree % 2 == 0 {
        notes.push(
            "geometric readings of even-degree members additionally require \
             unramifiedness at the real places"
                .to_string(),
        );
    }

    Ok(ScenarioReport {
        entry: entry.name.clone(),
        pair,
        left_fiber,
        right_fiber,
        comparison,
        witness_prime,
        distinguished,
        distinguished_in_left,
        distinguished_in_right,
        ramified_members_below_bound,
        enumeration_bound,
        steps,
        notes,
    })
}

/// Sanity check that fibers separate classes over one and the same field:
/// if the fibers of `a1` and `a2` agree and some rational class below the
/// bound lies in both, the classes must be equal, since that one class
/// restricts to each of them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RigidityReport {
    pub fibers_equal: bool,
    pub classes_equal: bool,
    pub common_member: Option<BrauerClass>,
    /// False exactly when the reports above contradict rigidity.
    pub consistent: bool,
}

pub fn same_field_rigidity_check(
    a1: &BrauerClass,
    a2: &BrauerClass,
    profile: &FieldProfile,
    bound: u64,
) -> Result<RigidityReport, ConstructError> {
    let classes_equal = equal(a1, a2)?;
    let fiber1 = fiber_description(a1, profile, a1.degree())?;
    let fiber2 = fiber_description(a2, profile, a2.degree())?;
    let fibers_equal = compare(&fiber1, &fiber2)?.verdict == Verdict::Equal;
    let mut common_member = None;
    for b in enumerate(&fiber1, bound, usize::MAX)? {
        if member(&b, a2, profile)? {
            common_member = Some(b);
            break;
        }
    }
    let consistent = (!fibers_equal || common_member.is_none() || classes_equal)
        && (!classes_equal || fibers_equal);
    Ok(RigidityReport { fibers_equal, classes_equal, common_member, consistent })
}
