//! Number fields as local splitting data.
//!
//! A field never appears here as polynomial arithmetic. A [`FieldProfile`]
//! records everything the Brauer-class computations consume: the degree over
//! Q, the archimedean signature, how finitely many declared primes decompose
//! into places `(e, f)`, and optionally some Cebotarev classes, which assert
//! that infinitely many undeclared primes share a given splitting type.
//! Primes absent from a profile have unknown splitting; operations that need
//! splitting data there must either be handed a Cebotarev class for the
//! prime (see [`FieldProfile::assuming`]) or fail with
//! [`FieldError::UnprofiledPrime`].
//!
//! A [`PlaceBijection`] is a certificate matching the places of two profiles
//! prime by prime. [`check_local_equivalence`] verifies that it preserves
//! both ramification index and inertial degree; [`check_arithmetic_equivalence`]
//! only inertial degree. Local equivalence implies arithmetic equivalence,
//! and the converse fails: the shipped `perlis8` catalog pair is
//! arithmetically equivalent but has no (e, f)-preserving matching at q = 2.

pub mod catalog;

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One place of a field lying over a rational prime: ramification index `e`
/// and inertial degree `f`. The local degree of the completion is `e * f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocalPlace {
    pub e: u32,
    pub f: u32,
}

impl LocalPlace {
    pub fn new(e: u32, f: u32) -> Self {
        LocalPlace { e, f }
    }

    pub fn local_degree(&self) -> u64 {
        u64::from(self.e) * u64::from(self.f)
    }

    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }
}

impl fmt::Display for LocalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.e, self.f)
    }
}

/// The declared decomposition of one rational prime into places.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeDecomposition {
    pub q: u64,
    pub places: Vec<LocalPlace>,
}

impl PrimeDecomposition {
    pub fn new(q: u64, places: Vec<(u32, u32)>) -> Self {
        PrimeDecomposition {
            q,
            places: places.into_iter().map(|(e, f)| LocalPlace::new(e, f)).collect(),
        }
    }

    /// Sum of local degrees, which must equal the field degree.
    pub fn degree_sum(&self) -> u64 {
        self.places.iter().map(LocalPlace::local_degree).sum()
    }

    pub fn is_ramified(&self) -> bool {
        self.places.iter().any(LocalPlace::is_ramified)
    }
}

/// Archimedean signature: `real + 2 * complex` must equal the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchSignature {
    pub real: u32,
    pub complex: u32,
}

impl ArchSignature {
    pub fn new(real: u32, complex: u32) -> Self {
        ArchSignature { real, complex }
    }

    /// Number of archimedean places (real places first by convention).
    pub fn places(&self) -> usize {
        self.real as usize + self.complex as usize
    }
}

/// A declared family of primes sharing one splitting type. `infinite` records
/// whether the family is asserted to be infinite; that assertion is input
/// data (a density statement about the field), never something this crate
/// derives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CebotarevClass {
    pub label: String,
    pub infinite: bool,
    pub splitting_type: Vec<LocalPlace>,
}

impl CebotarevClass {
    pub fn new(label: &str, infinite: bool, splitting_type: Vec<(u32, u32)>) -> Self {
        CebotarevClass {
            label: label.to_string(),
            infinite,
            splitting_type: splitting_type
                .into_iter()
                .map(|(e, f)| LocalPlace::new(e, f))
                .collect(),
        }
    }
}

/// A number field described by its local data. See the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ProfileDoc", into = "ProfileDoc")]
pub struct FieldProfile {
    pub name: String,
    pub degree: u32,
    pub signature: ArchSignature,
    pub decompositions: Vec<PrimeDecomposition>,
    pub cebotarev_classes: Vec<CebotarevClass>,
    /// Bookkeeping: the set of profiled primes with a ramified place. Kept
    /// stored (rather than always derived) so validation can catch profiles
    /// assembled with stale data; [`FieldProfile::new`] computes it.
    pub ramified_primes: BTreeSet<u64>,
}

/// Wire form of a profile. `ramified_primes` is derived data and not part
/// of the interchange schema; it is recomputed on deserialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProfileDoc {
    name: String,
    degree: u32,
    signature: ArchSignature,
    primes: Vec<PrimeDecomposition>,
    #[serde(default)]
    cebotarev_classes: Vec<CebotarevClass>,
}

impl From<ProfileDoc> for FieldProfile {
    fn from(doc: ProfileDoc) -> Self {
        FieldProfile::new(
            &doc.name,
            doc.degree,
            doc.signature,
            doc.primes,
            doc.cebotarev_classes,
        )
    }
}

impl From<FieldProfile> for ProfileDoc {
    fn from(p: FieldProfile) -> Self {
        ProfileDoc {
            name: p.name,
            degree: p.degree,
            signature: p.signature,
            primes: p.decompositions,
            cebotarev_classes: p.cebotarev_classes,
        }
    }
}

/// Errors for profile lookups and catalog access.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The prime is not declared in the profile and no class was supplied.
    #[error("prime {q} is not profiled for field {field}")]
    UnprofiledPrime { field: String, q: u64 },
    /// Catalog lookup failed.
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    /// A class-membership declaration collides with profiled data.
    #[error("prime {q} is already profiled for field {field}; cannot assume a class for it")]
    AlreadyProfiled { field: String, q: u64 },
}

/// One defect found by [`FieldProfile::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileViolation {
    /// Prime the defect concerns, if any; None for field-level defects.
    pub q: Option<u64>,
    pub message: String,
}

impl fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            Some(q) => write!(f, "prime {}: {}", q, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn violation(q: Option<u64>, message: String) -> ProfileViolation {
    ProfileViolation { q, message }
}

impl FieldProfile {
    /// Assembles a profile, deriving the ramified-prime bookkeeping.
    pub fn new(
        name: &str,
        degree: u32,
        signature: ArchSignature,
        decompositions: Vec<PrimeDecomposition>,
        cebotarev_classes: Vec<CebotarevClass>,
    ) -> Self {
        let ramified_primes = decompositions
            .iter()
            .filter(|d| d.is_ramified())
            .map(|d| d.q)
            .collect();
        FieldProfile {
            name: name.to_string(),
            degree,
            signature,
            decompositions,
            cebotarev_classes,
            ramified_primes,
        }
    }

    /// The rational base field: degree 1, one real place, every prime
    /// implicitly split as the single place (1, 1).
    pub fn rationals() -> Self {
        FieldProfile::new("Q", 1, ArchSignature::new(1, 0), Vec::new(), Vec::new())
    }

    pub fn is_rationals(&self) -> bool {
        self.degree == 1
    }

    /// Checks the profile's internal consistency. An empty report means the
    /// profile is valid.
    pub fn validate(&self) -> Vec<ProfileViolation> {
        let mut report = Vec::new();
        if self.degree == 0 {
            report.push(violation(None, format!("field {}: degree must be positive", self.name)));
        }
        let sig = u64::from(self.signature.real) + 2 * u64::from(self.signature.complex);
        if sig != u64::from(self.degree) {
            report.push(violation(
                None,
                format!(
                    "field {}: signature {} + 2*{} = {} does not match degree {}",
                    self.name, self.signature.real, self.signature.complex, sig, self.degree
                ),
            ));
        }
        let mut seen = BTreeSet::new();
        for dec in &self.decompositions {
            if !seen.insert(dec.q) {
                report.push(violation(Some(dec.q), "prime is profiled more than once".into()));
            }
            if dec.places.is_empty() {
                report.push(violation(Some(dec.q), "decomposition has no places".into()));
            }
            for place in &dec.places {
                if place.e == 0 || place.f == 0 {
                    report.push(violation(
                        Some(dec.q),
                        format!("place {place} has a zero ramification index or inertial degree"),
                    ));
                }
            }
            let sum = dec.degree_sum();
            if sum != u64::from(self.degree) {
                report.push(violation(
                    Some(dec.q),
                    format!("local degrees sum to {} but the field degree is {}", sum, self.degree),
                ));
            }
        }
        let derived: BTreeSet<u64> = self
            .decompositions
            .iter()
            .filter(|d| d.is_ramified())
            .map(|d| d.q)
            .collect();
        if derived != self.ramified_primes {
            report.push(violation(
                None,
                format!(
                    "ramified-prime bookkeeping {:?} disagrees with decompositions {:?}",
                    self.ramified_primes, derived
                ),
            ));
        }
        let mut class_labels = BTreeSet::new();
        for class in &self.cebotarev_classes {
            if !class_labels.insert(class.label.clone()) {
                report.push(violation(
                    None,
                    format!("cebotarev class label {:?} is declared more than once", class.label),
                ));
            }
            let sum: u64 = class.splitting_type.iter().map(LocalPlace::local_degree).sum();
            if sum != u64::from(self.degree) {
                report.push(violation(
                    None,
                    format!(
                        "cebotarev class {:?}: local degrees sum to {} but the field degree is {}",
                        class.label, sum, self.degree
                    ),
                ));
            }
        }
        report
    }

    /// The declared decomposition of `q`, if profiled.
    pub fn decomposition(&self, q: u64) -> Option<&PrimeDecomposition> {
        self.decompositions.iter().find(|d| d.q == q)
    }

    /// The places over `q`. For the rational base field every prime has the
    /// single place (1, 1); for other fields the prime must be profiled.
    pub fn places_over(&self, q: u64) -> Result<Cow<'_, [LocalPlace]>, FieldError> {
        if let Some(dec) = self.decomposition(q) {
            return Ok(Cow::Borrowed(&dec.places));
        }
        if self.is_rationals() {
            return Ok(Cow::Owned(vec![LocalPlace::new(1, 1)]));
        }
        Err(FieldError::UnprofiledPrime { field: self.name.clone(), q })
    }

    /// Local degrees `e * f` of the places over `q`, in profile order.
    pub fn local_degrees(&self, q: u64) -> Result<Vec<u64>, FieldError> {
        Ok(self.places_over(q)?.iter().map(LocalPlace::local_degree).collect())
    }

    pub fn is_profiled(&self, q: u64) -> bool {
        self.decomposition(q).is_some()
    }

    pub fn is_ramified(&self, q: u64) -> bool {
        self.ramified_primes.contains(&q)
    }

    pub fn arch_places(&self) -> usize {
        self.signature.places()
    }

    /// Looks up a declared class by label.
    pub fn cebotarev_class(&self, label: &str) -> Option<&CebotarevClass> {
        self.cebotarev_classes.iter().find(|c| c.label == label)
    }

    /// Returns a profile extended by the declaration that each given prime
    /// splits according to the given class. This is how a Cebotarev class is
    /// consulted for a concrete prime: the caller asserts membership, and the
    /// resulting profile carries the splitting data explicitly. Fails if a
    /// prime is already profiled.
    pub fn assuming(
        &self,
        memberships: &[(u64, &CebotarevClass)],
    ) -> Result<FieldProfile, FieldError> {
        let mut decompositions = self.decompositions.clone();
        for &(q, class) in memberships {
            if self.is_profiled(q) {
                return Err(FieldError::AlreadyProfiled { field: self.name.clone(), q });
            }
            decompositions.push(PrimeDecomposition {
                q,
                places: class.splitting_type.clone(),
            });
        }
        decompositions.sort_by_key(|d| d.q);
        Ok(FieldProfile::new(
            &self.name,
            self.degree,
            self.signature,
            decompositions,
            self.cebotarev_classes.clone(),
        ))
    }
}

/// A matching of places between two profiles, prime by prime: for each
/// shared profiled prime `q`, `pairs[q][i]` is the index of the target place
/// matched with source place `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceBijection {
    pub source: String,
    pub target: String,
    pub pairs: BTreeMap<u64, Vec<usize>>,
}

impl PlaceBijection {
    /// The identity matching on every prime profiled by both fields. Only
    /// meaningful when matched primes have equally many places; the
    /// equivalence checks report any defect.
    pub fn identity(source: &FieldProfile, target: &FieldProfile) -> Self {
        let mut pairs = BTreeMap::new();
        for dec in &source.decompositions {
            if target.is_profiled(dec.q) {
                pairs.insert(dec.q, (0..dec.places.len()).collect());
            }
        }
        PlaceBijection {
            source: source.name.clone(),
            target: target.name.clone(),
            pairs,
        }
    }
}

/// Which invariants of a place an equivalence check compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceKind {
    /// Matched places must agree in both `e` and `f`; signatures must agree.
    Local,
    /// Matched places must agree in `f` only.
    Arithmetic,
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceKind::Local => write!(f, "local"),
            EquivalenceKind::Arithmetic => write!(f, "arithmetic"),
        }
    }
}

/// One defect found while checking a bijection certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceDefect {
    pub q: Option<u64>,
    pub message: String,
}

impl fmt::Display for EquivalenceDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            Some(q) => write!(f, "prime {}: {}", q, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Result of an equivalence check; `passes()` iff no defects were found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub kind: EquivalenceKind,
    pub source: String,
    pub target: String,
    pub defects: Vec<EquivalenceDefect>,
}

impl EquivalenceReport {
    pub fn passes(&self) -> bool {
        self.defects.is_empty()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} equivalence {} -> {}: {}",
            self.kind,
            self.source,
            self.target,
            if self.passes() { "passes" } else { "fails" }
        )?;
        for defect in &self.defects {
            writeln!(f, "  {defect}")?;
        }
        Ok(())
    }
}

fn check_equivalence(
    kind: EquivalenceKind,
    source: &FieldProfile,
    target: &FieldProfile,
    phi: &PlaceBijection,
) -> EquivalenceReport {
    let mut defects = Vec::new();
    let mut push = |q: Option<u64>, message: String| defects.push(EquivalenceDefect { q, message });

    if phi.source != source.name || phi.target != target.name {
        push(
            None,
            format!(
                "bijection connects {} -> {} but the profiles are {} -> {}",
                phi.source, phi.target, source.name, target.name
            ),
        );
    }
    if source.degree != target.degree {
        push(None, format!("degrees differ: {} vs {}", source.degree, target.degree));
    }
    if kind == EquivalenceKind::Local && source.signature != target.signature {
        push(
            None,
            format!(
                "signatures differ: ({},{}) vs ({},{})",
                source.signature.real,
                source.signature.complex,
                target.signature.real,
                target.signature.complex
            ),
        );
    }

    for dec in &source.decompositions {
        let q = dec.q;
        let Some(target_dec) = target.decomposition(q) else {
            push(Some(q), format!("profiled for {} but not for {}", source.name, target.name));
            continue;
        };
        let Some(map) = phi.pairs.get(&q) else {
            push(Some(q), "shared profiled prime is missing from the bijection".into());
            continue;
        };
        if map.len() != dec.places.len() {
            push(
                Some(q),
                format!(
                    "bijection lists {} source places but the profile has {}",
                    map.len(),
                    dec.places.len()
                ),
            );
            continue;
        }
        if dec.places.len() != target_dec.places.len() {
            push(
                Some(q),
                format!(
                    "place counts differ: {} vs {}",
                    dec.places.len(),
                    target_dec.places.len()
                ),
            );
            continue;
        }
        let mut hit = vec![false; target_dec.places.len()];
        for (i, &j) in map.iter().enumerate() {
            if j >= target_dec.places.len() {
                push(Some(q), format!("target place index {j} is out of range"));
                continue;
            }
            if std::mem::replace(&mut hit[j], true) {
                push(Some(q), format!("target place index {j} is matched twice"));
                continue;
            }
            let src = dec.places[i];
            let dst = target_dec.places[j];
            let agrees = match kind {
                EquivalenceKind::Local => src == dst,
                EquivalenceKind::Arithmetic => src.f == dst.f,
            };
            if !agrees {
                push(
                    Some(q),
                    format!("matched places disagree: source #{i} = {src}, target #{j} = {dst}"),
                );
            }
        }
    }
    // Primes profiled only on the target side are also outside the
    // certificate's reach; report them so a pass means full coverage.
    for dec in &target.decompositions {
        if !source.is_profiled(dec.q) {
            push(
                Some(dec.q),
                format!("profiled for {} but not for {}", target.name, source.name),
            );
        }
    }

    EquivalenceReport {
        kind,
        source: source.name.clone(),
        target: target.name.clone(),
        defects,
    }
}

/// Checks that `phi` certifies local equivalence of the two profiles:
/// every matched pair of places agrees in `e` and `f`, and the global
/// degree and signature data agree.
pub fn check_local_equivalence(
    source: &FieldProfile,
    target: &FieldProfile,
    phi: &PlaceBijection,
) -> EquivalenceReport {
    check_equivalence(EquivalenceKind::Local, source, target, phi)
}

/// Checks that `phi` certifies arithmetic equivalence: matched places agree
/// in inertial degree `f`, ramification unconstrained.
pub fn check_arithmetic_equivalence(
    source: &FieldProfile,
    target: &FieldProfile,
    phi: &PlaceBijection,
) -> EquivalenceReport {
    check_equivalence(EquivalenceKind::Arithmetic, source, target, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree8_single_prime() -> FieldProfile {
        FieldProfile::new(
            "K8",
            8,
            ArchSignature::new(8, 0),
            vec![PrimeDecomposition::new(2, vec![(2, 1), (2, 1), (2, 1), (2, 1)])],
            vec![],
        )
    }

    #[test]
    fn validates_consistent_profile() {
        let p = degree8_single_prime();
        assert!(p.validate().is_empty());
        assert_eq!(p.ramified_primes, BTreeSet::from([2]));
    }

    #[test]
    fn flags_degree_deficit() {
        let p = FieldProfile::new(
            "bad",
            4,
            ArchSignature::new(4, 0),
            vec![PrimeDecomposition::new(3, vec![(1, 1), (1, 2)])],
            vec![],
        );
        let report = p.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].q, Some(3));
        assert!(report[0].message.contains("sum to 3"), "{}", report[0].message);
        assert!(report[0].message.contains('4'));
    }

    #[test]
    fn flags_signature_mismatch() {
        let p = FieldProfile::new("bad", 4, ArchSignature::new(3, 1), vec![], vec![]);
        let report = p.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("signature"));
    }

    #[test]
    fn flags_stale_ramified_bookkeeping() {
        let mut p = degree8_single_prime();
        p.ramified_primes.clear();
        let report = p.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("bookkeeping"));
    }

    #[test]
    fn flags_duplicate_primes_and_empty_places() {
        let p = FieldProfile::new(
            "bad",
            2,
            ArchSignature::new(2, 0),
            vec![
                PrimeDecomposition::new(5, vec![(1, 2)]),
                PrimeDecomposition::new(5, vec![(1, 2)]),
                PrimeDecomposition { q: 7, places: vec![] },
            ],
            vec![],
        );
        let messages: Vec<String> = p.validate().iter().map(|v| v.to_string()).collect();
        assert!(messages.iter().any(|m| m.contains("more than once")), "{messages:?}");
        assert!(messages.iter().any(|m| m.contains("no places")), "{messages:?}");
        // The empty decomposition also misses the degree sum.
        assert!(messages.iter().any(|m| m.contains("sum to 0")), "{messages:?}");
    }

    #[test]
    fn local_degrees_in_profile_order() {
        let p = FieldProfile::new(
            "K8p",
            8,
            ArchSignature::new(8, 0),
            vec![PrimeDecomposition::new(2, vec![(1, 1), (1, 1), (2, 1), (4, 1)])],
            vec![],
        );
        assert_eq!(p.local_degrees(2).unwrap(), vec![1, 1, 2, 4]);
        assert_eq!(degree8_single_prime().local_degrees(2).unwrap(), vec![2, 2, 2, 2]);
        assert_eq!(
            p.local_degrees(3),
            Err(FieldError::UnprofiledPrime { field: "K8p".into(), q: 3 })
        );
    }

    #[test]
    fn rationals_split_every_prime_trivially() {
        let q = FieldProfile::rationals();
        assert!(q.validate().is_empty());
        assert_eq!(q.local_degrees(2).unwrap(), vec![1]);
        assert_eq!(q.local_degrees(97).unwrap(), vec![1]);
    }

    #[test]
    fn assuming_extends_with_class_data() {
        let mut p = degree8_single_prime();
        p.cebotarev_classes.push(CebotarevClass::new(
            "all-f-even",
            true,
            vec![(1, 2), (1, 2), (1, 2), (1, 2)],
        ));
        let class = p.cebotarev_class("all-f-even").unwrap().clone();
        let extended = p.assuming(&[(53, &class)]).unwrap();
        assert_eq!(extended.local_degrees(53).unwrap(), vec![2, 2, 2, 2]);
        assert!(extended.validate().is_empty());
        assert_eq!(
            p.assuming(&[(2, &class)]),
            Err(FieldError::AlreadyProfiled { field: "K8".into(), q: 2 })
        );
    }

    fn arith_pair() -> (FieldProfile, FieldProfile, PlaceBijection) {
        let k = degree8_single_prime();
        let k2 = FieldProfile::new(
            "K8p",
            8,
            ArchSignature::new(8, 0),
            vec![PrimeDecomposition::new(2, vec![(1, 1), (1, 1), (2, 1), (4, 1)])],
            vec![],
        );
        let phi = PlaceBijection::identity(&k, &k2);
        (k, k2, phi)
    }

    #[test]
    fn arithmetic_but_not_local() {
        let (k, k2, phi) = arith_pair();
        assert!(check_arithmetic_equivalence(&k, &k2, &phi).passes());
        let local = check_local_equivalence(&k, &k2, &phi);
        assert!(!local.passes());
        assert!(local.defects.iter().all(|d| d.q == Some(2)));
        // (2,1) matched with (1,1), (2,1) with (1,1), (4,1) mismatch too.
        assert_eq!(local.defects.len(), 3);
    }

    #[test]
    fn local_equivalence_of_identical_profiles() {
        let k = degree8_single_prime();
        let mut twin = k.clone();
        twin.name = "K8-twin".into();
        let phi = PlaceBijection::identity(&k, &twin);
        assert!(check_local_equivalence(&k, &twin, &phi).passes());
        assert!(check_arithmetic_equivalence(&k, &twin, &phi).passes());
    }

    #[test]
    fn reports_bijection_defects() {
        let (k, k2, mut phi) = arith_pair();
        phi.pairs.insert(2, vec![0, 0, 1, 2]);
        let report = check_arithmetic_equivalence(&k, &k2, &phi);
        assert!(!report.passes());
        assert!(report.defects.iter().any(|d| d.message.contains("matched twice")));

        phi.pairs.remove(&2);
        let report = check_arithmetic_equivalence(&k, &k2, &phi);
        assert!(report.defects.iter().any(|d| d.message.contains("missing from the bijection")));
    }

    #[test]
    fn reports_one_sided_primes() {
        let (mut k, k2, phi) = arith_pair();
        k.decompositions.push(PrimeDecomposition::new(3, vec![(1, 8)]));
        let report = check_arithmetic_equivalence(&k, &k2, &phi);
        assert!(report.defects.iter().any(|d| d.q == Some(3)));
    }

    #[test]
    fn profile_round_trips_through_json() {
        let mut p = degree8_single_prime();
        p.cebotarev_classes.push(CebotarevClass::new("c", true, vec![(1, 2); 4]));
        let text = serde_json::to_string(&p).unwrap();
        assert!(!text.contains("ramified_primes"));
        let back: FieldProfile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.ramified_primes, BTreeSet::from([2]));
    }
}
