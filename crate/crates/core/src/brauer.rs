//! Brauer classes of central simple algebras, stored as local invariants.
//!
//! A degree-`d` central simple algebra over a field `K` is recorded by its
//! class: one invariant in Q/Z per place of `K`, almost all zero. Finite
//! invariants are keyed by `(q, place index)` against a [`FieldProfile`];
//! archimedean invariants sit in a vector with the real places first. A
//! class is realizable exactly when its support is finite (structural here),
//! every order divides `d`, real entries are 0 or 1/2, complex entries are
//! 0, and the invariants sum to zero in Q/Z; [`BrauerClass::validate`]
//! checks all of that against a profile.
//!
//! The map that everything else leans on is [`restrict`]: extending scalars
//! from Q to `K` multiplies the invariant at each place over `q` by the
//! local degree of that place. Restriction is a homomorphism with respect to
//! [`tensor`], which adds invariants pointwise.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::FieldProfile;
use crate::invariants::{lcm, InvariantValue, MAX_DEGREE};

/// Identifies one place of a field, matching the profile's indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlaceId {
    Finite { q: u64, place: usize },
    Arch { index: usize },
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceId::Finite { q, place } => write!(f, "{q}#{place}"),
            PlaceId::Arch { index } => write!(f, "arch#{index}"),
        }
    }
}

/// Errors for class-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrauerError {
    #[error("classes live over different fields: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("classes have different degrees: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("class over {field} is supported at prime {q}, which the profile does not cover")]
    ProfileGap { field: String, q: u64 },
    #[error("operation needs a class over Q, got one over {field}")]
    NotRational { field: String },
    #[error("degree {degree} is outside the supported range 1..={max}", max = MAX_DEGREE)]
    InvalidDegree { degree: u32 },
}

/// A Brauer class with its degree bookkeeping. Zero invariants are never
/// stored, so structural equality is class equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ClassDoc", into = "ClassDoc")]
pub struct BrauerClass {
    field: String,
    degree: u32,
    finite: BTreeMap<(u64, usize), InvariantValue>,
    arch: Vec<InvariantValue>,
}

/// Wire form of a class.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ClassDoc {
    field: String,
    degree: u32,
    invariants: Vec<InvariantEntry>,
    arch: Vec<InvariantValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InvariantEntry {
    q: u64,
    place: usize,
    #[serde(flatten)]
    value: InvariantValue,
}

impl TryFrom<ClassDoc> for BrauerClass {
    type Error = BrauerError;

    fn try_from(doc: ClassDoc) -> Result<Self, BrauerError> {
        let mut class = BrauerClass::zero(&doc.field, doc.degree, doc.arch.len())?;
        class.arch = doc.arch;
        for entry in doc.invariants {
            class.set_finite(entry.q, entry.place, entry.value);
        }
        Ok(class)
    }
}

impl From<BrauerClass> for ClassDoc {
    fn from(class: BrauerClass) -> Self {
        ClassDoc {
            invariants: class
                .finite
                .iter()
                .map(|(&(q, place), &value)| InvariantEntry { q, place, value })
                .collect(),
            field: class.field,
            degree: class.degree,
            arch: class.arch,
        }
    }
}

impl BrauerClass {
    /// The class of the degree-`degree` matrix algebra: all invariants zero.
    pub fn zero(field: &str, degree: u32, arch_places: usize) -> Result<Self, BrauerError> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(BrauerError::InvalidDegree { degree });
        }
        Ok(BrauerClass {
            field: field.to_string(),
            degree,
            finite: BTreeMap::new(),
            arch: vec![InvariantValue::ZERO; arch_places],
        })
    }

    /// All-zero class over a profiled field, with the right number of
    /// archimedean slots.
    pub fn zero_over(profile: &FieldProfile, degree: u32) -> Result<Self, BrauerError> {
        Self::zero(&profile.name, degree, profile.arch_places())
    }

    /// A class over Q: one archimedean slot, finite invariants keyed by
    /// prime alone (the unique place index is 0).
    pub fn rational<I>(degree: u32, finite: I, arch: InvariantValue) -> Result<Self, BrauerError>
    where
        I: IntoIterator<Item = (u64, InvariantValue)>,
    {
        let mut class = Self::zero("Q", degree, 1)?;
        class.arch[0] = arch;
        for (q, value) in finite {
            class.set_finite(q, 0, value);
        }
        Ok(class)
    }

    pub fn field(&self) -> &str {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Sets the invariant at `(q, place)`; zero values erase the entry so
    /// the stored support stays exactly the ramified places.
    pub fn set_finite(&mut self, q: u64, place: usize, value: InvariantValue) {
        if value.is_zero() {
            self.finite.remove(&(q, place));
        } else {
            self.finite.insert((q, place), value);
        }
    }

    pub fn set_arch(&mut self, index: usize, value: InvariantValue) {
        self.arch[index] = value;
    }

    pub fn finite_invariant(&self, q: u64, place: usize) -> InvariantValue {
        self.finite.get(&(q, place)).copied().unwrap_or(InvariantValue::ZERO)
    }

    pub fn arch_invariants(&self) -> &[InvariantValue] {
        &self.arch
    }

    /// For a class over Q, its single archimedean invariant.
    pub fn rational_arch_invariant(&self) -> InvariantValue {
        self.arch.first().copied().unwrap_or(InvariantValue::ZERO)
    }

    /// Nonzero finite invariants in key order.
    pub fn support(&self) -> impl Iterator<Item = (u64, usize, InvariantValue)> + '_ {
        self.finite.iter().map(|(&(q, place), &v)| (q, place, v))
    }

    /// Primes where some finite invariant is nonzero.
    pub fn support_primes(&self) -> Vec<u64> {
        let mut primes: Vec<u64> = self.finite.keys().map(|&(q, _)| q).collect();
        primes.dedup();
        primes
    }

    /// Every place with a nonzero invariant, finite then archimedean.
    pub fn ramification_set(&self) -> Vec<PlaceId> {
        let mut places: Vec<PlaceId> = self
            .finite
            .keys()
            .map(|&(q, place)| PlaceId::Finite { q, place })
            .collect();
        for (index, v) in self.arch.iter().enumerate() {
            if !v.is_zero() {
                places.push(PlaceId::Arch { index });
            }
        }
        places
    }

    /// Sum of all invariants in Q/Z; zero is the reciprocity condition.
    pub fn invariant_sum(&self) -> InvariantValue {
        self.finite.values().copied().chain(self.arch.iter().copied()).sum()
    }

    /// Index of the class: the least common multiple of the orders of its
    /// invariants. Equals 1 exactly for the split (matrix algebra) class.
    pub fn index(&self) -> u64 {
        self.finite
            .values()
            .chain(self.arch.iter())
            .map(|v| v.order())
            .fold(1, lcm)
    }

    /// True when the algebra of this degree is a division algebra, i.e. the
    /// index equals the degree.
    pub fn is_division(&self) -> bool {
        self.index() == u64::from(self.degree)
    }

    /// Compact canonical rendering, used as an identifier in reports.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self
            .finite
            .iter()
            .map(|(&(q, place), v)| format!("{q}#{place}={v}"))
            .collect();
        for (index, v) in self.arch.iter().enumerate() {
            if !v.is_zero() {
                parts.push(format!("arch#{index}={v}"));
            }
        }
        format!("{}[d={}]{{{}}}", self.field, self.degree, parts.join(","))
    }

    /// Validates the class against its field profile. An empty report means
    /// the invariants describe a realizable central simple algebra.
    pub fn validate(&self, profile: &FieldProfile) -> Vec<ClassViolation> {
        let mut report = Vec::new();
        let mut push = |place: Option<PlaceId>, message: String| {
            report.push(ClassViolation { place, message })
        };
        if self.field != profile.name {
            push(
                None,
                format!("class is over {} but the profile is {}", self.field, profile.name),
            );
            return report;
        }
        for (&(q, place), value) in &self.finite {
            let id = PlaceId::Finite { q, place };
            match profile.places_over(q) {
                Err(_) => {
                    push(Some(id), "prime is not profiled and no class covers it".into());
                    continue;
                }
                Ok(places) => {
                    if place >= places.len() {
                        push(
                            Some(id),
                            format!("place index {place} out of range ({} places)", places.len()),
                        );
                    }
                }
            }
            if !value.order_divides(self.degree) {
                push(
                    Some(id),
                    format!("invariant {value} has order {} not dividing degree {}", value.order(), self.degree),
                );
            }
        }
        if self.arch.len() != profile.arch_places() {
            push(
                None,
                format!(
                    "{} archimedean invariants but the profile has {} archimedean places",
                    self.arch.len(),
                    profile.arch_places()
                ),
            );
        }
        for (index, value) in self.arch.iter().enumerate() {
            let id = PlaceId::Arch { index };
            let real = index < profile.signature.real as usize;
            if real {
                if !(value.is_zero() || *value == InvariantValue::HALF) {
                    push(Some(id), format!("real place invariant must be 0 or 1/2, got {value}"));
                } else if !value.order_divides(self.degree) {
                    push(
                        Some(id),
                        format!("invariant {value} has order 2 not dividing degree {}", self.degree),
                    );
                }
            } else if !value.is_zero() {
                push(Some(id), format!("complex place invariant must be 0, got {value}"));
            }
        }
        let total = self.invariant_sum();
        if !total.is_zero() {
            push(None, format!("invariants sum to {total}, not an integer"));
        }
        report
    }
}

/// One defect found by [`BrauerClass::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassViolation {
    pub place: Option<PlaceId>,
    pub message: String,
}

impl fmt::Display for ClassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.place {
            Some(place) => write!(f, "place {}: {}", place, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Restriction of scalars: maps a class over Q to a class over the profiled
/// field by scaling the invariant at each place by its local degree. At a
/// real place the local degree is 1, at a complex place 2.
pub fn restrict(b: &BrauerClass, profile: &FieldProfile) -> Result<BrauerClass, BrauerError> {
    if b.field != "Q" {
        return Err(BrauerError::NotRational { field: b.field.clone() });
    }
    let mut out = BrauerClass::zero_over(profile, b.degree)?;
    for (q, _, value) in b.support() {
        let places = profile
            .places_over(q)
            .map_err(|_| BrauerError::ProfileGap { field: profile.name.clone(), q })?;
        for (index, place) in places.iter().enumerate() {
            out.set_finite(q, index, value.scale(place.local_degree()));
        }
    }
    let arch = b.rational_arch_invariant();
    let real_places = profile.signature.real as usize;
    for index in 0..profile.arch_places() {
        let scaled = if index < real_places { arch } else { arch.scale(2) };
        out.set_arch(index, scaled);
    }
    Ok(out)
}

/// Tensor product of classes over the same field: invariants add pointwise.
/// Degrees must agree; the common degree is kept.
pub fn tensor(a: &BrauerClass, b: &BrauerClass) -> Result<BrauerClass, BrauerError> {
    if a.field != b.field {
        return Err(BrauerError::FieldMismatch { left: a.field.clone(), right: b.field.clone() });
    }
    if a.degree != b.degree {
        return Err(BrauerError::DegreeMismatch { left: a.degree, right: b.degree });
    }
    if a.arch.len() != b.arch.len() {
        return Err(BrauerError::FieldMismatch { left: a.field.clone(), right: b.field.clone() });
    }
    let mut out = a.clone();
    for (q, place, value) in b.support() {
        out.set_finite(q, place, out.finite_invariant(q, place) + value);
    }
    for (index, value) in b.arch.iter().enumerate() {
        out.arch[index] = out.arch[index] + *value;
    }
    Ok(out)
}

/// Equality of classes, guarded by the field and degree bookkeeping.
pub fn equal(a: &BrauerClass, b: &BrauerClass) -> Result<bool, BrauerError> {
    if a.field != b.field {
        return Err(BrauerError::FieldMismatch { left: a.field.clone(), right: b.field.clone() });
    }
    if a.degree != b.degree {
        return Err(BrauerError::DegreeMismatch { left: a.degree, right: b.degree });
    }
    Ok(a.finite == b.finite && a.arch == b.arch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{ArchSignature, PrimeDecomposition};

    fn v(num: i64, den: u64) -> InvariantValue {
        InvariantValue::new(num, den).unwrap()
    }

    fn profile_k8() -> FieldProfile {
        FieldProfile::new(
            "K8",
            8,
            ArchSignature::new(8, 0),
            vec![PrimeDecomposition::new(2, vec![(2, 1), (2, 1), (2, 1), (2, 1)])],
            vec![],
        )
    }

    fn profile_k8p() -> FieldProfile {
        FieldProfile::new(
            "K8p",
            8,
            ArchSignature::new(8, 0),
            vec![PrimeDecomposition::new(2, vec![(1, 1), (1, 1), (2, 1), (4, 1)])],
            vec![],
        )
    }

    #[test]
    fn restriction_scales_by_local_degree() {
        let b = BrauerClass::rational(2, [(2, v(1, 2))], InvariantValue::ZERO).unwrap();
        let to_k8 = restrict(&b, &profile_k8()).unwrap();
        // Every local degree at 2 is even, so the class splits everywhere.
        assert!(to_k8.support().next().is_none());

        let to_k8p = restrict(&b, &profile_k8p()).unwrap();
        let got: Vec<InvariantValue> =
            (0..4).map(|i| to_k8p.finite_invariant(2, i)).collect();
        assert_eq!(got, vec![v(1, 2), v(1, 2), InvariantValue::ZERO, InvariantValue::ZERO]);
    }

    #[test]
    fn restriction_needs_profiled_support() {
        let b = BrauerClass::rational(2, [(3, v(1, 2))], InvariantValue::ZERO).unwrap();
        assert_eq!(
            restrict(&b, &profile_k8()),
            Err(BrauerError::ProfileGap { field: "K8".into(), q: 3 })
        );
    }

    #[test]
    fn restriction_handles_archimedean_places() {
        let mixed = FieldProfile::new("M", 4, ArchSignature::new(2, 1), vec![], vec![]);
        let b = BrauerClass::rational(2, [], v(1, 2)).unwrap();
        let r = restrict(&b, &mixed).unwrap();
        // Real places keep the invariant, the complex place kills it.
        assert_eq!(r.arch_invariants(), &[v(1, 2), v(1, 2), InvariantValue::ZERO]);
    }

    #[test]
    fn tensor_adds_invariants() {
        let a = BrauerClass::rational(2, [(2, v(1, 2)), (3, v(1, 2))], InvariantValue::ZERO).unwrap();
        let b = BrauerClass::rational(2, [(3, v(1, 2)), (5, v(1, 2))], InvariantValue::ZERO).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.finite_invariant(2, 0), v(1, 2));
        assert_eq!(ab.finite_invariant(3, 0), InvariantValue::ZERO);
        assert_eq!(ab.finite_invariant(5, 0), v(1, 2));
        assert_eq!(ab.degree(), 2);

        let other = BrauerClass::rational(4, [], InvariantValue::ZERO).unwrap();
        assert_eq!(tensor(&a, &other), Err(BrauerError::DegreeMismatch { left: 2, right: 4 }));
    }

    #[test]
    fn tensor_with_inverse_splits() {
        let a = BrauerClass::rational(3, [(2, v(1, 3)), (5, v(2, 3))], InvariantValue::ZERO).unwrap();
        let mut inv = BrauerClass::zero("Q", 3, 1).unwrap();
        for (q, place, value) in a.support() {
            inv.set_finite(q, place, -value);
        }
        let product = tensor(&a, &inv).unwrap();
        assert!(equal(&product, &BrauerClass::zero("Q", 3, 1).unwrap()).unwrap());
    }

    #[test]
    fn index_and_division() {
        let split = BrauerClass::rational(2, [], InvariantValue::ZERO).unwrap();
        assert_eq!(split.index(), 1);
        assert!(!split.is_division());

        let quat = BrauerClass::rational(2, [(2, v(1, 2)), (3, v(1, 2))], InvariantValue::ZERO).unwrap();
        assert_eq!(quat.index(), 2);
        assert!(quat.is_division());

        let mixed = BrauerClass::rational(6, [(2, v(1, 2)), (3, v(1, 3)), (5, v(1, 6))], InvariantValue::ZERO);
        let mixed = mixed.unwrap();
        assert_eq!(mixed.invariant_sum(), InvariantValue::ZERO);
        assert_eq!(mixed.index(), 6);
    }

    #[test]
    fn validate_accepts_a_realizable_class() {
        let p = FieldProfile::new(
            "T",
            4,
            ArchSignature::new(4, 0),
            vec![
                PrimeDecomposition::new(5, vec![(1, 1), (1, 3)]),
                PrimeDecomposition::new(13, vec![(1, 1), (1, 1), (1, 2)]),
            ],
            vec![],
        );
        let mut a = BrauerClass::zero_over(&p, 2).unwrap();
        a.set_finite(5, 0, v(1, 2));
        a.set_finite(5, 1, v(1, 2));
        a.set_finite(13, 0, v(1, 2));
        a.set_finite(13, 1, v(1, 2));
        assert!(a.validate(&p).is_empty());
        assert_eq!(
            a.ramification_set(),
            vec![
                PlaceId::Finite { q: 5, place: 0 },
                PlaceId::Finite { q: 5, place: 1 },
                PlaceId::Finite { q: 13, place: 0 },
                PlaceId::Finite { q: 13, place: 1 },
            ]
        );
    }

    #[test]
    fn validate_flags_broken_reciprocity_and_arch_rules() {
        let p = FieldProfile::new(
            "T",
            4,
            ArchSignature::new(2, 1),
            vec![PrimeDecomposition::new(5, vec![(1, 1), (1, 3)])],
            vec![],
        );
        let mut a = BrauerClass::zero_over(&p, 2).unwrap();
        a.set_finite(5, 0, v(1, 2));
        let report = a.validate(&p);
        assert!(report.iter().any(|c| c.message.contains("sum to 1/2")), "{report:?}");

        a.set_arch(0, v(1, 3));
        a.set_arch(2, v(1, 2));
        let messages: Vec<String> = a.validate(&p).iter().map(|c| c.to_string()).collect();
        assert!(messages.iter().any(|m| m.contains("real place invariant")), "{messages:?}");
        assert!(messages.iter().any(|m| m.contains("complex place invariant")), "{messages:?}");
    }

    #[test]
    fn validate_flags_order_and_coverage() {
        let p = profile_k8();
        let mut a = BrauerClass::zero_over(&p, 2).unwrap();
        a.set_finite(2, 0, v(1, 3));
        a.set_finite(2, 9, v(1, 2));
        a.set_finite(11, 0, v(1, 2));
        let messages: Vec<String> = a.validate(&p).iter().map(|c| c.to_string()).collect();
        assert!(messages.iter().any(|m| m.contains("order 3 not dividing degree 2")), "{messages:?}");
        assert!(messages.iter().any(|m| m.contains("out of range")), "{messages:?}");
        assert!(messages.iter().any(|m| m.contains("not profiled")), "{messages:?}");
    }

    #[test]
    fn equality_is_guarded() {
        let a = BrauerClass::rational(2, [(2, v(1, 2)), (3, v(1, 2))], InvariantValue::ZERO).unwrap();
        let b = BrauerClass::rational(2, [(2, v(1, 2)), (3, v(1, 2))], InvariantValue::ZERO).unwrap();
        assert!(equal(&a, &b).unwrap());
        let c = BrauerClass::zero("K", 2, 0).unwrap();
        assert!(matches!(equal(&a, &c), Err(BrauerError::FieldMismatch { .. })));
    }

    #[test]
    fn class_round_trips_through_json() {
        let a = BrauerClass::rational(2, [(2, v(1, 2)), (7, v(1, 2))], InvariantValue::ZERO).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: BrauerClass = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        // Emitted entries carry q, place and the fraction fields inline.
        assert!(text.contains(r#""q":2"#) && text.contains(r#""place":0"#), "{text}");

        // Non-canonical or zero entries normalize away on input.
        let doc = r#"{"field":"Q","degree":2,"invariants":[{"q":3,"place":0,"num":2,"den":4},{"q":5,"place":0,"num":0,"den":7}],"arch":[{"num":0,"den":1}]}"#;
        let parsed: BrauerClass = serde_json::from_str(doc).unwrap();
        assert_eq!(parsed.finite_invariant(3, 0), v(1, 2));
        assert_eq!(parsed.support().count(), 1);
    }

    #[test]
    fn labels_are_deterministic() {
        let a = BrauerClass::rational(2, [(5, v(1, 2)), (13, v(1, 2))], v(1, 2)).unwrap();
        assert_eq!(a.label(), "Q[d=2]{5#0=1/2,13#0=1/2,arch#0=1/2}");
    }
}
