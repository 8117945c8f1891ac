//! Archimedean Lie groups attached to classes, and the geometric meaning
//! of shared fiber members.
//!
//! A degree-`d` class over a profiled field determines one simple factor
//! per archimedean place: a complex place always contributes `SL(d, C)`,
//! a real place contributes `SL(d, R)` when the local invariant vanishes
//! and `SL(d/2, H)` when it is a half (which forces `d` even). Rational
//! classes in the fiber of such a class correspond to commensurability
//! classes of arithmetic submanifolds of the associated locally symmetric
//! space, provided the rational class itself stays unramified at infinity;
//! members ramified at the real place produce no arithmetic subgroup of
//! the split form and are skipped by the report.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brauer::BrauerClass;
use crate::fiber::{member, FiberError};
use crate::fields::FieldProfile;
use crate::invariants::InvariantValue;

/// Errors for geometric interpretation.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("class over {0} is not rational; arithmeticity is a rational question")]
    NotRational(String),
    #[error("class declares {class} archimedean invariants but the profile has {profile} places")]
    ArchMismatch { class: usize, profile: usize },
    #[error("archimedean invariant {value} at place {index} matches no real form of SL in degree {degree}")]
    NoRealForm { index: usize, value: InvariantValue, degree: u32 },
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

/// The three real forms a place can contribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchFactorKind {
    SplitReal,
    Complex,
    Quaternionic,
}

/// One simple factor `SL(size, _)` of the archimedean group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchFactor {
    pub kind: ArchFactorKind,
    pub size: u32,
}

impl fmt::Display for ArchFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            ArchFactorKind::SplitReal => "R",
            ArchFactorKind::Complex => "C",
            ArchFactorKind::Quaternionic => "H",
        };
        write!(f, "SL({},{})", self.size, letter)
    }
}

/// Product of simple factors, one per archimedean place, in profile order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub factors: Vec<ArchFactor>,
}

impl fmt::Display for GroupDescriptor {
    /// Renders with exponents for runs of equal factors, real places
    /// first: `SL(2,R)^2 x SL(2,C)^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut runs: Vec<(ArchFactor, usize)> = Vec::new();
        for &factor in &self.factors {
            match runs.last_mut() {
                Some((last, count)) if *last == factor => *count += 1,
                _ => runs.push((factor, 1)),
            }
        }
        let rendered: Vec<String> = runs
            .into_iter()
            .map(|(factor, count)| {
                if count == 1 {
                    factor.to_string()
                } else {
                    format!("{factor}^{count}")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" x "))
    }
}

/// The archimedean group of a class over its profile: one factor per place
/// of the signature, chosen by the local invariant there.
pub fn archimedean_group(
    a: &BrauerClass,
    profile: &FieldProfile,
) -> Result<GroupDescriptor, GeometryError> {
    let places = profile.arch_places();
    if a.arch_invariants().len() != places {
        return Err(GeometryError::ArchMismatch {
            class: a.arch_invariants().len(),
            profile: places,
        });
    }
    let d = a.degree();
    let real = profile.signature.real as usize;
    let mut factors = Vec::with_capacity(places);
    for (index, &value) in a.arch_invariants().iter().enumerate() {
        let factor = if index >= real {
            // Complex places split every algebra.
            ArchFactor { kind: ArchFactorKind::Complex, size: d }
        } else if value.is_zero() {
            ArchFactor { kind: ArchFactorKind::SplitReal, size: d }
        } else if value == InvariantValue::HALF && d.is_multiple_of(2) {
            ArchFactor { kind: ArchFactorKind::Quaternionic, size: d / 2 }
        } else {
            return Err(GeometryError::NoRealForm { index, value, degree: d });
        };
        factors.push(factor);
    }
    Ok(GroupDescriptor { factors })
}

/// Whether the unit group of an order in the rational class lands in the
/// split real form: true exactly when the class is unramified at infinity.
/// Odd degrees never ramify at infinity, so there the answer is always yes.
pub fn produces_arithmetic_subgroup(b: &BrauerClass) -> Result<bool, GeometryError> {
    if b.field() != "Q" {
        return Err(GeometryError::NotRational(b.field().to_string()));
    }
    Ok(b.rational_arch_invariant().is_zero())
}

/// Which side(s) of a fiber comparison a rational class belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Shared,
    LeftOnly,
    RightOnly,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Shared => write!(f, "shared"),
            Side::LeftOnly => write!(f, "left only"),
            Side::RightOnly => write!(f, "right only"),
        }
    }
}

/// One commensurability class of arithmetic submanifolds, tagged by the
/// fiber(s) its rational class lies in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmanifoldEntry {
    pub label: String,
    pub side: Side,
}

/// Geometric reading of a fiber comparison over a list of candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmanifoldReport {
    /// Ambient group on the left side.
    pub left_group: GroupDescriptor,
    /// Ambient group on the right side.
    pub right_group: GroupDescriptor,
    /// Candidates in at least one fiber, producing arithmetic subgroups.
    pub entries: Vec<SubmanifoldEntry>,
    /// Candidates ramified at infinity, which produce no subgroup of the
    /// split form.
    pub skipped_arch_ramified: usize,
    /// Blanket caveats about what the classification does not see.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Sorts rational candidates into submanifold classes shared by both
/// quotients or visible on one side only. Candidates in neither fiber are
/// dropped; candidates ramified at infinity are counted but not classified.
pub fn shared_submanifolds(
    candidates: &[BrauerClass],
    left: (&BrauerClass, &FieldProfile),
    right: (&BrauerClass, &FieldProfile),
) -> Result<SubmanifoldReport, GeometryError> {
    let left_group = archimedean_group(left.0, left.1)?;
    let right_group = archimedean_group(right.0, right.1)?;
    let mut entries = Vec::new();
    let mut skipped = 0;
    for b in candidates {
        if !produces_arithmetic_subgroup(b)? {
            skipped += 1;
            continue;
        }
        let side = match (member(b, left.0, left.1)?, member(b, right.0, right.1)?) {
            (true, true) => Side::Shared,
            (true, false) => Side::LeftOnly,
            (false, true) => Side::RightOnly,
            (false, false) => continue,
        };
        entries.push(SubmanifoldEntry { label: b.label(), side });
    }
    let mut notes =
        vec!["classes over intermediate subfields are not examined".to_string()];
    let quaternionic = left_group
        .factors
        .iter()
        .chain(&right_group.factors)
        .any(|f| f.kind == ArchFactorKind::Quaternionic);
    if quaternionic {
        notes.push(
            "quaternionic factors are classified but given no manifold interpretation"
                .to_string(),
        );
    }
    Ok(SubmanifoldReport {
        left_group,
        right_group,
        entries,
        skipped_arch_ramified: skipped,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::almost_equal_scenario;
    use crate::fiber::{enumerate, fiber_description};
    use crate::fields::catalog;
    use crate::fields::ArchSignature;
    use crate::invariants::InvariantValue;

    fn v(num: i64, den: u64) -> InvariantValue {
        InvariantValue::new(num, den).unwrap()
    }

    #[test]
    fn totally_real_unramified_classes_are_split() {
        let profile = catalog::load("twin4").unwrap().left;
        let a = BrauerClass::zero_over(&profile, 2).unwrap();
        let group = archimedean_group(&a, &profile).unwrap();
        assert_eq!(group.to_string(), "SL(2,R)^4");
    }

    #[test]
    fn rational_zero_classes_give_a_single_split_factor() {
        for d in [2u32, 3, 5] {
            let b = BrauerClass::zero("Q", d, 1).unwrap();
            let group = archimedean_group(&b, &FieldProfile::rationals()).unwrap();
            assert_eq!(group.to_string(), format!("SL({d},R)"));
        }
    }

    #[test]
    fn mixed_signature_renders_in_place_order() {
        let profile = catalog::load("twin8").unwrap().left;
        let a = BrauerClass::zero_over(&profile, 2).unwrap();
        let group = archimedean_group(&a, &profile).unwrap();
        assert_eq!(group.to_string(), "SL(2,R)^2 x SL(2,C)^3");
    }

    #[test]
    fn half_invariants_pick_the_quaternionic_form() {
        let profile = FieldProfile::new("F", 2, ArchSignature::new(2, 0), vec![], vec![]);
        let mut a = BrauerClass::zero_over(&profile, 2).unwrap();
        a.set_arch(0, v(1, 2));
        let group = archimedean_group(&a, &profile).unwrap();
        assert_eq!(group.to_string(), "SL(1,H) x SL(2,R)");
    }

    #[test]
    fn odd_degree_has_no_quaternionic_form() {
        let profile = FieldProfile::new("F", 3, ArchSignature::new(1, 0), vec![], vec![]);
        let mut a = BrauerClass::zero_over(&profile, 3).unwrap();
        a.set_arch(0, v(1, 2));
        assert!(matches!(
            archimedean_group(&a, &profile),
            Err(GeometryError::NoRealForm { index: 0, degree: 3, .. })
        ));
    }

    #[test]
    fn arch_length_must_match_the_signature() {
        let profile = catalog::load("twin8").unwrap().left;
        let a = BrauerClass::zero("K", 2, 2).unwrap();
        assert!(matches!(
            archimedean_group(&a, &profile),
            Err(GeometryError::ArchMismatch { class: 2, profile: 5 })
        ));
    }

    #[test]
    fn arithmeticity_is_unramifiedness_at_infinity() {
        let split = BrauerClass::rational(2, [(3, v(1, 2)), (5, v(1, 2))], InvariantValue::ZERO).unwrap();
        assert!(produces_arithmetic_subgroup(&split).unwrap());
        let ramified = BrauerClass::rational(2, [(3, v(1, 2))], v(1, 2)).unwrap();
        assert!(!produces_arithmetic_subgroup(&ramified).unwrap());
        let odd = BrauerClass::rational(3, [(7, v(1, 3)), (11, v(2, 3))], InvariantValue::ZERO).unwrap();
        assert!(produces_arithmetic_subgroup(&odd).unwrap());

        let profile = catalog::load("twin4").unwrap().left;
        let over_field = BrauerClass::zero_over(&profile, 2).unwrap();
        assert!(matches!(
            produces_arithmetic_subgroup(&over_field),
            Err(GeometryError::NotRational(_))
        ));
    }

    #[test]
    fn scenario_members_sort_into_shared_and_one_sided() {
        let report = almost_equal_scenario().unwrap();
        let entry = catalog::load("perlis8").unwrap();
        let left_fiber = fiber_description(&report.pair.left, &entry.left, 2).unwrap();
        let mut candidates = enumerate(&left_fiber, 7, usize::MAX).unwrap();
        // One archimedean-ramified candidate: valid but skipped.
        candidates.push(
            BrauerClass::rational(2, [(3, v(1, 2))], v(1, 2)).unwrap(),
        );
        let geometry = shared_submanifolds(
            &candidates,
            (&report.pair.left, &entry.left),
            (&report.pair.right, &entry.right),
        )
        .unwrap();
        assert_eq!(geometry.left_group.to_string(), "SL(2,R)^8");
        assert_eq!(geometry.right_group.to_string(), "SL(2,R)^8");
        assert_eq!(geometry.skipped_arch_ramified, 1);
        let sides: Vec<Side> = geometry.entries.iter().map(|e| e.side).collect();
        assert_eq!(sides, vec![Side::Shared, Side::LeftOnly]);
    }
}
