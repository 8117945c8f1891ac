//! brauerlab: exact computation with Brauer classes of central simple
//! algebras over number fields, with the fields given by local data.
//!
//! The crate works entirely with declared splitting behavior. A number
//! field enters as a [`fields::FieldProfile`]: degree, archimedean
//! signature, the decomposition of finitely many primes into places
//! `(e, f)`, and optionally Cebotarev classes asserting that infinitely
//! many further primes share a splitting type. A central simple algebra
//! enters as a [`brauer::BrauerClass`]: its local invariants in Q/Z, one
//! per place, almost all zero. Everything downstream is exact integer
//! arithmetic; there is no floating point in this crate.
//!
//! What you can do with those two inputs:
//!
//! * check profiles, classes, and place-matching certificates
//!   ([`fields`], [`brauer`]);
//! * restrict rational classes to a profiled field and compute the fiber
//!   of restriction over a given class, i.e. which rational algebras
//!   become the given one after extension of scalars ([`fiber`]);
//! * build pairs of algebras over locally or arithmetically equivalent
//!   fields whose restriction fibers agree, plus rational witnesses in
//!   the common fiber ([`construct`]);
//! * read off the archimedean Lie groups and which rational classes give
//!   commensurable arithmetic spectra ([`geometry`]).
//!
//! The `brauerlab` binary in this workspace exposes each piece as a CLI
//! verb; catalog entries `twin4`, `twin8`, and `perlis8` ship as built-in
//! example inputs (see [`fields::catalog`]).

#![forbid(unsafe_code)]

pub mod brauer;
pub mod construct;
pub mod fiber;
pub mod fields;
pub mod geometry;
pub mod invariants;

pub use brauer::{equal, restrict, tensor, BrauerClass, BrauerError, PlaceId};
pub use construct::{
    almost_equal_scenario, almost_equal_scenario_on, build_pair, build_witness, extend_witness,
    reciprocity_certificate, same_field_rigidity_check, select_prime_tuple, ConstructError,
    ConstructedPair, ConstructionPlan, ScenarioReport,
};
pub use fiber::{
    admissible_set, compare, compatibility, enumerate, fiber_description, is_free_prime, member,
    Cardinality, ComparisonResult, FiberDescription, FiberError, Verdict,
};
pub use fields::{
    check_arithmetic_equivalence, check_local_equivalence, ArchSignature, CebotarevClass,
    EquivalenceKind, EquivalenceReport, FieldError, FieldProfile, LocalPlace, PlaceBijection,
    PrimeDecomposition,
};
pub use geometry::{
    archimedean_group, produces_arithmetic_subgroup, shared_submanifolds, ArchFactor,
    ArchFactorKind, GeometryError, GroupDescriptor, SubmanifoldReport,
};
pub use invariants::{sum_is_integral, InvariantValue, MAX_DEGREE};
