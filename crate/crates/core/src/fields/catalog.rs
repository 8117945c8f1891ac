//! Built-in example profile pairs, overridable by files.
//!
//! Three entries ship with the crate:
//!
//! * `twin4` - a degree-4 pair with identical decomposition data under the
//!   identity matching (locally equivalent synthetic twins, totally real).
//! * `twin8` - a degree-8 twin pair with mixed signature (2, 3) and a larger
//!   supply of working primes.
//! * `perlis8` - a degree-8 pair that is arithmetically but not locally
//!   equivalent: at q = 2 one field has four places (2,1) while the other
//!   has (1,1), (1,1), (2,1), (4,1). All inertial degrees at 2 equal 1, so
//!   an f-preserving matching exists, but no matching preserves e.
//!
//! The `perlis8` source describes only the decomposition at 2; its
//! archimedean signature and the unramified primes profiled here are
//! synthetic defaults and are flagged as unverified in the entry. Entries
//! loaded from a directory (one JSON object per `*.json` file, same schema
//! as [`CatalogEntry`]) shadow built-in entries with the same name.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    check_arithmetic_equivalence, check_local_equivalence, ArchSignature, CebotarevClass,
    EquivalenceKind, EquivalenceReport, FieldError, FieldProfile, PlaceBijection,
    PrimeDecomposition,
};

/// A named pair of field profiles with a place-matching certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// The equivalence the bijection is advertised to certify.
    pub equivalence: EquivalenceKind,
    pub left: FieldProfile,
    pub right: FieldProfile,
    pub bijection: PlaceBijection,
    /// Declared inputs that no source pins down; surfaced in reports.
    #[serde(default)]
    pub unverified: Vec<String>,
}

impl CatalogEntry {
    pub fn into_parts(self) -> (FieldProfile, FieldProfile, PlaceBijection) {
        (self.left, self.right, self.bijection)
    }

    /// Runs the advertised equivalence check on the shipped bijection.
    pub fn certify(&self) -> EquivalenceReport {
        match self.equivalence {
            EquivalenceKind::Local => check_local_equivalence(&self.left, &self.right, &self.bijection),
            EquivalenceKind::Arithmetic => {
                check_arithmetic_equivalence(&self.left, &self.right, &self.bijection)
            }
        }
    }
}

/// Errors from resolving catalog entries.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog directory {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog file {path} does not parse: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Unknown(#[from] FieldError),
}

fn dec(q: u64, places: &[(u32, u32)]) -> PrimeDecomposition {
    PrimeDecomposition::new(q, places.to_vec())
}

/// The all-inertial-degrees-even class used by the degree-`n` entries:
/// every place over a member prime has local degree 2, so any invariant of
/// even order restricts to zero there.
fn all_f_even(degree: u32) -> CebotarevClass {
    let places = (degree / 2) as usize;
    CebotarevClass::new("all-f-even", true, vec![(1, 2); places])
}

fn twin_profile(name: &str, degree: u32, signature: ArchSignature, decs: Vec<PrimeDecomposition>) -> FieldProfile {
    FieldProfile::new(name, degree, signature, decs, vec![all_f_even(degree)])
}

fn twin4_decompositions() -> Vec<PrimeDecomposition> {
    vec![
        // Ramified primes with a degree-one place: never selected as working
        // primes, and they pin the admissible invariant there to zero.
        dec(2, &[(3, 1), (1, 1)]),
        dec(3, &[(3, 1), (1, 1)]),
        dec(5, &[(1, 1), (1, 3)]),
        dec(7, &[(3, 1), (1, 1)]),
        dec(11, &[(3, 1), (1, 1)]),
        dec(13, &[(1, 1), (1, 1), (1, 2)]),
        dec(17, &[(1, 4)]),
        dec(19, &[(1, 1), (1, 3)]),
        dec(23, &[(1, 1), (1, 1), (1, 2)]),
        dec(29, &[(2, 1), (2, 1)]),
        dec(31, &[(1, 1), (1, 1), (1, 1), (1, 1)]),
        dec(37, &[(1, 2), (1, 2)]),
        dec(41, &[(1, 1), (1, 3)]),
        dec(43, &[(1, 1), (1, 1), (1, 2)]),
        dec(47, &[(1, 4)]),
        dec(53, &[(1, 1), (1, 3)]),
    ]
}

fn twin8_decompositions() -> Vec<PrimeDecomposition> {
    vec![
        dec(2, &[(7, 1), (1, 1)]),
        dec(3, &[(1, 1), (1, 7)]),
        dec(5, &[(1, 1), (1, 1), (1, 3), (1, 3)]),
        dec(7, &[(1, 1), (1, 7)]),
        dec(11, &[(1, 1), (1, 2), (1, 5)]),
        dec(13, &[(1, 1), (1, 3), (1, 4)]),
        dec(17, &[(1, 1), (1, 1), (1, 6)]),
        dec(19, &[(1, 1), (1, 7)]),
        dec(23, &[(1, 1), (1, 1), (1, 1), (1, 5)]),
        dec(29, &[(1, 2), (1, 2), (1, 2), (1, 2)]),
        dec(31, &[(1, 4), (1, 4)]),
        dec(37, &[(1, 8)]),
        dec(41, &[(1, 2), (1, 6)]),
        dec(43, &[(2, 1), (2, 1), (2, 1), (2, 1)]),
        dec(47, &[(1, 1), (1, 1), (1, 3), (1, 3)]),
    ]
}

fn perlis8_shared_decompositions() -> Vec<PrimeDecomposition> {
    vec![
        dec(3, &[(1, 1), (1, 1), (1, 2), (1, 4)]),
        dec(5, &[(1, 1), (1, 3), (1, 4)]),
        dec(7, &[(1, 2), (1, 2), (1, 2), (1, 2)]),
        dec(11, &[(1, 1), (1, 1), (1, 2), (1, 4)]),
        dec(13, &[(1, 4), (1, 4)]),
    ]
}

fn twin_entry(name: &str, degree: u32, signature: ArchSignature, decs: Vec<PrimeDecomposition>) -> CatalogEntry {
    let left = twin_profile(&format!("{name}-a"), degree, signature, decs.clone());
    let right = twin_profile(&format!("{name}-b"), degree, signature, decs);
    let bijection = PlaceBijection::identity(&left, &right);
    CatalogEntry {
        name: name.to_string(),
        equivalence: EquivalenceKind::Local,
        left,
        right,
        bijection,
        unverified: vec![],
    }
}

fn perlis8_entry() -> CatalogEntry {
    let signature = ArchSignature::new(8, 0);
    let mut left_decs = vec![dec(2, &[(2, 1), (2, 1), (2, 1), (2, 1)])];
    left_decs.extend(perlis8_shared_decompositions());
    let mut right_decs = vec![dec(2, &[(1, 1), (1, 1), (2, 1), (4, 1)])];
    right_decs.extend(perlis8_shared_decompositions());
    let left = FieldProfile::new("perlis8-k", 8, signature, left_decs, vec![all_f_even(8)]);
    let right = FieldProfile::new("perlis8-kprime", 8, signature, right_decs, vec![all_f_even(8)]);
    let bijection = PlaceBijection::identity(&left, &right);
    CatalogEntry {
        name: "perlis8".to_string(),
        equivalence: EquivalenceKind::Arithmetic,
        left,
        right,
        bijection,
        unverified: vec![
            "archimedean signature (8,0) is a configurable default".to_string(),
            "unramified primes 3, 5, 7, 11, 13 are synthetic defaults; only the decomposition at 2 is source data".to_string(),
        ],
    }
}

/// Names of the built-in entries.
pub fn builtin_names() -> Vec<&'static str> {
    vec!["perlis8", "twin4", "twin8"]
}

/// Loads a built-in entry by name.
pub fn load(entry: &str) -> Result<CatalogEntry, FieldError> {
    match entry {
        "twin4" => Ok(twin_entry("twin4", 4, ArchSignature::new(4, 0), twin4_decompositions())),
        "twin8" => Ok(twin_entry("twin8", 8, ArchSignature::new(2, 3), twin8_decompositions())),
        "perlis8" => Ok(perlis8_entry()),
        other => Err(FieldError::UnknownEntry(other.to_string())),
    }
}

/// Reads every `*.json` file in `dir` as a [`CatalogEntry`].
pub fn load_dir(dir: &Path) -> Result<BTreeMap<String, CatalogEntry>, CatalogError> {
    let mut entries = BTreeMap::new();
    let listing = fs::read_dir(dir).map_err(|source| CatalogError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths: Vec<_> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let entry: CatalogEntry =
            serde_json::from_str(&text).map_err(|source| CatalogError::Parse {
                path: path.display().to_string(),
                source,
            })?;
        entries.insert(entry.name.clone(), entry);
    }
    Ok(entries)
}

/// Resolves an entry name against an optional override directory, falling
/// back to the built-ins. Directory entries shadow built-ins by name.
pub fn resolve(entry: &str, dir: Option<&Path>) -> Result<CatalogEntry, CatalogError> {
    if let Some(dir) = dir {
        let mut overrides = load_dir(dir)?;
        if let Some(found) = overrides.remove(entry) {
            return Ok(found);
        }
    }
    Ok(load(entry)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_validates_and_certifies() {
        for name in builtin_names() {
            let entry = load(name).unwrap();
            assert!(entry.left.validate().is_empty(), "{name} left profile invalid");
            assert!(entry.right.validate().is_empty(), "{name} right profile invalid");
            let report = entry.certify();
            assert!(report.passes(), "{name}: {report}");
        }
    }

    #[test]
    fn unknown_entry_is_an_error() {
        assert_eq!(load("twin5"), Err(FieldError::UnknownEntry("twin5".into())));
    }

    #[test]
    fn twin4_keeps_the_documented_working_primes() {
        let entry = load("twin4").unwrap();
        assert_eq!(entry.left.degree, 4);
        assert_eq!(entry.left.signature, ArchSignature::new(4, 0));
        assert_eq!(entry.left.local_degrees(5).unwrap(), vec![1, 3]);
        assert_eq!(entry.left.local_degrees(13).unwrap(), vec![1, 1, 2]);
    }

    #[test]
    fn perlis8_is_arithmetic_but_not_local() {
        let entry = load("perlis8").unwrap();
        assert_eq!(entry.equivalence, EquivalenceKind::Arithmetic);
        assert_eq!(entry.left.local_degrees(2).unwrap(), vec![2, 2, 2, 2]);
        assert_eq!(entry.right.local_degrees(2).unwrap(), vec![1, 1, 2, 4]);
        assert!(check_arithmetic_equivalence(&entry.left, &entry.right, &entry.bijection).passes());
        assert!(!check_local_equivalence(&entry.left, &entry.right, &entry.bijection).passes());
        assert!(!entry.unverified.is_empty());
    }

    #[test]
    fn twins_cover_every_prime_up_to_fifty() {
        for name in ["twin4", "twin8"] {
            let entry = load(name).unwrap();
            for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                assert!(entry.left.is_profiled(q), "{name} misses prime {q}");
            }
        }
    }

    #[test]
    fn directory_overrides_shadow_builtins() {
        let dir = std::env::temp_dir().join(format!("brauerlab-catalog-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let mut entry = load("twin4").unwrap();
        entry.left.name = "twin4-custom".into();
        entry.bijection.source = "twin4-custom".into();
        fs::write(dir.join("twin4.json"), serde_json::to_string(&entry).unwrap()).unwrap();

        let resolved = resolve("twin4", Some(&dir)).unwrap();
        assert_eq!(resolved.left.name, "twin4-custom");
        // Unshadowed names still come from the built-ins.
        assert_eq!(resolve("twin8", Some(&dir)).unwrap().left.name, "twin8-a");
        assert!(resolve("nope", Some(&dir)).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
