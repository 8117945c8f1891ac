//! Input resolution. Catalog names resolve before file paths, and a string
//! that matches both is rejected rather than guessed at.

use std::collections::BTreeMap;
use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use brauerlab::brauer::BrauerClass;
use brauerlab::fields::catalog::{self, CatalogEntry, CatalogError};
use brauerlab::fields::FieldProfile;

use crate::CliError;

/// Directory of extra catalog entries: the flag wins, then the
/// BRAUERLAB_CATALOG environment variable.
pub fn catalog_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| env::var_os("BRAUERLAB_CATALOG").map(PathBuf::from))
}

/// Reads and parses one JSON file, naming the file and the offending field
/// on failure.
pub fn parse_json_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::input(format!("cannot read {}: {err}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|err| CliError::input(format!("cannot parse {}: {err}", path.display())))
}

/// All catalog entries visible to this invocation, directory entries
/// shadowing built-ins of the same name.
pub fn all_entries(dir: Option<&Path>) -> Result<BTreeMap<String, CatalogEntry>, CliError> {
    let mut entries = BTreeMap::new();
    for name in catalog::builtin_names() {
        let entry = catalog::load(name).expect("built-in entries load");
        entries.insert(name.to_string(), entry);
    }
    if let Some(dir) = dir {
        for (name, entry) in catalog::load_dir(dir).map_err(catalog_input_error)? {
            entries.insert(name, entry);
        }
    }
    Ok(entries)
}

fn catalog_input_error(err: CatalogError) -> CliError {
    CliError::input(err.to_string())
}

/// Resolves an entry slot: catalog name first, then a JSON file of the
/// entry schema.
pub fn resolve_entry(spec: &str, dir: Option<&Path>) -> Result<CatalogEntry, CliError> {
    let from_catalog = match catalog::resolve(spec, dir) {
        Ok(entry) => Some(entry),
        Err(CatalogError::Unknown(_)) => None,
        Err(err) => return Err(catalog_input_error(err)),
    };
    let path = Path::new(spec);
    match (from_catalog, path.is_file()) {
        (Some(_), true) => Err(ambiguous(spec, "catalog entry")),
        (Some(entry), false) => Ok(entry),
        (None, true) => parse_json_file(path),
        (None, false) => Err(CliError::input(format!(
            "`{spec}` is neither a catalog entry nor a readable file"
        ))),
    }
}

fn ambiguous(spec: &str, kind: &str) -> CliError {
    CliError::input(format!(
        "`{spec}` names both a {kind} and an existing file; pass a different path or rename the entry"
    ))
}

/// What a single `validate` argument turned out to be.
pub enum ValidationTarget {
    Entry(Box<CatalogEntry>),
    Profile(Box<FieldProfile>),
}

/// Resolves a `validate` input, which may be a catalog entry, a catalog
/// profile, or a file holding either schema. A name that also matches an
/// existing file is rejected instead of guessed at.
pub fn resolve_validation_target(
    spec: &str,
    dir: Option<&Path>,
) -> Result<ValidationTarget, CliError> {
    if spec == "Q" || spec.eq_ignore_ascii_case("rationals") {
        return Ok(ValidationTarget::Profile(Box::new(FieldProfile::rationals())));
    }
    let entries = all_entries(dir)?;
    let named = if let Some(entry) = entries.get(spec) {
        Some((ValidationTarget::Entry(Box::new(entry.clone())), "catalog entry"))
    } else {
        catalog_profile(spec, &entries)
            .map(|profile| (ValidationTarget::Profile(Box::new(profile)), "catalog profile"))
    };
    let path = Path::new(spec);
    match (named, path.is_file()) {
        (Some((_, kind)), true) => Err(ambiguous(spec, kind)),
        (Some((target, _)), false) => Ok(target),
        (None, true) => {
            let text = fs::read_to_string(path)
                .map_err(|err| CliError::input(format!("cannot read {}: {err}", path.display())))?;
            if let Ok(entry) = serde_json::from_str::<CatalogEntry>(&text) {
                return Ok(ValidationTarget::Entry(Box::new(entry)));
            }
            serde_json::from_str::<FieldProfile>(&text)
                .map(|profile| ValidationTarget::Profile(Box::new(profile)))
                .map_err(|err| {
                    CliError::input(format!("cannot parse {}: {err}", path.display()))
                })
        }
        (None, false) => Err(CliError::input(format!(
            "`{spec}` is neither a catalog name nor a readable file"
        ))),
    }
}

fn catalog_profile(spec: &str, entries: &BTreeMap<String, CatalogEntry>) -> Option<FieldProfile> {
    if let Some((name, side)) = spec.split_once(':') {
        let entry = entries.get(name)?;
        return match side {
            "left" => Some(entry.left.clone()),
            "right" => Some(entry.right.clone()),
            _ => None,
        };
    }
    entries.values().find_map(|entry| {
        if entry.left.name == spec {
            Some(entry.left.clone())
        } else if entry.right.name == spec {
            Some(entry.right.clone())
        } else {
            None
        }
    })
}

/// Resolves a profile slot: `Q`, a catalog profile name (or `entry:left`,
/// `entry:right`), then a JSON file of the profile schema.
pub fn resolve_profile(spec: &str, dir: Option<&Path>) -> Result<FieldProfile, CliError> {
    if spec == "Q" || spec.eq_ignore_ascii_case("rationals") {
        return Ok(FieldProfile::rationals());
    }
    let from_catalog = catalog_profile(spec, &all_entries(dir)?);
    let path = Path::new(spec);
    match (from_catalog, path.is_file()) {
        (Some(_), true) => Err(ambiguous(spec, "catalog profile")),
        (Some(profile), false) => Ok(profile),
        (None, true) => parse_json_file(path),
        (None, false) => Err(CliError::input(format!(
            "`{spec}` is neither a catalog profile nor a readable file"
        ))),
    }
}

/// Loads a class from its JSON file.
pub fn load_class(path: &Path) -> Result<BrauerClass, CliError> {
    parse_json_file(path)
}

/// Applies `--assume q=label` declarations to a profile, placing each prime
/// into the named Cebotarev class.
pub fn apply_assumptions(profile: &FieldProfile, assume: &[String]) -> Result<FieldProfile, CliError> {
    if assume.is_empty() {
        return Ok(profile.clone());
    }
    let mut declared = Vec::new();
    for spec in assume {
        let Some((q, label)) = spec.split_once('=') else {
            return Err(CliError::input(format!(
                "assumption `{spec}` is not of the form Q=CLASS"
            )));
        };
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("assumption `{spec}` has a non-numeric prime")))?;
        declared.push((q, label.trim()));
    }
    let mut resolved = Vec::new();
    for (q, label) in declared {
        let class = profile.cebotarev_class(label).ok_or_else(|| {
            CliError::input(format!(
                "profile {} declares no Cebotarev class `{label}`",
                profile.name
            ))
        })?;
        resolved.push((q, class));
    }
    profile
        .assuming(&resolved)
        .map_err(|err| CliError::domain(err.to_string()))
}
