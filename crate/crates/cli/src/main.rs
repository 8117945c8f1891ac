//! Batch front end for the brauerlab library.
//!
//! Every verb maps to one library entry point, reads catalog names or JSON
//! files, and emits a text report (or the same facts as JSON with
//! `--json`). Exit status: 0 for domain success, 1 for domain failures
//! (validation defects, failed checks, degenerate scenarios), 2 for input
//! and parse errors.

mod inputs;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use brauerlab::brauer::{restrict, BrauerClass};
use brauerlab::construct::{
    almost_equal_scenario_on, build_pair, build_witness, extend_witness, select_prime_tuple,
    ConstructError, ScenarioReport,
};
use brauerlab::fiber::{compare, enumerate, fiber_description, FiberDescription};
use brauerlab::fields::catalog::CatalogEntry;
use brauerlab::fields::{
    check_arithmetic_equivalence, check_local_equivalence, EquivalenceKind, EquivalenceReport,
    FieldProfile, PlaceBijection,
};
use brauerlab::geometry::{
    archimedean_group, produces_arithmetic_subgroup, shared_submanifolds, GroupDescriptor,
    SubmanifoldReport,
};

/// Failures split by exit status: input problems exit 2, domain problems
/// exit 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError::Domain(message.into())
    }
}

macro_rules! domain_error {
    ($($ty:ty),+) => {$(
        impl From<$ty> for CliError {
            fn from(err: $ty) -> Self {
                CliError::Domain(err.to_string())
            }
        }
    )+};
}

domain_error!(
    brauerlab::brauer::BrauerError,
    brauerlab::fiber::FiberError,
    brauerlab::construct::ConstructError,
    brauerlab::geometry::GeometryError,
    brauerlab::fields::FieldError
);

#[derive(Parser)]
#[command(name = "brauerlab", version, about = "Brauer classes by local data: validation, restriction fibers, constructions, and geometry")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory of catalog JSON files shadowing the built-ins; defaults to
    /// $BRAUERLAB_CATALOG.
    #[arg(long, global = true, value_name = "DIR")]
    catalog_dir: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Local,
    Arithmetic,
}

impl From<KindArg> for EquivalenceKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::Local => EquivalenceKind::Local,
            KindArg::Arithmetic => EquivalenceKind::Arithmetic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScenarioName {
    /// Arithmetically equivalent fields with fibers differing at one prime.
    AlmostEqual,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a catalog entry, a profile, or a class against a profile.
    Validate {
        /// Entry name, profile, or profile followed by a class file.
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<String>,
    },
    /// Check a place bijection for local or arithmetic equivalence.
    Equiv {
        /// Catalog entry, or left profile when RIGHT is given.
        left: String,
        /// Right profile (file mode; needs --bijection).
        right: Option<String>,
        /// Place bijection JSON (file mode).
        #[arg(long, value_name = "FILE")]
        bijection: Option<PathBuf>,
        /// Which equivalence to check; defaults to the entry's declared
        /// kind, or local in file mode.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Restrict a rational class to a profiled field.
    Restrict {
        class: PathBuf,
        profile: String,
    },
    /// Describe the fiber of a class; optionally enumerate members.
    Fiber {
        class: PathBuf,
        profile: String,
        /// Fiber degree; defaults to the class degree.
        #[arg(long)]
        d: Option<u32>,
        /// Enumerate members with support below this bound.
        #[arg(long)]
        bound: Option<u64>,
        /// Stop enumerating after this many members.
        #[arg(long)]
        limit: Option<usize>,
        /// Q=CLASS declarations placing unprofiled primes into a declared
        /// Cebotarev class before computing.
        #[arg(long, value_name = "Q=CLASS")]
        assume: Vec<String>,
    },
    /// Compare the fibers of two classes slot by slot.
    Compare {
        class_a: PathBuf,
        profile_a: String,
        class_b: PathBuf,
        profile_b: String,
        /// Fiber degree; defaults to the first class's degree.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Build a matched pair of classes over a catalog entry.
    ConstructPair {
        #[arg(long)]
        catalog: String,
        /// Degree of the classes.
        #[arg(long)]
        d: u32,
        /// Number of working primes; must be a multiple of the degree.
        #[arg(long)]
        r: usize,
    },
    /// Build the rational witness of a plan, optionally extended by free
    /// primes.
    Witness {
        #[arg(long)]
        catalog: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: usize,
        /// Extra free primes (comma separated) to absorb into the witness.
        #[arg(long, value_delimiter = ',')]
        extend: Vec<u64>,
    },
    /// Run a named scenario end to end.
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        /// Entry to run over; defaults to perlis8.
        #[arg(long)]
        catalog: Option<String>,
    },
    /// Archimedean group of a class, with arithmeticity for rational ones.
    Geometry {
        class: PathBuf,
        /// Profile of the class's field; defaults to Q.
        profile: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: String) -> Result<(), CliError> {
    if json {
        let rendered = serde_json::to_string_pretty(value)
            .map_err(|err| CliError::domain(format!("cannot serialize report: {err}")))?;
        println!("{rendered}");
    } else {
        print!("{text}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let dir = inputs::catalog_dir(cli.catalog_dir);
    let dir = dir.as_deref();
    match cli.verb {
        Verb::Validate { inputs: specs } => cmd_validate(cli.json, dir, &specs),
        Verb::Equiv { left, right, bijection, kind } => {
            cmd_equiv(cli.json, dir, &left, right.as_deref(), bijection.as_deref(), kind)
        }
        Verb::Restrict { class, profile } => cmd_restrict(cli.json, dir, &class, &profile),
        Verb::Fiber { class, profile, d, bound, limit, assume } => {
            cmd_fiber(cli.json, dir, &class, &profile, d, bound, limit, &assume)
        }
        Verb::Compare { class_a, profile_a, class_b, profile_b, d } => {
            cmd_compare(cli.json, dir, (&class_a, &profile_a), (&class_b, &profile_b), d)
        }
        Verb::ConstructPair { catalog, d, r } => cmd_construct_pair(cli.json, dir, &catalog, d, r),
        Verb::Witness { catalog, d, r, extend } => cmd_witness(cli.json, dir, &catalog, d, r, &extend),
        Verb::Scenario { name: ScenarioName::AlmostEqual, catalog } => {
            cmd_scenario(cli.json, dir, catalog.as_deref())
        }
        Verb::Geometry { class, profile } => cmd_geometry(cli.json, dir, &class, profile.as_deref()),
    }
}

#[derive(Serialize)]
struct ValidationOutput {
    input: String,
    ok: bool,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    unverified: Vec<String>,
}

fn cmd_validate(json: bool, dir: Option<&std::path::Path>, specs: &[String]) -> Result<ExitCode, CliError> {
    let output = match specs {
        [single] => match inputs::resolve_validation_target(single, dir)? {
            inputs::ValidationTarget::Entry(entry) => validate_entry(&entry),
            inputs::ValidationTarget::Profile(profile) => {
                let violations: Vec<String> =
                    profile.validate().iter().map(ToString::to_string).collect();
                ValidationOutput {
                    input: profile.name.clone(),
                    ok: violations.is_empty(),
                    violations,
                    unverified: Vec::new(),
                }
            }
        },
        [profile_spec, class_path] => {
            let profile = inputs::resolve_profile(profile_spec, dir)?;
            let class = inputs::load_class(std::path::Path::new(class_path))?;
            let mut violations: Vec<String> =
                profile.validate().iter().map(ToString::to_string).collect();
            violations.extend(class.validate(&profile).iter().map(ToString::to_string));
            ValidationOutput {
                input: format!("{} over {}", class.label(), profile.name),
                ok: violations.is_empty(),
                violations,
                unverified: Vec::new(),
            }
        }
        _ => unreachable!("clap enforces 1..=2 inputs"),
    };

    let mut text = format!(
        "validate {}: {}\n",
        output.input,
        if output.ok { "PASS" } else { "FAIL" }
    );
    for violation in &output.violations {
        text.push_str(&format!("  violation: {violation}\n"));
    }
    for note in &output.unverified {
        text.push_str(&format!("  unverified: {note}\n"));
    }
    emit(json, &output, text)?;
    Ok(if output.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn validate_entry(entry: &CatalogEntry) -> ValidationOutput {
    let mut violations: Vec<String> = Vec::new();
    for profile in [&entry.left, &entry.right] {
        violations.extend(
            profile
                .validate()
                .iter()
                .map(|v| format!("{}: {v}", profile.name)),
        );
    }
    let report = entry.certify();
    violations.extend(report.defects.iter().map(|d| format!("bijection: {d}")));
    ValidationOutput {
        input: entry.name.clone(),
        ok: violations.is_empty(),
        violations,
        unverified: entry.unverified.clone(),
    }
}

fn cmd_equiv(
    json: bool,
    dir: Option<&std::path::Path>,
    left: &str,
    right: Option<&str>,
    bijection: Option<&std::path::Path>,
    kind: Option<KindArg>,
) -> Result<ExitCode, CliError> {
    let (left_profile, right_profile, phi, kind) = match right {
        None => {
            if bijection.is_some() {
                return Err(CliError::input(
                    "--bijection only applies when two profiles are given",
                ));
            }
            let entry = inputs::resolve_entry(left, dir)?;
            let kind = kind.map_or(entry.equivalence, EquivalenceKind::from);
            let (l, r, phi) = entry.into_parts();
            (l, r, phi, kind)
        }
        Some(right) => {
            let phi_path = bijection.ok_or_else(|| {
                CliError::input("comparing two profiles requires --bijection FILE")
            })?;
            let phi: PlaceBijection = inputs::parse_json_file(phi_path)?;
            let kind = kind.map_or(EquivalenceKind::Local, EquivalenceKind::from);
            (
                inputs::resolve_profile(left, dir)?,
                inputs::resolve_profile(right, dir)?,
                phi,
                kind,
            )
        }
    };
    let report: EquivalenceReport = match kind {
        EquivalenceKind::Local => check_local_equivalence(&left_profile, &right_profile, &phi),
        EquivalenceKind::Arithmetic => {
            check_arithmetic_equivalence(&left_profile, &right_profile, &phi)
        }
    };
    let passed = report.passes();
    emit(json, &report, render::equivalence(&report))?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_restrict(
    json: bool,
    dir: Option<&std::path::Path>,
    class: &std::path::Path,
    profile: &str,
) -> Result<ExitCode, CliError> {
    let class = inputs::load_class(class)?;
    let profile = inputs::resolve_profile(profile, dir)?;
    let restricted = restrict(&class, &profile)?;
    emit(json, &restricted, format!("{}\n", restricted.label()))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FiberOutput {
    description: FiberDescription,
    #[serde(skip_serializing_if = "Option::is_none")]
    members: Option<Vec<BrauerClass>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    member_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    division_count: Option<usize>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_fiber(
    json: bool,
    dir: Option<&std::path::Path>,
    class: &std::path::Path,
    profile: &str,
    d: Option<u32>,
    bound: Option<u64>,
    limit: Option<usize>,
    assume: &[String],
) -> Result<ExitCode, CliError> {
    let class = inputs::load_class(class)?;
    let profile = inputs::resolve_profile(profile, dir)?;
    let profile = inputs::apply_assumptions(&profile, assume)?;
    let d = d.unwrap_or_else(|| class.degree());
    let description = fiber_description(&class, &profile, d)?;
    let mut output = FiberOutput {
        description,
        members: None,
        member_count: None,
        division_count: None,
    };
    let mut text = render::fiber(&output.description);
    if let Some(bound) = bound {
        let members = enumerate(&output.description, bound, limit.unwrap_or(usize::MAX))?;
        let division = members.iter().filter(|b| b.is_division()).count();
        text.push_str(&render::members(&members, division, bound));
        output.member_count = Some(members.len());
        output.division_count = Some(division);
        output.members = Some(members);
    }
    emit(json, &output, text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(
    json: bool,
    dir: Option<&std::path::Path>,
    a: (&std::path::Path, &str),
    b: (&std::path::Path, &str),
    d: Option<u32>,
) -> Result<ExitCode, CliError> {
    let class_a = inputs::load_class(a.0)?;
    let class_b = inputs::load_class(b.0)?;
    let profile_a = inputs::resolve_profile(a.1, dir)?;
    let profile_b = inputs::resolve_profile(b.1, dir)?;
    let d = d.unwrap_or_else(|| class_a.degree());
    let fiber_a = fiber_description(&class_a, &profile_a, d)?;
    let fiber_b = fiber_description(&class_b, &profile_b, d)?;
    let result = compare(&fiber_a, &fiber_b)?;
    emit(json, &result, render::comparison(&result))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct_pair(
    json: bool,
    dir: Option<&std::path::Path>,
    catalog: &str,
    d: u32,
    r: usize,
) -> Result<ExitCode, CliError> {
    let entry = inputs::resolve_entry(catalog, dir)?;
    let plan = select_prime_tuple(&entry.left, d, r)?;
    let pair = build_pair(&entry, &plan)?;
    emit(json, &pair, render::pair(&pair))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_witness(
    json: bool,
    dir: Option<&std::path::Path>,
    catalog: &str,
    d: u32,
    r: usize,
    extend: &[u64],
) -> Result<ExitCode, CliError> {
    let entry = inputs::resolve_entry(catalog, dir)?;
    let plan = select_prime_tuple(&entry.left, d, r)?;
    let mut witness = build_witness(&plan)?;
    if !extend.is_empty() {
        witness = extend_witness(&witness, &entry.left, extend)?;
    }
    emit(json, &witness, format!("{}\n", witness.label()))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ScenarioOutput {
    #[serde(flatten)]
    report: ScenarioReport,
    geometry: SubmanifoldReport,
}

fn cmd_scenario(
    json: bool,
    dir: Option<&std::path::Path>,
    catalog: Option<&str>,
) -> Result<ExitCode, CliError> {
    let entry = inputs::resolve_entry(catalog.unwrap_or("perlis8"), dir)?;
    let report = almost_equal_scenario_on(&entry).map_err(|err| match err {
        ConstructError::ScenarioDegenerate(message) => CliError::domain(message),
        other => CliError::from(other),
    })?;
    // Geometric reading over the members both fibers reach below the
    // scenario bound.
    let mut candidates = enumerate(&report.left_fiber, report.enumeration_bound, usize::MAX)?;
    for candidate in enumerate(&report.right_fiber, report.enumeration_bound, usize::MAX)? {
        if !candidates.contains(&candidate) {
            candidates.push(candidate);
        }
    }
    let geometry = shared_submanifolds(
        &candidates,
        (&report.pair.left, &entry.left),
        (&report.pair.right, &entry.right),
    )?;
    let text = render::scenario(&report, &geometry);
    let output = ScenarioOutput { report, geometry };
    emit(json, &output, text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GeometryOutput {
    group: GroupDescriptor,
    rendered: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    produces_arithmetic_subgroup: Option<bool>,
}

fn cmd_geometry(
    json: bool,
    dir: Option<&std::path::Path>,
    class: &std::path::Path,
    profile: Option<&str>,
) -> Result<ExitCode, CliError> {
    let class = inputs::load_class(class)?;
    let profile = match profile {
        Some(spec) => inputs::resolve_profile(spec, dir)?,
        None => FieldProfile::rationals(),
    };
    let group = archimedean_group(&class, &profile)?;
    let arithmetic = if class.field() == "Q" {
        Some(produces_arithmetic_subgroup(&class)?)
    } else {
        None
    };
    let rendered = group.to_string();
    let mut text = format!("group: {rendered}\n");
    if let Some(arithmetic) = arithmetic {
        text.push_str(&format!(
            "produces arithmetic subgroup: {}\n",
            if arithmetic { "yes" } else { "no" }
        ));
    }
    let output = GeometryOutput { group, rendered, produces_arithmetic_subgroup: arithmetic };
    emit(json, &output, text)?;
    Ok(ExitCode::SUCCESS)
}
