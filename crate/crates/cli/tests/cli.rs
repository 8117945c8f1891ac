//! End-to-end checks of the binary: exit codes, JSON round-trips, catalog
//! resolution, and the frozen outputs of the built-in entries.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use brauerlab::brauer::{restrict, BrauerClass};
use brauerlab::fiber::FiberDescription;
use brauerlab::fields::catalog;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauerlab")).args(args).output().unwrap()
}

fn run_in(dir: &Path, envs: &[(&str, &str)], args: &[&str]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_brauerlab"));
    command.current_dir(dir).args(args);
    for (key, value) in envs {
        command.env(key, value);
    }
    command.output().unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

/// Writes the rational witness for twin4 (d=2, r=2) and its restriction to
/// twin4-a into `dir`, returning both paths as strings.
fn witness_files(dir: &Path) -> (String, String) {
    let output = run(&["--json", "witness", "--catalog", "twin4", "--d", "2", "--r", "2"]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let witness: BrauerClass = serde_json::from_str(&stdout(&output)).unwrap();
    let profile = catalog::load("twin4").unwrap().left;
    let restricted = restrict(&witness, &profile).unwrap();
    let witness_path = dir.join("witness.json");
    let restricted_path = dir.join("restricted.json");
    fs::write(&witness_path, serde_json::to_string(&witness).unwrap()).unwrap();
    fs::write(&restricted_path, serde_json::to_string(&restricted).unwrap()).unwrap();
    (
        witness_path.to_str().unwrap().to_string(),
        restricted_path.to_str().unwrap().to_string(),
    )
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: domain success.
    assert_eq!(code(&run(&["validate", "twin4"])), 0);
    assert_eq!(code(&run(&["equiv", "perlis8"])), 0);

    // 1: well-formed inputs, negative or failed result.
    let local = run(&["equiv", "perlis8", "--kind", "local"]);
    assert_eq!(code(&local), 1);
    let bad_ratio = run(&["construct-pair", "--catalog", "twin4", "--d", "2", "--r", "3"]);
    assert_eq!(code(&bad_ratio), 1);
    assert!(stderr(&bad_ratio).contains("degree"));

    // 2: inputs that cannot be read or parsed.
    let unknown = run(&["validate", "nosuch"]);
    assert_eq!(code(&unknown), 2);
    let missing = run(&["restrict", "/nonexistent/class.json", "twin4-a"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("/nonexistent/class.json"));
    let bogus = run(&["frobnicate"]);
    assert_eq!(code(&bogus), 2);
}

#[test]
fn malformed_json_names_the_file_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"field\": 3").unwrap();
    let output = run(&["restrict", path.to_str().unwrap(), "twin4-a"]);
    assert_eq!(code(&output), 2);
    let message = stderr(&output);
    assert!(message.contains("broken.json"), "{message}");
}

#[test]
fn witness_json_parses_as_a_class_and_round_trips() {
    let output = run(&["--json", "witness", "--catalog", "twin4", "--d", "2", "--r", "2"]);
    assert_eq!(code(&output), 0);
    let witness: BrauerClass = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(witness.degree(), 2);
    assert_eq!(witness.support_primes(), vec![5, 13]);
    let again: BrauerClass =
        serde_json::from_str(&serde_json::to_string(&witness).unwrap()).unwrap();
    assert_eq!(again, witness);
}

#[test]
fn construct_pair_reports_the_expected_plan() {
    let output = run(&["--json", "construct-pair", "--catalog", "twin4", "--d", "2", "--r", "2"]);
    assert_eq!(code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["plan"]["primes"], serde_json::json!([5, 13]));
    assert_eq!(doc["plan"]["qualifying"], serde_json::json!(8));
    assert_eq!(doc["certificate"]["computed"], doc["certificate"]["symbolic"]);
    assert_eq!(doc["certificate"]["computed"]["num"], serde_json::json!(0));
}

#[test]
fn fiber_description_round_trips_and_counts_members() {
    let dir = tempfile::tempdir().unwrap();
    let (_, restricted) = witness_files(dir.path());
    let output = run(&["--json", "fiber", &restricted, "twin4-a", "--bound", "13"]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["member_count"], serde_json::json!(1));
    assert_eq!(doc["division_count"], serde_json::json!(1));
    assert_eq!(doc["description"]["cardinality"]["kind"], serde_json::json!("INFINITE"));
    let description: FiberDescription =
        serde_json::from_value(doc["description"].clone()).unwrap();
    let again: serde_json::Value =
        serde_json::to_value(&description).unwrap();
    assert_eq!(again, doc["description"]);

    let text = run(&["fiber", &restricted, "twin4-a", "--bound", "13"]);
    assert_eq!(code(&text), 0);
    assert!(stdout(&text).contains("INFINITE"));
}

#[test]
fn assume_declarations_extend_prime_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let (_, restricted) = witness_files(dir.path());

    let gap = run(&["fiber", &restricted, "twin4-a", "--bound", "59"]);
    assert_eq!(code(&gap), 1);
    assert!(stderr(&gap).contains("59"));

    let assumed =
        run(&["fiber", &restricted, "twin4-a", "--bound", "59", "--assume", "59=all-f-even"]);
    assert_eq!(code(&assumed), 0, "{}", stderr(&assumed));

    let unknown =
        run(&["fiber", &restricted, "twin4-a", "--bound", "59", "--assume", "59=nope"]);
    assert_eq!(code(&unknown), 2);
}

#[test]
fn scenario_narrates_the_single_prime_difference() {
    let output = run(&["scenario", "almost-equal"]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("UNEQUAL"), "{text}");
    assert!(text.contains("INFINITE"), "{text}");

    let degenerate = run(&["scenario", "almost-equal", "--catalog", "twin4"]);
    assert_eq!(code(&degenerate), 1);
}

#[test]
fn catalog_directory_flag_env_var_and_shadowing() {
    let dir = tempfile::tempdir().unwrap();
    let mut custom = catalog::load("twin4").unwrap();
    custom.name = "custom4".to_string();
    fs::write(dir.path().join("custom4.json"), serde_json::to_string(&custom).unwrap()).unwrap();
    let mut shadow = catalog::load("twin4").unwrap();
    shadow.unverified.push("shadowed copy".to_string());
    fs::write(dir.path().join("twin4.json"), serde_json::to_string(&shadow).unwrap()).unwrap();
    let dir_arg = dir.path().to_str().unwrap();

    // Unknown without the directory, known with it (flag or env var).
    assert_eq!(code(&run(&["validate", "custom4"])), 2);
    assert_eq!(code(&run(&["--catalog-dir", dir_arg, "validate", "custom4"])), 0);
    let via_env = run_in(dir.path(), &[("BRAUERLAB_CATALOG", dir_arg)], &["validate", "custom4"]);
    assert_eq!(code(&via_env), 0);

    // The directory's twin4 shadows the built-in one.
    let shadowed =
        run(&["--catalog-dir", dir_arg, "--json", "validate", "twin4"]);
    assert_eq!(code(&shadowed), 0);
    assert!(stdout(&shadowed).contains("shadowed copy"));

    // A catalog name colliding with an existing file is rejected as
    // ambiguous rather than silently resolved.
    fs::write(dir.path().join("twin4"), "{}").unwrap();
    let ambiguous = run_in(dir.path(), &[], &["validate", "twin4"]);
    assert_eq!(code(&ambiguous), 2);
    assert!(stderr(&ambiguous).contains("both"), "{}", stderr(&ambiguous));
}

#[test]
fn equiv_accepts_profile_files_with_a_bijection() {
    let dir = tempfile::tempdir().unwrap();
    let entry = catalog::load("twin4").unwrap();
    let left = dir.path().join("left.json");
    let right = dir.path().join("right.json");
    let bijection = dir.path().join("bijection.json");
    fs::write(&left, serde_json::to_string(&entry.left).unwrap()).unwrap();
    fs::write(&right, serde_json::to_string(&entry.right).unwrap()).unwrap();
    fs::write(&bijection, serde_json::to_string(&entry.bijection).unwrap()).unwrap();
    let output = run(&[
        "equiv",
        left.to_str().unwrap(),
        right.to_str().unwrap(),
        "--bijection",
        bijection.to_str().unwrap(),
        "--kind",
        "local",
    ]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
}

#[test]
fn validate_checks_a_class_against_a_profile() {
    let dir = tempfile::tempdir().unwrap();
    let (_, restricted) = witness_files(dir.path());
    assert_eq!(code(&run(&["validate", "twin4-a", &restricted])), 0);

    // Reciprocity failure: a lone 1/2 at 5 does not sum to zero over Q.
    let broken = dir.path().join("broken-class.json");
    fs::write(
        &broken,
        r#"{"field":"Q","degree":2,"invariants":[{"q":5,"place":0,"num":1,"den":2}],"arch":[{"num":0,"den":1}]}"#,
    )
    .unwrap();
    let output = run(&["validate", "Q", broken.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
}

#[test]
fn compare_judges_twin_restrictions_equal() {
    let dir = tempfile::tempdir().unwrap();
    let (witness, _) = witness_files(dir.path());
    let entry = catalog::load("twin4").unwrap();
    let rational: BrauerClass =
        serde_json::from_str(&fs::read_to_string(&witness).unwrap()).unwrap();
    let left = dir.path().join("left-class.json");
    let right = dir.path().join("right-class.json");
    fs::write(&left, serde_json::to_string(&restrict(&rational, &entry.left).unwrap()).unwrap())
        .unwrap();
    fs::write(&right, serde_json::to_string(&restrict(&rational, &entry.right).unwrap()).unwrap())
        .unwrap();
    let output = run(&[
        "--json",
        "compare",
        left.to_str().unwrap(),
        "twin4-a",
        right.to_str().unwrap(),
        "twin4-b",
    ]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["verdict"], serde_json::json!("EQUAL"));
    assert_eq!(doc["witness_differences"], serde_json::json!([]));
}

#[test]
fn geometry_reports_group_and_arithmeticity() {
    let dir = tempfile::tempdir().unwrap();
    let (witness, _) = witness_files(dir.path());
    let output = run(&["--json", "geometry", &witness]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["rendered"], serde_json::json!("SL(2,R)"));
    assert_eq!(doc["produces_arithmetic_subgroup"], serde_json::json!(true));

    let text = run(&["geometry", &witness]);
    assert!(stdout(&text).contains("SL(2,R)"));
}
