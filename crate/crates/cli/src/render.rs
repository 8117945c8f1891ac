//! Text renderings of the library reports. The JSON mode serializes the
//! same structures verbatim; these functions only exist for human eyes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use brauerlab::brauer::BrauerClass;
use brauerlab::construct::{ConstructedPair, ScenarioReport};
use brauerlab::fiber::{ComparisonResult, FiberDescription};
use brauerlab::fields::{EquivalenceReport, LocalPlace};
use brauerlab::geometry::SubmanifoldReport;
use brauerlab::invariants::InvariantValue;

pub fn value_set(values: &BTreeSet<InvariantValue>) -> String {
    let inner: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

pub fn splitting(places: &[LocalPlace]) -> String {
    places.iter().map(LocalPlace::to_string).collect()
}

pub fn equivalence(report: &EquivalenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} equivalence of {} and {}: {}",
        report.kind,
        report.source,
        report.target,
        if report.passes() { "PASS" } else { "FAIL" }
    );
    for defect in &report.defects {
        let _ = writeln!(out, "  defect: {defect}");
    }
    out
}

pub fn fiber(description: &FiberDescription) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "fiber of {} at degree {}",
        description.algebra, description.degree
    );
    for (q, values) in &description.profiled {
        let _ = writeln!(out, "  {q}: {}", value_set(values));
    }
    let _ = writeln!(out, "  infinity: {}", value_set(&description.arch));
    for (label, class) in &description.classes {
        let _ = writeln!(
            out,
            "  class {label} ({}, splitting {}): {}",
            if class.infinite { "infinite" } else { "size unknown" },
            splitting(&class.splitting_type),
            value_set(&class.values)
        );
    }
    let _ = writeln!(out, "  cardinality: {}", description.cardinality);
    for note in &description.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    out
}

pub fn members(members: &[BrauerClass], division_count: usize, bound: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "members with support below {bound}: {} total, {division_count} division",
        members.len()
    );
    for member in members {
        let _ = writeln!(out, "  {}", member.label());
    }
    out
}

pub fn comparison(result: &ComparisonResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", result.verdict);
    for difference in &result.witness_differences {
        let _ = writeln!(
            out,
            "  difference at {}: left {}, right {}",
            difference.slot,
            value_set(&difference.left),
            value_set(&difference.right)
        );
    }
    let _ = writeln!(out, "intersection cardinality: {}", result.intersection_cardinality);
    out
}

pub fn pair(pair: &ConstructedPair) -> String {
    let mut out = String::new();
    let primes: Vec<String> = pair.plan.primes.iter().map(|q| q.to_string()).collect();
    let _ = writeln!(
        out,
        "plan: field {}, degree {}, primes {} ({} qualifying)",
        pair.plan.field,
        pair.plan.degree,
        primes.join(", "),
        pair.plan.qualifying
    );
    let _ = writeln!(out, "witness: {}", pair.witness.label());
    let _ = writeln!(out, "left: {}", pair.left.label());
    let _ = writeln!(out, "right: {}", pair.right.label());
    let _ = writeln!(
        out,
        "certificate: computed {}, symbolic {}",
        pair.certificate.computed, pair.certificate.symbolic
    );
    out
}

pub fn scenario(report: &ScenarioReport, geometry: &SubmanifoldReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario almost-equal over {}", report.entry);
    for step in &report.steps {
        let _ = writeln!(out, "{step}");
    }
    let _ = writeln!(out, "left {}", fiber(&report.left_fiber).trim_end());
    let _ = writeln!(out, "right {}", fiber(&report.right_fiber).trim_end());
    let _ = write!(out, "{}", comparison(&report.comparison));
    let _ = write!(out, "{}", submanifolds(geometry));
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

pub fn submanifolds(report: &SubmanifoldReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "ambient groups: left {}, right {}",
        report.left_group, report.right_group
    );
    for entry in &report.entries {
        let _ = writeln!(out, "  submanifold class {} ({})", entry.label, entry.side);
    }
    if report.skipped_arch_ramified > 0 {
        let _ = writeln!(
            out,
            "  skipped {} candidate(s) ramified at infinity",
            report.skipped_arch_ramified
        );
    }
    for note in &report.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    out
}
