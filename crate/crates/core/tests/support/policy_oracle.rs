//! Brute-force expectations for the shipped case, derived by hand from the
//! evidence descriptions rather than from the rule pack.
//!
//! * colocation (hi, hi): e1 and e4 both on and thenardier reliable.
//! * fingerprint (hi, lo): e2 on, and e1 on for the sighting on the scooter.
//! * dialect (lo, lo): e3 on.
//! * voice at scene (hi, hi): e5 on (the crime itself is untagged).

#![allow(dead_code)]

use std::collections::BTreeSet;

use judge_core::rules::{Level, Policy};
use judge_core::scenario::{Case, Outcome, RunReport, ScenarioSpec};

pub const TAGS: [&str; 5] = ["e1", "e2", "e3", "e4", "e5"];

pub type Kind = (&'static str, Level, Level);

pub fn expected_assessments(enabled: &BTreeSet<&str>, thenardier_hi: bool) -> BTreeSet<Kind> {
    let on = |t: &str| enabled.contains(t);
    let mut out = BTreeSet::new();
    if on("e1") && on("e4") && thenardier_hi {
        out.insert(("colocation", Level::Hi, Level::Hi));
    }
    if on("e1") && on("e2") {
        out.insert(("fingerprint", Level::Hi, Level::Lo));
    }
    if on("e3") {
        out.insert(("dialect", Level::Lo, Level::Lo));
    }
    if on("e5") {
        out.insert(("voice_at_scene", Level::Hi, Level::Hi));
    }
    out
}

pub fn expected_outcome(assessments: &BTreeSet<Kind>, policy: &Policy) -> Outcome {
    let count = assessments.len() as i64;
    let severe = assessments.iter().any(|(_, s, p)| *s == Level::Hi && *p == Level::Hi);
    if count > policy.min_evidence_count && (!policy.require_severe_precise || severe) {
        Outcome::Responsible
    } else {
        Outcome::Acquitted
    }
}

/// The default bound, "one evidence is enough" and "four coherent evidences".
pub fn policies() -> [Policy; 3] {
    let base = Policy::default();
    [
        base.clone(),
        Policy { min_evidence_count: 0, require_severe_precise: true, ..base.clone() },
        Policy { min_evidence_count: 3, require_severe_precise: false, ..base },
    ]
}

pub fn spec_for(enabled: &BTreeSet<&str>, thenardier_hi: bool, policy: &Policy) -> ScenarioSpec {
    let mut spec = ScenarioSpec {
        enabled_tags: Some(enabled.iter().map(|t| t.to_string()).collect()),
        ..Default::default()
    };
    if !thenardier_hi {
        spec.reliability_overrides.insert("thenardier".into(), Level::Lo);
    }
    for (key, value) in policy.values() {
        spec.policy_overrides.insert(key.to_string(), value);
    }
    spec
}

pub fn subsets() -> impl Iterator<Item = BTreeSet<&'static str>> {
    (0u32..1 << TAGS.len()).map(|mask| TAGS.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, t)| *t).collect())
}

fn kinds(report: &RunReport) -> BTreeSet<Kind> {
    report
        .evidences
        .iter()
        .map(|e| {
            let kind = e.descriptor.split('(').next().unwrap_or_default();
            let kind = ["colocation", "fingerprint", "dialect", "voice_at_scene"]
                .into_iter()
                .find(|k| *k == kind)
                .unwrap_or("unexpected");
            (kind, e.severity, e.precision)
        })
        .collect()
}

/// Runs every configuration and returns the ones that disagree with the
/// oracle, plus the number checked.
pub fn sweep(case: &Case) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for policy in policies() {
        for enabled in subsets() {
            for thenardier_hi in [true, false] {
                checked += 1;
                let expected = expected_assessments(&enabled, thenardier_hi);
                let outcome = expected_outcome(&expected, &policy);
                match case.run(&spec_for(&enabled, thenardier_hi, &policy)) {
                    Ok(report) if report.verdict == outcome && kinds(&report) == expected => {}
                    Ok(report) => mismatches.push(format!(
                        "{enabled:?} thenardier_hi={thenardier_hi} min={} severe={}: got {:?} {:?}, expected {outcome:?} {expected:?}",
                        policy.min_evidence_count,
                        policy.require_severe_precise,
                        report.verdict,
                        kinds(&report)
                    )),
                    Err(e) => mismatches.push(format!("{enabled:?}: {e}")),
                }
            }
        }
    }
    (checked, mismatches)
}
