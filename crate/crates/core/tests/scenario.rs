use std::time::Instant;

use judge_core::rules::Level;
use judge_core::scenario::{run_suite, Case, Outcome, ScenarioError, ScenarioSpec};

const VALJEAN: &str = include_str!("../cases/valjean.case");

fn case() -> Case {
    Case::parse("valjean", VALJEAN).unwrap()
}

fn tags(list: &[&str]) -> Option<Vec<String>> {
    Some(list.iter().map(|s| s.to_string()).collect())
}

#[test]
fn golden_suite() {
    let started = Instant::now();
    let rows = run_suite(concat!(env!("CARGO_MANIFEST_DIR"), "/cases/valjean.case")).unwrap();
    let elapsed = started.elapsed();
    let summary: Vec<(String, Outcome, bool)> = rows.iter().map(|r| (r.id.clone(), r.actual, r.pass)).collect();
    assert_eq!(
        summary,
        [
            ("Q1".to_string(), Outcome::Acquitted, true),
            ("Q2".to_string(), Outcome::Responsible, true),
            ("Q3".to_string(), Outcome::Acquitted, true),
            ("Q4".to_string(), Outcome::Responsible, true),
        ]
    );
    assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
}

#[test]
fn suite_without_e4_marks_q2_failed() {
    let start = VALJEAN.find("/* EVIDENCE 4 */").unwrap();
    let end = VALJEAN.find("/* EVIDENCE 5 */").unwrap();
    let text = format!("{}{}", &VALJEAN[..start], &VALJEAN[end..]);
    let rows = Case::parse("no-e4", &text).unwrap().run_suite().unwrap();
    let q2 = rows.iter().find(|r| r.id == "Q2").unwrap();
    let q3 = rows.iter().find(|r| r.id == "Q3").unwrap();
    assert_eq!((q2.actual, q2.pass), (Outcome::Acquitted, false));
    assert_eq!((q3.actual, q3.pass), (Outcome::Acquitted, true));
}

#[test]
fn empty_and_broken_files_are_input_errors() {
    assert!(matches!(Case::parse("empty", ""), Err(ScenarioError::EmptyCase(_))));
    let err = Case::parse("broken", "p(a).\nq(b) :- r(b)\ns(c).\n").unwrap_err();
    let ScenarioError::Parse { errors, .. } = &err else { panic!("{err}") };
    assert_eq!((errors[0].line, errors[0].column), (3, 1));
    assert!(err.to_string().starts_with("broken:3:1"), "{err}");
}

#[test]
fn descriptor_matches_the_file() {
    let case = case();
    let d = case.descriptor();
    let tags: Vec<&str> = d.evidences.iter().map(|t| t.tag.as_str()).collect();
    assert_eq!(tags, ["e1", "e2", "e3", "e4", "e5"]);
    let presets: Vec<&str> = d.presets.iter().map(|p| p.id.as_str()).collect();
    assert_eq!(presets, ["Q1", "Q2", "Q3", "Q4"]);
    assert_eq!(d.policy.min_evidence_count, 1);
    assert_eq!(d.suspect.as_deref(), Some("valjean"));
    let e4 = &d.evidences[3];
    assert_eq!(e4.witnesses, ["thenardier"]);
    assert!(d.witnesses.iter().any(|w| w.name == "thenardier" && w.reliability == Level::Hi));
    let q3 = &d.presets[2].request;
    assert_eq!(q3.reliability_overrides.get("thenardier"), Some(&Level::Lo));
}

#[test]
fn run_scenario_examples() {
    let case = case();
    let run = |spec: ScenarioSpec| case.run(&spec).unwrap().verdict;
    assert_eq!(run(ScenarioSpec { enabled_tags: tags(&["e1", "e2", "e3"]), ..Default::default() }), Outcome::Acquitted);
    let q3 = ScenarioSpec {
        enabled_tags: tags(&["e1", "e2", "e3", "e4"]),
        reliability_overrides: [("thenardier".to_string(), Level::Lo)].into(),
        ..Default::default()
    };
    assert_eq!(run(q3), Outcome::Acquitted);
    assert_eq!(run(ScenarioSpec { enabled_tags: tags(&["e1", "e2", "e3", "e5"]), ..Default::default() }), Outcome::Responsible);
}

#[test]
fn proof_only_when_asked_and_responsible() {
    let case = case();
    for (id, explain) in [("Q1", true), ("Q2", false), ("Q2", true)] {
        let report = case.run_preset(id, explain).unwrap();
        let wanted = explain && report.verdict == Outcome::Responsible;
        assert_eq!(report.proof.is_some(), wanted, "{id} explain={explain}");
    }
    let proof = case.run_preset("Q2", true).unwrap().proof.unwrap();
    assert!(proof.goal.starts_with("responsible(valjean, criminalInRedJacket"));
    assert!(matches!(case.run_preset("Q7", false), Err(ScenarioError::UnknownPreset(_))));
}

#[test]
fn repeated_runs_are_identical_apart_from_timings() {
    let case = case();
    let spec = ScenarioSpec { explain: true, ..Default::default() };
    let a = case.run(&spec).unwrap().without_timings();
    let b = case.run(&spec).unwrap().without_timings();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn text_and_structured_output_agree() {
    let case = case();
    for preset in ["Q1", "Q2", "Q3", "Q4"] {
        let report = case.run_preset(preset, false).unwrap();
        let text = report.to_text();
        assert!(text.contains(&format!("Verdict: {:?}", report.verdict)));
        if let Some(ground) = &report.ground {
            assert!(text.contains(ground.as_str()));
        }
        let lines = text.lines().filter(|l| l.starts_with("  - ")).count();
        // Evidences appear once in the table and, for a conviction, once more
        // in the ruling.
        let copies = if report.verdict == Outcome::Responsible { 2 } else { 1 };
        assert_eq!(lines, copies * report.evidences.len(), "{text}");
        for e in &report.evidences {
            assert!(text.contains(&e.descriptor));
        }
    }
}

#[test]
fn structured_report_field_names() {
    let report = case().run_preset("Q2", true).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    for field in ["verdict", "ground", "evidences", "proof", "policy", "scenario", "timings"] {
        assert!(json.get(field).is_some(), "{field}");
    }
    assert_eq!(json["verdict"], "Responsible");
    let evidence = &json["evidences"][0];
    for field in ["descriptor", "severity", "precision", "supporting_tags"] {
        assert!(evidence.get(field).is_some(), "{field}");
    }
    assert_eq!(evidence["severity"], "hi");
}
