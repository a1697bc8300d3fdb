//! Evidence classification and the identity/responsibility rules.
//!
//! The rules themselves are case-language source (`rules/standard.case`),
//! loaded next to the facts of a case. This module wraps them: it turns
//! solutions of `evidence_same_as/5` into [`EvidenceAssessment`]s, checks
//! `same_person/3`, and derives a [`Verdict`] from `responsible/6`.

mod policy;
mod verdict;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::caselang::parse_program;
use crate::engine::{Clause, EngineError, KnowledgeBase, Limits, ProofNode};
use crate::term::Term;

pub use policy::{Policy, PolicyError, PolicyValue, POLICY_KEYS};
pub use verdict::{evidence_lines, format_date, render_verdict, AcquittalGround, Finding, RenderError, RulingTemplate, Verdict, DEFAULT_TEMPLATE};

/// Source of the standard rule pack.
pub const STANDARD_RULES: &str = include_str!("../../rules/standard.case");

/// Two-valued strength used for severity, precision and witness reliability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Hi,
    Lo,
}

pub type SeverityLevel = Level;
pub type PrecisionLevel = Level;

impl Level {
    pub fn from_atom(name: &str) -> Option<Level> {
        match name {
            "hi" => Some(Level::Hi),
            "lo" => Some(Level::Lo),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Hi => "hi",
            Level::Lo => "lo",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One derived evidence that `subject_x` and `subject_y` are the same person.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceAssessment {
    pub descriptor: Term,
    pub subject_x: String,
    pub subject_y: String,
    pub severity: SeverityLevel,
    pub precision: PrecisionLevel,
    /// Evidence tags of the facts the derivation used, sorted.
    pub supporting_tags: Vec<String>,
}

impl EvidenceAssessment {
    pub fn is_severe_and_precise(&self) -> bool {
        self.severity == Level::Hi && self.precision == Level::Hi
    }
}

fn standard_pack() -> &'static [Clause] {
    static PACK: OnceLock<Vec<Clause>> = OnceLock::new();
    PACK.get_or_init(|| {
        parse_program(STANDARD_RULES)
            .unwrap_or_else(|errors| panic!("standard rule pack does not parse: {errors:?}"))
            .clauses
    })
}

/// The rule pack followed by the `policy_setting/2` facts for `policy`.
pub fn standard_rules(policy: &Policy) -> Vec<Clause> {
    let mut clauses = standard_pack().to_vec();
    clauses.extend(policy.facts());
    clauses
}

/// `kb` with the standard rules for `policy` appended.
pub fn with_rules(kb: &KnowledgeBase, policy: &Policy) -> Result<KnowledgeBase, EngineError> {
    kb.load(standard_rules(policy))
}

fn level_of(term: &Term, wrapper: &str) -> Option<Level> {
    match term {
        Term::Compound(name, args) if &**name == wrapper && args.len() == 1 => {
            Level::from_atom(args[0].as_atom()?)
        }
        _ => None,
    }
}

/// Evidences derivable from `kb` (facts only; rules are added here) that
/// `x` and `y` are the same person, sorted by the standard order of
/// `(Descriptor, severity(S), precision(P))`.
pub fn assess_evidences(
    kb: &KnowledgeBase,
    policy: &Policy,
    x: &str,
    y: &str,
) -> Result<Vec<EvidenceAssessment>, EngineError> {
    assess_with_rules(&with_rules(kb, policy)?, x, y)
}

fn assess_with_rules(ruled: &KnowledgeBase, x: &str, y: &str) -> Result<Vec<EvidenceAssessment>, EngineError> {
    if x == y {
        return Ok(Vec::new());
    }
    let goal = Term::compound(
        "evidence_same_as",
        vec![
            Term::var("Ev"),
            Term::atom(x),
            Term::atom(y),
            Term::compound("severity", vec![Term::var("S")]),
            Term::compound("precision", vec![Term::var("P")]),
        ],
    );
    let template = Term::tuple(vec![goal.args()[0].clone(), goal.args()[3].clone(), goal.args()[4].clone()]);
    let mut found: BTreeMap<Term, BTreeSet<String>> = BTreeMap::new();
    for solution in ruled.solve(&goal, Limits::default()) {
        let (subst, proof) = solution?;
        let tags = found.entry(subst.apply(&template)).or_default();
        for index in proof.clauses_used() {
            if let Some(tag) = &ruled.clause(index).tag {
                tags.insert(tag.to_string());
            }
        }
    }
    Ok(found
        .into_iter()
        .filter_map(|(key, tags)| {
            let items = key.tuple_items();
            Some(EvidenceAssessment {
                descriptor: items[0].clone(),
                subject_x: x.to_string(),
                subject_y: y.to_string(),
                severity: level_of(&items[1], "severity")?,
                precision: level_of(&items[2], "precision")?,
                supporting_tags: tags.into_iter().collect(),
            })
        })
        .collect())
}

/// The assessments supporting identity of `x` and `y` when the aggregation
/// rule accepts them, `None` otherwise.
pub fn same_person(
    kb: &KnowledgeBase,
    policy: &Policy,
    x: &str,
    y: &str,
) -> Result<Option<Vec<EvidenceAssessment>>, EngineError> {
    let ruled = with_rules(kb, policy)?;
    let goal = Term::compound("same_person", vec![Term::atom(x), Term::atom(y), Term::var("Evidences")]);
    match ruled.solve(&goal, Limits::default()).next() {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(_)) => assess_with_rules(&ruled, x, y).map(Some),
    }
}

/// A verdict together with the material that produced it.
#[derive(Clone, Debug)]
pub struct Judgment {
    pub verdict: Verdict,
    /// Identity evidences between the suspect and the perpetrator(s), whether
    /// or not they sufficed.
    pub assessments: Vec<EvidenceAssessment>,
    /// Derivation of `responsible/6`, for a responsible verdict.
    pub proof: Option<ProofNode>,
    /// The base the proof indexes into: the case with the rules loaded.
    pub knowledge: KnowledgeBase,
}

/// Decides whether `suspect` is responsible for a committed crime.
pub fn judge(kb: &KnowledgeBase, policy: &Policy, suspect: &str) -> Result<Judgment, EngineError> {
    let ruled = with_rules(kb, policy)?;
    let goal = Term::compound(
        "responsible",
        ["Perpetrator", "Date", "Crime", "Place", "Evidences"]
            .iter()
            .fold(vec![Term::atom(suspect)], |mut args, v| {
                args.push(Term::var(v));
                args
            }),
    );
    if let Some(solution) = ruled.solve(&goal, Limits::default()).next() {
        let (subst, proof) = solution?;
        let perpetrator = subst.apply(&Term::var("Perpetrator"));
        let perpetrator = perpetrator.as_atom().unwrap_or_default().to_string();
        let assessments = assess_with_rules(&ruled, suspect, &perpetrator)?;
        let crime_evidence = proof
            .find("committed", 5)
            .cloned()
            .expect("responsible/6 proves committed/5");
        let verdict = Verdict::Responsible(Box::new(Finding {
            suspect: suspect.to_string(),
            perpetrator_alias: perpetrator,
            crime: subst.apply(&Term::var("Crime")),
            date: subst.apply(&Term::var("Date")),
            place: subst.apply(&Term::var("Place")),
            crime_evidence,
            identity_evidences: assessments.clone(),
        }));
        return Ok(Judgment { verdict, assessments, proof: Some(proof), knowledge: ruled });
    }

    let committed = Term::compound("committed", ["Y", "D", "C", "P", "E"].map(Term::var).to_vec());
    let perpetrators = ruled
        .collect_distinct(&Term::var("Y"), &committed)?
        .unwrap_or_default();
    let mut assessments = Vec::new();
    for perpetrator in perpetrators.iter().filter_map(Term::as_atom) {
        assessments.extend(assess_with_rules(&ruled, suspect, perpetrator)?);
    }
    let ground = if assessments.is_empty() {
        AcquittalGround::NoEvidence
    } else {
        AcquittalGround::InsufficientEvidence
    };
    Ok(Judgment {
        verdict: Verdict::Acquitted { suspect: suspect.to_string(), ground },
        assessments,
        proof: None,
        knowledge: ruled,
    })
}

pub fn adjudicate(kb: &KnowledgeBase, policy: &Policy, suspect: &str) -> Result<Verdict, EngineError> {
    judge(kb, policy, suspect).map(|j| j.verdict)
}
