//! Cases, what-if scenarios over them, and the reports both front ends emit.
//!
//! A [`Case`] is a parsed case file: its facts, evidence tags, declared
//! witnesses, default suspect and policy, and preset scenarios. A
//! [`ScenarioSpec`] says which tags are on, which reliabilities and policy
//! keys to override, and who stands trial. [`Case::run`] turns the pair into
//! a [`RunReport`], which the CLI prints and the service returns verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caselang::{format_clause, parse_program, Directive, ParseError, SourceProgram};
use crate::engine::{Clause, EngineError, Justification, KnowledgeBase, ProofNode};
use crate::rules::{
    self, render_verdict, EvidenceAssessment, Level, Policy, PolicyError, PolicyValue, RenderError, Verdict,
    DEFAULT_TEMPLATE,
};
use crate::term::Term;

/// Verdict outcome without the supporting material.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Responsible,
    Acquitted,
}

impl Outcome {
    pub fn of(verdict: &Verdict) -> Outcome {
        if verdict.is_responsible() {
            Outcome::Responsible
        } else {
            Outcome::Acquitted
        }
    }

    fn from_word(word: &str) -> Option<Outcome> {
        match word {
            "responsible" => Some(Outcome::Responsible),
            "acquitted" => Some(Outcome::Acquitted),
            _ => None,
        }
    }

    /// Process exit status for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Responsible => 0,
            Outcome::Acquitted => 1,
        }
    }
}

/// What kind of mistake a [`FieldError`] reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldErrorKind {
    Unknown,
    WrongType,
    OutOfRange,
    Missing,
}

/// A problem with one field of a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub kind: FieldErrorKind,
    pub message: String,
}

impl FieldError {
    fn new(field: impl Into<String>, kind: FieldErrorKind, message: impl Into<String>) -> Self {
        FieldError { field: field.into(), kind, message: message.into() }
    }

    fn policy(field_prefix: &str, error: &PolicyError) -> Self {
        let kind = match error {
            PolicyError::UnknownKey(_) => FieldErrorKind::Unknown,
            PolicyError::WrongType { .. } => FieldErrorKind::WrongType,
            PolicyError::OutOfRange { .. } => FieldErrorKind::OutOfRange,
        };
        FieldError::new(format!("{field_prefix}.{}", error.key()), kind, error.to_string())
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{}", parse_message(.case, .errors))]
    Parse { case: String, errors: Vec<ParseError> },
    #[error("case {0} has no clauses")]
    EmptyCase(String),
    #[error("case {case}: {message}")]
    InvalidCase { case: String, message: String },
    #[error("{}", field_message(.0))]
    Invalid(Vec<FieldError>),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
    #[error("case {0} defines no preset scenarios")]
    NoPresets(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

fn parse_message(case: &str, errors: &[ParseError]) -> String {
    let lines: Vec<String> = errors.iter().map(|e| format!("{case}:{e}")).collect();
    lines.join("\n")
}

fn field_message(errors: &[FieldError]) -> String {
    let lines: Vec<String> = errors.iter().map(|e| format!("{}: {}", e.field, e.message)).collect();
    lines.join("; ")
}

impl ScenarioError {
    /// Field-level details when the scenario itself was at fault.
    pub fn fields(&self) -> &[FieldError] {
        match self {
            ScenarioError::Invalid(errors) => errors,
            _ => &[],
        }
    }

    /// The first offending field, if any.
    pub fn field(&self) -> Option<&str> {
        self.fields().first().map(|e| e.field.as_str())
    }

    /// True when every problem is a value outside the policy invariants.
    pub fn is_out_of_range(&self) -> bool {
        let fields = self.fields();
        !fields.is_empty() && fields.iter().all(|e| e.kind == FieldErrorKind::OutOfRange)
    }
}

/// One what-if question over a case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// Tags to keep; `None` keeps every tag of the case.
    #[serde(default, alias = "enabled", skip_serializing_if = "Option::is_none")]
    pub enabled_tags: Option<Vec<String>>,
    #[serde(default, alias = "reliability")]
    pub reliability_overrides: BTreeMap<String, Level>,
    #[serde(default, alias = "policy")]
    pub policy_overrides: BTreeMap<String, PolicyValue>,
    /// Defaults to the case's `suspect(...)` directive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspect: Option<String>,
    #[serde(default)]
    pub explain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TagInfo {
    pub tag: String,
    pub summary: Option<String>,
    /// Declared witnesses and sources mentioned by the tag's facts.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessInfo {
    pub name: String,
    pub reliability: Level,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preset {
    pub id: String,
    pub expected: Outcome,
    /// The request body that evaluates this preset.
    pub request: ScenarioSpec,
}

/// Everything a client needs to build scenarios for a case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseDescriptor {
    pub id: String,
    pub suspect: Option<String>,
    pub evidences: Vec<TagInfo>,
    pub witnesses: Vec<WitnessInfo>,
    pub policy: Policy,
    pub presets: Vec<Preset>,
}

#[derive(Clone, Debug)]
pub struct Case {
    descriptor: CaseDescriptor,
    program: SourceProgram,
    kb: KnowledgeBase,
}

fn collect_atoms<'t>(term: &'t Term, out: &mut BTreeSet<&'t str>) {
    match term {
        Term::Atom(name) => {
            out.insert(name);
        }
        Term::Compound(_, args) => args.iter().for_each(|a| collect_atoms(a, out)),
        _ => {}
    }
}

fn policy_from(pairs: &[(String, Term)], field: &str) -> Result<BTreeMap<String, PolicyValue>, String> {
    pairs
        .iter()
        .map(|(key, value)| match PolicyValue::from_term(value) {
            Some(v) => Ok((key.clone(), v)),
            None => Err(format!("{field} value {value} for {key} is not an integer or boolean")),
        })
        .collect()
}

impl Case {
    /// Parses case source; `id` names the case in reports and messages.
    pub fn parse(id: &str, text: &str) -> Result<Case, ScenarioError> {
        let program = parse_program(text).map_err(|errors| ScenarioError::Parse { case: id.to_string(), errors })?;
        if program.clauses.is_empty() {
            return Err(ScenarioError::EmptyCase(id.to_string()));
        }
        let invalid = |message: String| ScenarioError::InvalidCase { case: id.to_string(), message };
        let kb = KnowledgeBase::from_clauses(program.clauses.clone())?;

        let mut witnesses = BTreeMap::new();
        for clause in program.clauses.iter().filter(|c| c.is_fact()) {
            if let (Some(("reliable", 2)), [Term::Atom(name), Term::Atom(level)]) = (clause.head.key(), clause.head.args())
            {
                let level = Level::from_atom(level)
                    .ok_or_else(|| invalid(format!("reliability of {name} must be hi or lo, got {level}")))?;
                witnesses.entry(name.to_string()).or_insert(level);
            }
        }

        let mut evidences: Vec<TagInfo> = Vec::new();
        let mut suspect = None;
        let mut policy = Policy::default();
        let mut presets = Vec::new();
        for directive in program.directives() {
            match directive {
                Directive::Tag { id: tag, summary } => {
                    let mut atoms = BTreeSet::new();
                    for clause in program.clauses.iter().filter(|c| c.tag.as_deref() == Some(tag.as_str())) {
                        collect_atoms(&clause.head, &mut atoms);
                    }
                    evidences.push(TagInfo {
                        tag: tag.clone(),
                        summary: summary.clone(),
                        witnesses: atoms.into_iter().filter(|a| witnesses.contains_key(*a)).map(String::from).collect(),
                    });
                }
                Directive::Suspect(name) => suspect = Some(name.clone()),
                Directive::Policy(pairs) => {
                    for (key, value) in policy_from(pairs, "policy").map_err(invalid)? {
                        policy.set(&key, value).map_err(|e| invalid(e.to_string()))?;
                    }
                    policy.validate().map_err(|e| invalid(e.to_string()))?;
                }
                Directive::Scenario(preset) => {
                    let mut reliability_overrides = BTreeMap::new();
                    for (witness, level) in &preset.reliability {
                        let level = Level::from_atom(level).ok_or_else(|| {
                            invalid(format!("preset {}: reliability of {witness} must be hi or lo", preset.id))
                        })?;
                        reliability_overrides.insert(witness.clone(), level);
                    }
                    let expected = Outcome::from_word(&preset.expected)
                        .ok_or_else(|| invalid(format!("preset {}: unknown outcome {}", preset.id, preset.expected)))?;
                    if presets.iter().any(|p: &Preset| p.id == preset.id) {
                        return Err(invalid(format!("preset {} is defined twice", preset.id)));
                    }
                    presets.push(Preset {
                        id: preset.id.clone(),
                        expected,
                        request: ScenarioSpec {
                            enabled_tags: Some(preset.enabled_tags.clone()),
                            reliability_overrides,
                            policy_overrides: policy_from(&preset.policy, "scenario").map_err(invalid)?,
                            suspect: None,
                            explain: false,
                        },
                    });
                }
                Directive::EndTag => {}
            }
        }

        let descriptor = CaseDescriptor {
            id: id.to_string(),
            suspect,
            evidences,
            witnesses: witnesses.into_iter().map(|(name, reliability)| WitnessInfo { name, reliability }).collect(),
            policy,
            presets,
        };
        Ok(Case { descriptor, program, kb })
    }

    /// Reads a case file; the id is the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Case, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Case::parse(&id, &text)
    }

    pub fn id(&self) -> &str {
        &self.descriptor.id
    }

    pub fn descriptor(&self) -> &CaseDescriptor {
        &self.descriptor
    }

    pub fn program(&self) -> &SourceProgram {
        &self.program
    }

    /// The case facts, every tag enabled, without the rule pack.
    pub fn knowledge(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn preset(&self, id: &str) -> Option<&Preset> {
        self.descriptor.presets.iter().find(|p| p.id == id)
    }

    fn has_tag(&self, tag: &str) -> bool {
        self.descriptor.evidences.iter().any(|t| t.tag == tag)
    }

    /// Checks `spec` against the case and builds the scenario's knowledge
    /// base and policy. Every problem is reported, not only the first.
    pub fn prepare(&self, spec: &ScenarioSpec) -> Result<Prepared, ScenarioError> {
        let mut errors = Vec::new();
        let all_tags: Vec<String> = self.descriptor.evidences.iter().map(|t| t.tag.clone()).collect();
        let enabled: Vec<String> = match &spec.enabled_tags {
            None => all_tags.clone(),
            Some(tags) => {
                for tag in tags.iter().filter(|t| !self.has_tag(t)) {
                    errors.push(FieldError::new(
                        "enabled_tags",
                        FieldErrorKind::Unknown,
                        format!("unknown evidence tag {tag}"),
                    ));
                }
                all_tags.iter().filter(|t| tags.contains(t)).cloned().collect()
            }
        };
        for witness in spec.reliability_overrides.keys() {
            if !self.descriptor.witnesses.iter().any(|w| &w.name == witness) {
                errors.push(FieldError::new(
                    format!("reliability_overrides.{witness}"),
                    FieldErrorKind::Unknown,
                    format!("unknown witness {witness}"),
                ));
            }
        }
        let mut policy = self.descriptor.policy.clone();
        for (key, value) in &spec.policy_overrides {
            if let Err(e) = policy.set(key, *value) {
                errors.push(FieldError::policy("policy_overrides", &e));
            }
        }
        if let Err(e) = policy.validate() {
            errors.push(FieldError::policy("policy_overrides", &e));
        }
        let suspect = spec.suspect.clone().or_else(|| self.descriptor.suspect.clone());
        if suspect.is_none() {
            errors.push(FieldError::new(
                "suspect",
                FieldErrorKind::Missing,
                "no suspect given and the case declares none",
            ));
        }
        if !errors.is_empty() {
            return Err(ScenarioError::Invalid(errors));
        }

        let mut kb = self.kb.clone();
        for tag in all_tags.iter().filter(|t| !enabled.contains(t)) {
            kb = kb.set_enabled(tag, false)?;
        }
        let overridden = |clause: &Clause| {
            clause.head.key() == Some(("reliable", 2))
                && clause.head.args()[0].as_atom().is_some_and(|w| spec.reliability_overrides.contains_key(w))
        };
        kb = kb.set_enabled_where(overridden, false);
        kb = kb.load(spec.reliability_overrides.iter().map(|(witness, level)| {
            Clause::fact(Term::compound("reliable", vec![Term::atom(witness), Term::atom(level.as_str())]))
        }))?;

        Ok(Prepared {
            kb,
            policy,
            echo: ScenarioEcho {
                case: self.descriptor.id.clone(),
                suspect: suspect.unwrap_or_default(),
                enabled_tags: enabled,
                reliability_overrides: spec.reliability_overrides.clone(),
                policy_overrides: spec.policy_overrides.clone(),
                explain: spec.explain,
            },
        })
    }

    /// Adjudicates one scenario.
    pub fn run(&self, spec: &ScenarioSpec) -> Result<RunReport, ScenarioError> {
        let started = Instant::now();
        let prepared = self.prepare(spec)?;
        let judgment = rules::judge(&prepared.kb, &prepared.policy, &prepared.echo.suspect)?;
        let ruling = render_verdict(&judgment.verdict, DEFAULT_TEMPLATE)?;
        let kb = &judgment.knowledge;
        let finding = match &judgment.verdict {
            Verdict::Responsible(f) => Some(FindingReport {
                suspect: f.suspect.clone(),
                perpetrator: f.perpetrator_alias.clone(),
                crime: f.crime.to_string(),
                date: rules::format_date(&f.date),
                place: plain(&f.place),
                crime_evidence: f.crime_evidence.goal.to_string(),
            }),
            Verdict::Acquitted { .. } => None,
        };
        let proof = match (&judgment.proof, spec.explain) {
            (Some(node), true) => Some(ProofReport::new(node, kb)),
            _ => None,
        };
        Ok(RunReport {
            verdict: Outcome::of(&judgment.verdict),
            ground: judgment.verdict.ground().map(|g| g.text().to_string()),
            finding,
            evidences: judgment.assessments.iter().map(EvidenceReport::from).collect(),
            proof,
            ruling,
            policy: prepared.policy,
            scenario: prepared.echo,
            timings: Timings { total_ms: started.elapsed().as_secs_f64() * 1000.0 },
        })
    }

    /// Evaluates the stored preset `id`.
    pub fn run_preset(&self, id: &str, explain: bool) -> Result<RunReport, ScenarioError> {
        let preset = self.preset(id).ok_or_else(|| ScenarioError::UnknownPreset(id.to_string()))?;
        self.run(&ScenarioSpec { explain, ..preset.request.clone() })
    }

    /// Runs every preset and compares with its expected outcome. Preset tags
    /// missing from the case count as disabled evidence, so a file with an
    /// evidence removed still runs and reports the changed answers.
    pub fn run_suite(&self) -> Result<Vec<SuiteRow>, ScenarioError> {
        if self.descriptor.presets.is_empty() {
            return Err(ScenarioError::NoPresets(self.descriptor.id.clone()));
        }
        self.descriptor
            .presets
            .iter()
            .map(|preset| {
                let mut request = preset.request.clone();
                if let Some(tags) = &mut request.enabled_tags {
                    tags.retain(|t| self.has_tag(t));
                }
                let actual = self.run(&request)?.verdict;
                Ok(SuiteRow { id: preset.id.clone(), expected: preset.expected, actual, pass: actual == preset.expected })
            })
            .collect()
    }
}

/// Loads `path` and runs its presets.
pub fn run_suite(path: impl AsRef<Path>) -> Result<Vec<SuiteRow>, ScenarioError> {
    Case::load(path)?.run_suite()
}

/// A validated scenario ready for adjudication.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub kb: KnowledgeBase,
    pub policy: Policy,
    pub echo: ScenarioEcho,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub id: String,
    pub expected: Outcome,
    pub actual: Outcome,
    pub pass: bool,
}

/// The scenario as it was understood, after defaults were applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioEcho {
    pub case: String,
    pub suspect: String,
    pub enabled_tags: Vec<String>,
    pub reliability_overrides: BTreeMap<String, Level>,
    pub policy_overrides: BTreeMap<String, PolicyValue>,
    pub explain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvidenceReport {
    pub descriptor: String,
    pub severity: Level,
    pub precision: Level,
    pub supporting_tags: Vec<String>,
}

impl From<&EvidenceAssessment> for EvidenceReport {
    fn from(a: &EvidenceAssessment) -> Self {
        EvidenceReport {
            descriptor: a.descriptor.to_string(),
            severity: a.severity,
            precision: a.precision,
            supporting_tags: a.supporting_tags.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FindingReport {
    pub suspect: String,
    pub perpetrator: String,
    pub crime: String,
    pub date: String,
    pub place: String,
    /// The established `committed/5` goal.
    pub crime_evidence: String,
}

/// A proof node with the clause that justified it spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub goal: String,
    /// `fact`, `rule`, `builtin`, `naf` or `conjunction`.
    pub by: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ProofReport>,
}

impl ProofReport {
    pub fn new(node: &ProofNode, kb: &KnowledgeBase) -> Self {
        let (by, index) = match &node.justification {
            Justification::Fact { clause } => ("fact", Some(*clause)),
            Justification::Rule { clause, .. } => ("rule", Some(*clause)),
            Justification::Builtin => ("builtin", None),
            Justification::NafSuccess => ("naf", None),
            Justification::Conjunction => ("conjunction", None),
        };
        let clause = index.map(|i| kb.clause(i));
        ProofReport {
            goal: node.goal.to_string(),
            by,
            clause: clause.filter(|c| !c.is_fact()).map(format_clause),
            tag: clause.and_then(|c| c.tag.as_deref().map(String::from)),
            children: node.children.iter().map(|c| ProofReport::new(c, kb)).collect(),
        }
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        let mut note = self.by.to_string();
        if let Some(tag) = &self.tag {
            let _ = write!(note, ", {tag}");
        }
        let _ = writeln!(out, "{:indent$}{}  [{note}]", "", self.goal, indent = 2 * depth + 2);
        for child in &self.children {
            child.write_text(depth + 1, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// Result of one scenario, shared by the CLI's structured output and the
/// service's responses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub verdict: Outcome,
    /// Reason for acquittal.
    pub ground: Option<String>,
    pub finding: Option<FindingReport>,
    /// Identity evidences between the suspect and the perpetrator.
    pub evidences: Vec<EvidenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<ProofReport>,
    /// The ruling text from the default template.
    pub ruling: String,
    pub policy: Policy,
    pub scenario: ScenarioEcho,
    pub timings: Timings,
}

fn plain(term: &Term) -> String {
    term.as_atom().map(String::from).unwrap_or_else(|| term.to_string())
}

impl RunReport {
    /// The JSON form with timings removed, for comparisons.
    pub fn without_timings(&self) -> serde_json::Value {
        let mut value = serde_json::to_value(self).expect("reports serialize");
        if let Some(map) = value.as_object_mut() {
            map.remove("timings");
        }
        value
    }

    /// Human-readable form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.scenario;
        let _ = writeln!(out, "Case: {}", s.case);
        let _ = writeln!(out, "Suspect: {}", s.suspect);
        let _ = writeln!(out, "Enabled evidences: {}", list_or_none(&s.enabled_tags));
        if !s.reliability_overrides.is_empty() {
            let items: Vec<String> = s.reliability_overrides.iter().map(|(w, l)| format!("{w}={l}")).collect();
            let _ = writeln!(out, "Reliability overrides: {}", items.join(", "));
        }
        let policy: Vec<String> = self.policy.values().iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "Policy: {}", policy.join(", "));
        let _ = writeln!(out);
        match &self.ground {
            Some(ground) => {
                let _ = writeln!(out, "Verdict: {:?} ({ground})", self.verdict);
            }
            None => {
                let _ = writeln!(out, "Verdict: {:?}", self.verdict);
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "Identity evidences:");
        if self.evidences.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for e in &self.evidences {
            let _ = writeln!(
                out,
                "  - {}: severity {}, precision {} (evidences {})",
                e.descriptor,
                e.severity,
                e.precision,
                list_or_none(&e.supporting_tags)
            );
        }
        let _ = writeln!(out);
        out.push_str(self.ruling.trim_end());
        out.push('\n');
        if let Some(proof) = &self.proof {
            let _ = writeln!(out);
            let _ = writeln!(out, "Proof:");
            proof.write_text(0, &mut out);
        }
        out
    }
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}
