use thiserror::Error;

use crate::engine::ProofNode;
use crate::term::Term;

use super::EvidenceAssessment;

/// The default ruling template.
pub const DEFAULT_TEMPLATE: &str = include_str!("../../templates/ruling.txt");

/// Grounds for acquittal when identity or the crime is not established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcquittalGround {
    NoEvidence,
    InsufficientEvidence,
}

impl AcquittalGround {
    pub fn text(self) -> &'static str {
        match self {
            AcquittalGround::NoEvidence => "there is no evidence of the crime",
            AcquittalGround::InsufficientEvidence => "the evidence is not sufficient",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub suspect: String,
    pub perpetrator_alias: String,
    pub crime: Term,
    pub date: Term,
    pub place: Term,
    pub crime_evidence: ProofNode,
    pub identity_evidences: Vec<EvidenceAssessment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Responsible(Box<Finding>),
    Acquitted { suspect: String, ground: AcquittalGround },
}

impl Verdict {
    pub fn is_responsible(&self) -> bool {
        matches!(self, Verdict::Responsible(_))
    }

    pub fn ground(&self) -> Option<AcquittalGround> {
        match self {
            Verdict::Acquitted { ground, .. } => Some(*ground),
            Verdict::Responsible(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unknown placeholder {{{0}}}")]
    UnknownPlaceholder(String),
    #[error("unclosed placeholder starting at byte {0}")]
    Unclosed(usize),
}

const PLACEHOLDERS: [&str; 7] = ["suspect", "perpetrator", "crime", "date", "place", "evidences", "ground"];

/// A ruling template with one section per outcome.
///
/// Sections start with a `[responsible]` or `[acquitted]` line. Text before
/// any header is shared by both outcomes. Placeholders are written
/// `{name}`; `{{` and `}}` produce literal braces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulingTemplate {
    responsible: String,
    acquitted: String,
}

impl RulingTemplate {
    pub fn parse(text: &str) -> Result<Self, RenderError> {
        let mut shared = String::new();
        let mut responsible = None::<String>;
        let mut acquitted = None::<String>;
        let mut current: Option<&mut String> = None;
        for line in text.split_inclusive('\n') {
            match line.trim() {
                "[responsible]" => current = Some(responsible.insert(String::new())),
                "[acquitted]" => current = Some(acquitted.insert(String::new())),
                _ => match current.as_deref_mut() {
                    Some(section) => section.push_str(line),
                    None => shared.push_str(line),
                },
            }
        }
        let template = RulingTemplate {
            responsible: responsible.unwrap_or_else(|| shared.clone()),
            acquitted: acquitted.unwrap_or(shared),
        };
        for section in [&template.responsible, &template.acquitted] {
            substitute(section, |_| Some(String::new()))?;
        }
        Ok(template)
    }
}

impl Default for RulingTemplate {
    fn default() -> Self {
        RulingTemplate::parse(DEFAULT_TEMPLATE).expect("default template is valid")
    }
}

fn substitute(template: &str, lookup: impl Fn(&str) -> Option<String>) -> Result<String, RenderError> {
    let mut out = String::new();
    let mut rest = template;
    let mut offset = 0;
    while let Some(i) = rest.find(['{', '}']) {
        out.push_str(&rest[..i]);
        let tail = &rest[i..];
        if tail.starts_with("{{") || tail.starts_with("}}") {
            out.push_str(&tail[..1]);
            rest = &tail[2..];
            offset += i + 2;
            continue;
        }
        if tail.starts_with('}') {
            return Err(RenderError::Unclosed(offset + i));
        }
        let close = tail.find('}').ok_or(RenderError::Unclosed(offset + i))?;
        let name = &tail[1..close];
        if !PLACEHOLDERS.contains(&name) {
            return Err(RenderError::UnknownPlaceholder(name.to_string()));
        }
        out.push_str(&lookup(name).unwrap_or_default());
        rest = &tail[close + 1..];
        offset += i + close + 1;
    }
    out.push_str(rest);
    Ok(out)
}

/// Calendar form of a `date(Y, Mo, D, H, Mi)` term; other terms print as is.
pub fn format_date(date: &Term) -> String {
    match date.args() {
        [Term::Int(y), Term::Int(mo), Term::Int(d), Term::Int(h), Term::Int(mi)]
            if date.key() == Some(("date", 5)) =>
        {
            format!("{y:04}-{mo:02}-{d:02} {h:02}:{mi:02}")
        }
        _ => date.to_string(),
    }
}

fn plain(term: &Term) -> String {
    match term {
        Term::Atom(name) => name.to_string(),
        other => other.to_string(),
    }
}

/// One line per evidence: descriptor, levels and supporting tags.
pub fn evidence_lines(evidences: &[EvidenceAssessment]) -> String {
    evidences
        .iter()
        .map(|e| {
            format!(
                "  - {}: severity {}, precision {} (evidences {})",
                e.descriptor,
                e.severity,
                e.precision,
                e.supporting_tags.join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Fills `template` for `verdict`.
pub fn render_verdict(verdict: &Verdict, template: &str) -> Result<String, RenderError> {
    let template = RulingTemplate::parse(template)?;
    match verdict {
        Verdict::Responsible(f) => substitute(&template.responsible, |name| {
            Some(match name {
                "suspect" => f.suspect.clone(),
                "perpetrator" => f.perpetrator_alias.clone(),
                "crime" => plain(&f.crime),
                "date" => format_date(&f.date),
                "place" => plain(&f.place),
                "evidences" => evidence_lines(&f.identity_evidences),
                _ => return None,
            })
        }),
        Verdict::Acquitted { suspect, ground } => substitute(&template.acquitted, |name| match name {
            "suspect" => Some(suspect.clone()),
            "ground" => Some(ground.text().to_string()),
            _ => None,
        }),
    }
}
