use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::Clause;
use crate::term::Term;

/// Thresholds of the evidence-aggregation rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    /// Identity requires strictly more distinct evidences than this.
    pub min_evidence_count: i64,
    /// Identity also requires one evidence that is both severe and precise.
    pub require_severe_precise: bool,
    /// Largest gap between two sightings on one vehicle that still counts as
    /// the same rider.
    pub colocation_window_minutes: i64,
    /// Largest distance in time between a recording at the scene and the crime.
    pub scene_window_minutes: i64,
    /// Minimum confidence of an expert attribution of words to a place.
    pub corroboration_threshold_pct: i64,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            min_evidence_count: 1,
            require_severe_precise: true,
            colocation_window_minutes: 10,
            scene_window_minutes: 15,
            corroboration_threshold_pct: 80,
        }
    }
}

/// A policy value as written in case files and request bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolicyValue {
    Bool(bool),
    Int(i64),
}

impl fmt::Display for PolicyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyValue::Bool(b) => write!(f, "{b}"),
            PolicyValue::Int(i) => write!(f, "{i}"),
        }
    }
}

impl PolicyValue {
    pub fn from_term(term: &Term) -> Option<Self> {
        match term {
            Term::Int(i) => Some(PolicyValue::Int(*i)),
            Term::Atom(a) if &**a == "true" => Some(PolicyValue::Bool(true)),
            Term::Atom(a) if &**a == "false" => Some(PolicyValue::Bool(false)),
            _ => None,
        }
    }

    /// Parses `true`, `false` or an integer.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "true" => Some(PolicyValue::Bool(true)),
            "false" => Some(PolicyValue::Bool(false)),
            other => other.parse().ok().map(PolicyValue::Int),
        }
    }

    fn to_term(self) -> Term {
        match self {
            PolicyValue::Bool(b) => Term::atom(if b { "true" } else { "false" }),
            PolicyValue::Int(i) => Term::int(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("unknown policy key {0}")]
    UnknownKey(String),
    #[error("policy key {key} expects {expected}")]
    WrongType { key: String, expected: &'static str },
    #[error("policy key {key} {requirement}, got {value}")]
    OutOfRange { key: String, requirement: &'static str, value: i64 },
}

impl PolicyError {
    pub fn key(&self) -> &str {
        match self {
            PolicyError::UnknownKey(key)
            | PolicyError::WrongType { key, .. }
            | PolicyError::OutOfRange { key, .. } => key,
        }
    }
}

pub const POLICY_KEYS: [&str; 5] = [
    "min_evidence_count",
    "require_severe_precise",
    "colocation_window_minutes",
    "scene_window_minutes",
    "corroboration_threshold_pct",
];

impl Policy {
    /// Sets one key. Range checks are left to [`validate`](Self::validate).
    pub fn set(&mut self, key: &str, value: PolicyValue) -> Result<(), PolicyError> {
        let wrong = |expected| PolicyError::WrongType { key: key.to_string(), expected };
        match (key, value) {
            ("require_severe_precise", PolicyValue::Bool(b)) => self.require_severe_precise = b,
            ("require_severe_precise", _) => return Err(wrong("true or false")),
            (_, PolicyValue::Int(v)) => match key {
                "min_evidence_count" => self.min_evidence_count = v,
                "colocation_window_minutes" => self.colocation_window_minutes = v,
                "scene_window_minutes" => self.scene_window_minutes = v,
                "corroboration_threshold_pct" => self.corroboration_threshold_pct = v,
                _ => return Err(PolicyError::UnknownKey(key.to_string())),
            },
            (_, PolicyValue::Bool(_)) if POLICY_KEYS.contains(&key) => return Err(wrong("an integer")),
            _ => return Err(PolicyError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        let check = |key: &str, value: i64, ok: bool, requirement| {
            if ok {
                Ok(())
            } else {
                Err(PolicyError::OutOfRange { key: key.to_string(), requirement, value })
            }
        };
        let n = self.min_evidence_count;
        check("min_evidence_count", n, n >= 0, "must be at least 0")?;
        let w = self.colocation_window_minutes;
        check("colocation_window_minutes", w, w >= 0, "must be at least 0")?;
        let w = self.scene_window_minutes;
        check("scene_window_minutes", w, w >= 0, "must be at least 0")?;
        let t = self.corroboration_threshold_pct;
        check("corroboration_threshold_pct", t, (0..=100).contains(&t), "must be between 0 and 100")
    }

    pub fn values(&self) -> [(&'static str, PolicyValue); 5] {
        [
            ("min_evidence_count", PolicyValue::Int(self.min_evidence_count)),
            ("require_severe_precise", PolicyValue::Bool(self.require_severe_precise)),
            ("colocation_window_minutes", PolicyValue::Int(self.colocation_window_minutes)),
            ("scene_window_minutes", PolicyValue::Int(self.scene_window_minutes)),
            ("corroboration_threshold_pct", PolicyValue::Int(self.corroboration_threshold_pct)),
        ]
    }

    /// The `policy_setting(Key, Value)` facts the rule pack reads.
    pub fn facts(&self) -> Vec<Clause> {
        self.values()
            .into_iter()
            .map(|(key, value)| {
                Clause::fact(Term::compound("policy_setting", vec![Term::atom(key), value.to_term()]))
            })
            .collect()
    }
}
