//! Knowledge base and SLD-resolution solver.
//!
//! The solver is depth-first, selects the leftmost literal and tries clauses
//! in insertion order. Negation is negation as failure and is only allowed
//! on ground goals. A predicate with no clauses simply has no solutions:
//! the knowledge base is read under the closed-world assumption.

mod builtins;
mod clause;
mod kb;
mod solve;

use thiserror::Error;

use crate::term::Term;

pub use builtins::{date_minutes, eval_builtin, is_builtin, table as builtin_table};
pub use clause::{rename_apart, Clause, Literal};
pub use kb::KnowledgeBase;
pub use solve::{Justification, Limits, ProofNode, Solutions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("depth limit of {max_depth} exceeded (possible non-terminating rule)")]
    DepthLimitExceeded { max_depth: usize },
    #[error("negation of non-ground goal {goal}")]
    NonGroundNaf { goal: Term },
    #[error("{builtin}: argument is not sufficiently instantiated")]
    Instantiation { builtin: String },
    #[error("{builtin}: {message}")]
    Type { builtin: String, message: String },
    #[error("clause head {head} is not callable")]
    MalformedClause { head: Term },
    #[error("unknown evidence tag {0}")]
    UnknownTag(String),
}
