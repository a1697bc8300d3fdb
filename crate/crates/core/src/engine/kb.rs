use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::term::Term;

use super::builtins;
use super::clause::{Clause, Literal};
use super::EngineError;

type Key = (Arc<str>, usize);

/// An immutable snapshot of clauses, indexed by functor and arity.
///
/// Cloning is cheap. [`load`](Self::load) and [`set_enabled`](Self::set_enabled)
/// return new snapshots and leave the receiver untouched.
#[derive(Clone, Debug, Default)]
pub struct KnowledgeBase {
    clauses: Arc<Vec<Clause>>,
    index: Arc<BTreeMap<Key, Vec<usize>>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> Result<Self, EngineError> {
        KnowledgeBase::new().load(clauses)
    }

    /// Appends clauses in order. Fails on a clause whose head is not callable.
    pub fn load(&self, clauses: impl IntoIterator<Item = Clause>) -> Result<Self, EngineError> {
        let mut all = (*self.clauses).clone();
        let mut index = (*self.index).clone();
        for clause in clauses {
            let Some((name, arity)) = clause.head.key() else {
                return Err(EngineError::MalformedClause { head: clause.head.clone() });
            };
            index.entry((name.into(), arity)).or_default().push(all.len());
            all.push(clause);
        }
        Ok(KnowledgeBase { clauses: Arc::new(all), index: Arc::new(index) })
    }

    /// Enables or disables every clause carrying `tag`.
    pub fn set_enabled(&self, tag: &str, on: bool) -> Result<Self, EngineError> {
        if !self.tags().contains(tag) {
            return Err(EngineError::UnknownTag(tag.to_string()));
        }
        Ok(self.set_enabled_where(|c| c.tag.as_deref() == Some(tag), on))
    }

    /// Enables or disables every clause matching `pred`.
    pub fn set_enabled_where(&self, pred: impl Fn(&Clause) -> bool, on: bool) -> Self {
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let mut c = c.clone();
                if pred(&c) {
                    c.enabled = on;
                }
                c
            })
            .collect();
        KnowledgeBase { clauses: Arc::new(clauses), index: self.index.clone() }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> &Clause {
        &self.clauses[index]
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Indices of the enabled clauses for a predicate, in insertion order.
    pub fn candidates<'a>(&'a self, name: &str, arity: usize) -> impl Iterator<Item = usize> + 'a {
        self.index
            .get(&(Arc::from(name), arity))
            .into_iter()
            .flatten()
            .copied()
            .filter(|&i| self.clauses[i].enabled)
    }

    /// Number of clauses (enabled or not) stored under a predicate.
    pub fn count(&self, name: &str, arity: usize) -> usize {
        self.index.get(&(Arc::from(name), arity)).map_or(0, Vec::len)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.index.keys().map(|(n, a)| (&**n, *a))
    }

    pub fn tags(&self) -> BTreeSet<&str> {
        self.clauses.iter().filter_map(|c| c.tag.as_deref()).collect()
    }

    /// Predicates called from some clause body but defined by no clause and
    /// not builtin. Solving treats them as false; this only reports them.
    pub fn undefined_predicates(&self) -> Vec<(String, usize)> {
        let mut missing = BTreeSet::new();
        for clause in self.clauses.iter() {
            for lit in &clause.body {
                let goal = match lit {
                    Literal::Call(t) | Literal::Naf(t) => t,
                    Literal::Builtin(..) => continue,
                };
                if let Some((name, arity)) = goal.key() {
                    if self.count(name, arity) == 0
                        && !builtins::is_builtin(name, arity)
                        && !is_control(goal)
                    {
                        missing.insert((name.to_string(), arity));
                    }
                }
            }
        }
        missing.into_iter().collect()
    }
}

fn is_control(goal: &Term) -> bool {
    matches!(goal.key(), Some((",", 2)) | Some(("true", 0)) | Some(("fail", 0)))
}
