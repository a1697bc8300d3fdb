use std::collections::BTreeMap;
use std::sync::Arc;

use crate::term::{unify, Substitution, Term};

use super::builtins::{self, eval_builtin};
use super::clause::{rename_apart, Clause, Literal};
use super::kb::KnowledgeBase;
use super::EngineError;

/// Bounds on a single solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum height of a proof tree before the solver gives up with
    /// [`EngineError::DepthLimitExceeded`].
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_depth: 10_000 }
    }
}

/// Why a proof node holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Matched a fact, by index into the knowledge base.
    Fact { clause: usize },
    /// Resolved against a rule; the children prove its body literals in order.
    Rule { clause: usize, head: Term },
    Builtin,
    /// The goal has no proof.
    NafSuccess,
    /// A parenthesised conjunction; children prove each conjunct.
    Conjunction,
}

/// A derivation tree. Goals are fully instantiated by the solution that
/// produced the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub goal: Term,
    pub justification: Justification,
    pub children: Vec<ProofNode>,
}

impl ProofNode {
    /// Preorder walk over the tree.
    pub fn walk(&self) -> Vec<&ProofNode> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.walk());
        }
        out
    }

    /// Knowledge-base indices of every clause used in the proof.
    pub fn clauses_used(&self) -> Vec<usize> {
        self.walk()
            .into_iter()
            .filter_map(|n| match n.justification {
                Justification::Fact { clause } | Justification::Rule { clause, .. } => Some(clause),
                _ => None,
            })
            .collect()
    }

    /// First node (preorder) whose goal has the given functor and arity.
    pub fn find(&self, name: &str, arity: usize) -> Option<&ProofNode> {
        self.walk().into_iter().find(|n| n.goal.key() == Some((name, arity)))
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(ProofNode::height).max().unwrap_or(0)
    }
}

/// Persistent singly linked list; pushing shares the tail.
struct PList<T>(Option<Arc<(T, PList<T>)>>);

impl<T> Clone for PList<T> {
    fn clone(&self) -> Self {
        PList(self.0.clone())
    }
}

impl<T> PList<T> {
    fn empty() -> Self {
        PList(None)
    }

    fn push(&self, item: T) -> Self {
        PList(Some(Arc::new((item, self.clone()))))
    }

    fn split(&self) -> Option<(&T, &PList<T>)> {
        self.0.as_deref().map(|(head, tail)| (head, tail))
    }

    fn iter(&self) -> impl Iterator<Item = &T> {
        let mut cursor = self;
        std::iter::from_fn(move || {
            let (head, tail) = cursor.split()?;
            cursor = tail;
            Some(head)
        })
    }
}

#[derive(Clone)]
struct GoalItem {
    literal: Literal,
    parent: Option<usize>,
    depth: usize,
}

struct TraceEntry {
    id: usize,
    parent: Option<usize>,
    goal: Term,
    justification: Justification,
}

#[derive(Clone)]
struct State {
    goals: PList<GoalItem>,
    subst: Substitution,
    trace: PList<TraceEntry>,
    nodes: usize,
}

impl State {
    fn record(&self, parent: Option<usize>, goal: Term, justification: Justification) -> (State, usize) {
        let id = self.nodes;
        let trace = self.trace.push(TraceEntry { id, parent, goal, justification });
        (State { goals: self.goals.clone(), subst: self.subst.clone(), trace, nodes: id + 1 }, id)
    }

    fn with_goals(mut self, goals: PList<GoalItem>, subst: Substitution) -> State {
        self.goals = goals;
        self.subst = subst;
        self
    }
}

fn push_all(rest: &PList<GoalItem>, literals: &[Literal], parent: usize, depth: usize) -> PList<GoalItem> {
    literals.iter().rev().fold(rest.clone(), |acc, literal| {
        acc.push(GoalItem { literal: literal.clone(), parent: Some(parent), depth })
    })
}

/// Lazy, depth-first enumeration of the proofs of a goal.
///
/// Goals are selected leftmost first and clauses tried in insertion order.
/// After an error the iterator is exhausted.
pub struct Solutions<'kb> {
    kb: &'kb KnowledgeBase,
    query_vars: Vec<Arc<str>>,
    stack: Vec<State>,
    counter: usize,
    limits: Limits,
    finished: bool,
}

impl<'kb> Solutions<'kb> {
    fn start(kb: &'kb KnowledgeBase, goal: &Term, limits: Limits, counter: usize) -> Self {
        let root = State {
            goals: PList::empty().push(GoalItem { literal: Literal::from_term(goal.clone()), parent: None, depth: 1 }),
            subst: Substitution::new(),
            trace: PList::empty(),
            nodes: 0,
        };
        Solutions {
            kb,
            query_vars: goal.variables(),
            stack: vec![root],
            counter,
            limits,
            finished: false,
        }
    }

    fn nested(&self, goal: &Term, depth: usize) -> Solutions<'kb> {
        let limits = Limits { max_depth: self.limits.max_depth.saturating_sub(depth) };
        Solutions::start(self.kb, goal, limits, self.counter)
    }

    fn expand(&mut self, state: State) -> Result<Vec<State>, EngineError> {
        let (item, rest) = match state.goals.split() {
            Some((item, rest)) => (item.clone(), rest.clone()),
            None => return Ok(vec![]),
        };
        if item.depth > self.limits.max_depth {
            return Err(EngineError::DepthLimitExceeded { max_depth: self.limits.max_depth });
        }
        let subst = state.subst.clone();
        let state = state.with_goals(rest.clone(), subst);
        match &item.literal {
            Literal::Call(goal) => {
                let goal = state.subst.apply(goal);
                match &goal {
                    Term::Var(_) => Err(EngineError::Instantiation { builtin: "call".into() }),
                    Term::Compound(name, args) if &**name == "," && args.len() == 2 => {
                        let (next, id) = state.record(item.parent, goal.clone(), Justification::Conjunction);
                        let lits = [Literal::from_term(args[0].clone()), Literal::from_term(args[1].clone())];
                        let goals = push_all(&rest, &lits, id, item.depth + 1);
                        let subst = next.subst.clone();
                        Ok(vec![next.with_goals(goals, subst)])
                    }
                    Term::Atom(name) if &**name == "true" => {
                        Ok(vec![state.record(item.parent, goal.clone(), Justification::Builtin).0])
                    }
                    Term::Atom(name) if &**name == "fail" => Ok(vec![]),
                    _ => match Literal::from_term(goal.clone()) {
                        Literal::Call(goal) => self.resolve(&state, &item, &goal, &rest),
                        // A call bound at runtime to a builtin or negation.
                        other => {
                            let item = GoalItem { literal: other, ..item };
                            let subst = state.subst.clone();
                            self.expand(state.with_goals(rest.push(item), subst))
                        }
                    },
                }
            }
            Literal::Naf(goal) => {
                let goal = state.subst.apply(goal);
                if !goal.is_ground() {
                    return Err(EngineError::NonGroundNaf { goal });
                }
                let mut inner = self.nested(&goal, item.depth);
                let first = inner.next();
                self.counter = inner.counter;
                match first {
                    Some(Err(e)) => Err(e),
                    Some(Ok(_)) => Ok(vec![]),
                    None => Ok(vec![state.record(item.parent, goal, Justification::NafSuccess).0]),
                }
            }
            Literal::Builtin(name, args) if &**name == "setof" => {
                let template = state.subst.apply(&args[0]);
                let goal = state.subst.apply(&args[1]);
                let mut inner = self.nested(&goal, item.depth);
                let collected = collect_from(&mut inner, &template);
                self.counter = inner.counter;
                let Some(items) = collected? else { return Ok(vec![]) };
                let Some(subst) = unify(&args[2], &Term::list(items), &state.subst) else {
                    return Ok(vec![]);
                };
                let shown = Term::Compound(name.clone(), args.clone());
                let (next, _) = state.record(item.parent, shown, Justification::Builtin);
                Ok(vec![next.with_goals(rest, subst)])
            }
            Literal::Builtin(name, args) => {
                let shown = Term::Compound(name.clone(), args.clone());
                let (next, _) = state.record(item.parent, shown, Justification::Builtin);
                Ok(eval_builtin(name, args, &state.subst)?
                    .into_iter()
                    .map(|subst| next.clone().with_goals(rest.clone(), subst))
                    .collect())
            }
        }
    }

    fn resolve(&mut self, state: &State, item: &GoalItem, goal: &Term, rest: &PList<GoalItem>) -> Result<Vec<State>, EngineError> {
        let (name, arity) = goal.key().ok_or_else(|| EngineError::Type {
            builtin: "call".into(),
            message: format!("not callable: {goal}"),
        })?;
        let mut out = Vec::new();
        for index in self.kb.candidates(name, arity) {
            let stored: &Clause = self.kb.clause(index);
            let clause = rename_apart(stored, &mut self.counter);
            let Some(subst) = unify(&clause.head, goal, &state.subst) else { continue };
            let justification = if clause.is_fact() {
                Justification::Fact { clause: index }
            } else {
                Justification::Rule { clause: index, head: stored.head.clone() }
            };
            let (next, id) = state.record(item.parent, goal.clone(), justification);
            let goals = push_all(rest, &clause.body, id, item.depth + 1);
            out.push(next.with_goals(goals, subst));
        }
        Ok(out)
    }

    fn build_proof(&self, state: &State) -> ProofNode {
        let mut entries: Vec<&TraceEntry> = state.trace.iter().collect();
        entries.reverse();
        let mut children: BTreeMap<Option<usize>, Vec<usize>> = BTreeMap::new();
        for (pos, entry) in entries.iter().enumerate() {
            debug_assert_eq!(entry.id, pos);
            children.entry(entry.parent).or_default().push(entry.id);
        }
        fn build(
            id: usize,
            entries: &[&TraceEntry],
            children: &BTreeMap<Option<usize>, Vec<usize>>,
            subst: &Substitution,
        ) -> ProofNode {
            let entry = entries[id];
            ProofNode {
                goal: subst.apply(&entry.goal),
                justification: match &entry.justification {
                    Justification::Rule { clause, head } => {
                        Justification::Rule { clause: *clause, head: head.clone() }
                    }
                    other => other.clone(),
                },
                children: children
                    .get(&Some(id))
                    .into_iter()
                    .flatten()
                    .map(|&child| build(child, entries, children, subst))
                    .collect(),
            }
        }
        let root = children.get(&None).and_then(|ids| ids.first()).copied().unwrap_or(0);
        build(root, &entries, &children, &state.subst)
    }
}

impl Iterator for Solutions<'_> {
    type Item = Result<(Substitution, ProofNode), EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        while let Some(state) = self.stack.pop() {
            if state.goals.split().is_none() {
                let proof = self.build_proof(&state);
                return Some(Ok((state.subst.restrict(&self.query_vars), proof)));
            }
            match self.expand(state) {
                Ok(next) => self.stack.extend(next.into_iter().rev()),
                Err(e) => {
                    self.finished = true;
                    self.stack.clear();
                    return Some(Err(e));
                }
            }
        }
        self.finished = true;
        None
    }
}

fn collect_from(solutions: &mut Solutions<'_>, template: &Term) -> Result<Option<Vec<Term>>, EngineError> {
    let mut items = Vec::new();
    for solution in solutions {
        let (subst, _) = solution?;
        items.push(subst.apply(template));
    }
    if items.is_empty() {
        return Ok(None);
    }
    items.sort();
    items.dedup();
    Ok(Some(items))
}

impl KnowledgeBase {
    /// Enumerates the proofs of `goal`, lazily.
    pub fn solve(&self, goal: &Term, limits: Limits) -> Solutions<'_> {
        Solutions::start(self, goal, limits, 0)
    }

    /// Negation as failure: true iff `goal` has no proof.
    pub fn solve_naf(&self, goal: &Term) -> Result<bool, EngineError> {
        if !goal.is_ground() {
            return Err(EngineError::NonGroundNaf { goal: goal.clone() });
        }
        match self.solve(goal, Limits::default()).next() {
            None => Ok(true),
            Some(Ok(_)) => Ok(false),
            Some(Err(e)) => Err(e),
        }
    }

    /// Distinct instances of `template` over the proofs of `goal`, sorted by
    /// the standard order of terms. `None` when the goal has no proof.
    pub fn collect_distinct(&self, template: &Term, goal: &Term) -> Result<Option<Vec<Term>>, EngineError> {
        collect_from(&mut self.solve(goal, Limits::default()), template)
    }

    /// Re-checks a proof tree against this knowledge base: every rule node
    /// must unify with a fresh copy of its clause whose body matches the
    /// children, every fact node with its fact, and builtin and negation
    /// nodes must still succeed.
    pub fn replay(&self, node: &ProofNode) -> bool {
        // Fresh names far above any counter a solve reaches.
        let mut counter = usize::MAX / 2;
        self.replay_node(node, &mut counter)
    }

    fn replay_node(&self, node: &ProofNode, counter: &mut usize) -> bool {
        let children_ok = |counter: &mut usize| node.children.iter().all(|c| self.replay_node(c, counter));
        match &node.justification {
            Justification::Fact { clause } => {
                let Some(stored) = self.clauses().get(*clause) else { return false };
                let fresh = rename_apart(stored, counter);
                node.children.is_empty()
                    && stored.is_fact()
                    && unify(&fresh.head, &node.goal, &Substitution::new()).is_some()
            }
            Justification::Rule { clause, head } => {
                let Some(stored) = self.clauses().get(*clause) else { return false };
                if &stored.head != head || stored.body.len() != node.children.len() {
                    return false;
                }
                let fresh = rename_apart(stored, counter);
                let mut subst = match unify(&fresh.head, &node.goal, &Substitution::new()) {
                    Some(s) => s,
                    None => return false,
                };
                for (literal, child) in fresh.body.iter().zip(&node.children) {
                    let expected = match literal {
                        Literal::Naf(t) => t.clone(),
                        other => other.to_term(),
                    };
                    match unify(&expected, &child.goal, &subst) {
                        Some(s) => subst = s,
                        None => return false,
                    }
                }
                children_ok(counter)
            }
            Justification::Conjunction => {
                let parts = match node.goal.key() {
                    Some((",", 2)) => node.goal.args().to_vec(),
                    _ => return false,
                };
                parts.len() == node.children.len()
                    && parts.iter().zip(&node.children).all(|(p, c)| {
                        let expected = match Literal::from_term(p.clone()) {
                            Literal::Naf(t) => t,
                            other => other.to_term(),
                        };
                        expected == c.goal
                    })
                    && children_ok(counter)
            }
            Justification::NafSuccess => {
                node.children.is_empty() && matches!(self.solve_naf(&node.goal), Ok(true))
            }
            Justification::Builtin => {
                if !node.children.is_empty() {
                    return false;
                }
                match node.goal.key() {
                    Some(("true", 0)) => true,
                    Some(("setof", 3)) => {
                        let args = node.goal.args();
                        match self.collect_distinct(&args[0], &args[1]) {
                            Ok(Some(items)) => Term::list(items) == args[2],
                            _ => false,
                        }
                    }
                    Some((name, arity)) if builtins::is_builtin(name, arity) => {
                        matches!(eval_builtin(name, node.goal.args(), &Substitution::new()), Ok(v) if !v.is_empty())
                    }
                    _ => false,
                }
            }
        }
    }
}
