//! Random stratified knowledge bases and a bottom-up ground oracle.
//!
//! Every predicate has arity 2. Extensional predicates `e0..e2` only have
//! facts; intensional `p0..p3` only have rules, and a rule for `p_i` may
//! call `e*` and `p_j` for `j < i`, so programs are non-recursive and
//! negation is stratified by construction. Negated literals come after the
//! positive ones and use only their variables, so they are ground when
//! called.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use judge_core::engine::{Clause, KnowledgeBase, Limits, Literal};
use judge_core::term::Term;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const EDB: usize = 3;
pub const IDB: usize = 4;
const VARS: [&str; 3] = ["X", "Y", "Z"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Arg {
    Var(usize),
    Const(usize),
}

#[derive(Clone, Debug)]
pub struct Atom {
    /// `0..EDB` are `e*`, `EDB..` are `p*`.
    pub pred: usize,
    pub args: [Arg; 2],
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub head: Atom,
    pub positive: Vec<Atom>,
    pub negative: Vec<Atom>,
}

#[derive(Clone, Debug)]
pub struct GenKb {
    pub constants: usize,
    pub facts: Vec<(usize, [usize; 2])>,
    pub rules: Vec<Rule>,
}

pub fn pred_name(pred: usize) -> String {
    if pred < EDB {
        format!("e{pred}")
    } else {
        format!("p{}", pred - EDB)
    }
}

fn constant(c: usize) -> Term {
    Term::atom(&format!("c{c}"))
}

fn arg_term(arg: Arg) -> Term {
    match arg {
        Arg::Var(v) => Term::var(VARS[v]),
        Arg::Const(c) => constant(c),
    }
}

impl Atom {
    fn term(&self) -> Term {
        Term::compound(&pred_name(self.pred), self.args.iter().map(|a| arg_term(*a)).collect())
    }

    fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.args.iter().filter_map(|a| match a {
            Arg::Var(v) => Some(*v),
            Arg::Const(_) => None,
        })
    }

    fn ground(&self, env: &[usize]) -> (usize, [usize; 2]) {
        let value = |a: Arg| match a {
            Arg::Var(v) => env[v],
            Arg::Const(c) => c,
        };
        (self.pred, [value(self.args[0]), value(self.args[1])])
    }
}

impl GenKb {
    pub fn clauses(&self) -> Vec<Clause> {
        let mut clauses: Vec<Clause> = self
            .facts
            .iter()
            .map(|(p, [a, b])| Clause::fact(Term::compound(&pred_name(*p), vec![constant(*a), constant(*b)])))
            .collect();
        for rule in &self.rules {
            let mut body: Vec<Literal> = rule.positive.iter().map(|a| Literal::Call(a.term())).collect();
            body.extend(rule.negative.iter().map(|a| Literal::Naf(a.term())));
            clauses.push(Clause::rule(rule.head.term(), body));
        }
        clauses
    }

    pub fn kb(&self) -> KnowledgeBase {
        KnowledgeBase::from_clauses(self.clauses()).expect("generated clauses are well formed")
    }

    pub fn constant_names(&self) -> Vec<String> {
        (0..self.constants).map(|c| format!("c{c}")).collect()
    }

    /// Least model, computed stratum by stratum over all ground instances.
    pub fn fixpoint(&self) -> BTreeSet<(usize, [usize; 2])> {
        let mut model: BTreeSet<(usize, [usize; 2])> = self.facts.iter().copied().collect();
        for pred in EDB..EDB + IDB {
            let mut derived = Vec::new();
            for rule in self.rules.iter().filter(|r| r.head.pred == pred) {
                let n = VARS.len();
                let mut env = vec![0usize; n];
                let total = self.constants.pow(n as u32);
                for code in 0..total {
                    let mut rest = code;
                    for slot in env.iter_mut() {
                        *slot = rest % self.constants;
                        rest /= self.constants;
                    }
                    let holds = rule.positive.iter().all(|a| model.contains(&a.ground(&env)))
                        && rule.negative.iter().all(|a| !model.contains(&a.ground(&env)));
                    if holds {
                        derived.push(rule.head.ground(&env));
                    }
                }
            }
            model.extend(derived);
        }
        model
    }
}

fn arg_strategy(constants: usize) -> impl Strategy<Value = Arg> {
    prop_oneof![
        3 => (0..VARS.len()).prop_map(Arg::Var),
        1 => (0..constants).prop_map(Arg::Const),
    ]
}

fn raw_atom(constants: usize) -> impl Strategy<Value = (usize, [Arg; 2])> {
    (0..EDB + IDB, [arg_strategy(constants), arg_strategy(constants)])
}

/// Rewrites a raw rule so it is range restricted and only calls lower strata.
fn shape_rule(
    head_pred: usize,
    head: [Arg; 2],
    positive: Vec<(usize, [Arg; 2])>,
    negative: Vec<(usize, [Arg; 2])>,
) -> Rule {
    let level = head_pred - EDB;
    let callable = |pred: usize| match pred.checked_sub(EDB) {
        None => pred,
        Some(_) if level == 0 => pred % EDB,
        Some(i) => EDB + i % level,
    };
    let positive: Vec<Atom> = positive.into_iter().map(|(p, args)| Atom { pred: callable(p), args }).collect();
    let bound: BTreeSet<usize> = positive.iter().flat_map(Atom::vars).collect();
    let fix = |arg: Arg| match arg {
        Arg::Var(v) if !bound.contains(&v) => match bound.iter().next() {
            Some(&b) => Arg::Var(b),
            None => Arg::Const(0),
        },
        other => other,
    };
    Rule {
        head: Atom { pred: head_pred, args: head.map(fix) },
        negative: negative.into_iter().map(|(p, args)| Atom { pred: callable(p), args: args.map(fix) }).collect(),
        positive,
    }
}

pub fn arb_kb() -> impl Strategy<Value = GenKb> {
    (1usize..=12, 1usize..=10).prop_flat_map(|(constants, rules)| {
        let fact = (0..EDB, [0..constants, 0..constants]);
        let rule = (
            EDB..EDB + IDB,
            [arg_strategy(constants), arg_strategy(constants)],
            prop::collection::vec(raw_atom(constants), 1..=3),
            prop::collection::vec(raw_atom(constants), 0..=1),
        )
            .prop_map(|(head_pred, head, positive, negative)| shape_rule(head_pred, head, positive, negative));
        (prop::collection::vec(fact, 0..=14), prop::collection::vec(rule, rules))
            .prop_map(move |(facts, rules)| GenKb { constants, facts, rules })
    })
}

fn ground_pair(t: &Term) -> Option<[usize; 2]> {
    let parse = |t: &Term| t.as_atom()?.strip_prefix('c')?.parse().ok();
    match t.args() {
        [a, b] => Some([parse(a)?, parse(b)?]),
        _ => None,
    }
}

/// Solves `pred(A, B)` top-down and collects the ground answers.
pub fn solve_all(kb: &KnowledgeBase, pred: usize) -> Result<BTreeSet<[usize; 2]>, String> {
    let goal = Term::compound(&pred_name(pred), vec![Term::var("A"), Term::var("B")]);
    let mut answers = BTreeSet::new();
    for solution in kb.solve(&goal, Limits::default()) {
        let (subst, proof) = solution.map_err(|e| e.to_string())?;
        let instance = subst.apply(&goal);
        if !kb.replay(&proof) {
            return Err(format!("proof of {instance} does not replay"));
        }
        answers.insert(ground_pair(&instance).ok_or_else(|| format!("non-ground answer {instance}"))?);
    }
    Ok(answers)
}

/// Compares every predicate's answers with the oracle's, and ground negated
/// queries with the oracle's complement.
pub fn check_against_oracle(gen: &GenKb) -> Result<(), TestCaseError> {
    let kb = gen.kb();
    let model = gen.fixpoint();
    let mut by_pred: BTreeMap<usize, BTreeSet<[usize; 2]>> = BTreeMap::new();
    for (p, args) in &model {
        by_pred.entry(*p).or_default().insert(*args);
    }
    for pred in 0..EDB + IDB {
        let solved = solve_all(&kb, pred).map_err(TestCaseError::fail)?;
        let expected = by_pred.remove(&pred).unwrap_or_default();
        prop_assert_eq!(&solved, &expected, "answers differ for {}", pred_name(pred));
    }
    let probes = gen.constants.min(3);
    for pred in 0..EDB + IDB {
        for a in 0..probes {
            for b in 0..probes {
                let goal = Term::compound(&pred_name(pred), vec![constant(a), constant(b)]);
                let naf = kb.solve_naf(&goal).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(naf, !model.contains(&(pred, [a, b])), "\\+ {}", goal);
            }
        }
    }
    Ok(())
}
