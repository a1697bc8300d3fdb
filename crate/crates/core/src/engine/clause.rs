use std::collections::BTreeMap;
use std::sync::Arc;

use crate::term::{Substitution, Term};

use super::builtins;

/// One goal in a clause body.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Call(Term),
    /// Negation as failure: succeeds when the goal has no proof.
    Naf(Term),
    Builtin(Arc<str>, Arc<[Term]>),
}

impl Literal {
    /// Classifies a body term: `\+ G` becomes [`Literal::Naf`], members of the
    /// builtin table become [`Literal::Builtin`], anything else a call.
    pub fn from_term(term: Term) -> Literal {
        match &term {
            Term::Compound(name, args) if &**name == "\\+" && args.len() == 1 => {
                Literal::Naf(args[0].clone())
            }
            Term::Compound(name, args) if builtins::is_builtin(name, args.len()) => {
                Literal::Builtin(name.clone(), args.clone())
            }
            _ => Literal::Call(term),
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Literal::Call(t) => t.clone(),
            Literal::Naf(t) => Term::compound("\\+", vec![t.clone()]),
            Literal::Builtin(name, args) => Term::Compound(name.clone(), args.clone()),
        }
    }

    fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Literal {
        match self {
            Literal::Call(t) => Literal::Call(f(t)),
            Literal::Naf(t) => Literal::Naf(f(t)),
            Literal::Builtin(name, args) => Literal::Builtin(name.clone(), args.iter().map(&mut *f).collect()),
        }
    }
}

/// A fact or rule, optionally tagged with the evidence it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Term,
    pub body: Vec<Literal>,
    pub tag: Option<Arc<str>>,
    pub enabled: bool,
}

impl Clause {
    pub fn fact(head: Term) -> Self {
        Clause { head, body: Vec::new(), tag: None, enabled: true }
    }

    pub fn rule(head: Term, body: Vec<Literal>) -> Self {
        Clause { head, body, tag: None, enabled: true }
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn variables(&self) -> Vec<Arc<str>> {
        let mut all = self.head.clone();
        for lit in &self.body {
            all = Term::compound("&", vec![all, lit.to_term()]);
        }
        all.variables()
    }

    pub fn apply(&self, subst: &Substitution) -> Clause {
        Clause {
            head: subst.apply(&self.head),
            body: self.body.iter().map(|l| l.map_terms(&mut |t| subst.apply(t))).collect(),
            tag: self.tag.clone(),
            enabled: self.enabled,
        }
    }
}

/// Returns an alphabetic variant of `clause` whose variables are named
/// `Name#n`, with `n` taken from `counter`. The counter is advanced, so
/// successive renamings never share variables. `#` cannot appear in source
/// variable names, which keeps renamed variables apart from query variables.
pub fn rename_apart(clause: &Clause, counter: &mut usize) -> Clause {
    let vars = clause.variables();
    if vars.is_empty() {
        return clause.clone();
    }
    *counter += 1;
    let n = *counter;
    let mut fresh: BTreeMap<Arc<str>, Term> = BTreeMap::new();
    for var in vars {
        fresh.insert(var.clone(), Term::var(&format!("{var}#{n}")));
    }
    let mut rename = |t: &Term| t.map_vars(&mut |name| fresh[name].clone());
    Clause {
        head: rename(&clause.head),
        body: clause.body.iter().map(|l| l.map_terms(&mut rename)).collect(),
        tag: clause.tag.clone(),
        enabled: clause.enabled,
    }
}
