//! Terms, substitutions and first-order unification.
//!
//! Terms are immutable and cheap to clone: symbols and argument lists sit
//! behind `Arc`, so a [`Term`] can be shared freely between threads.
//! Unification always performs the occurs check.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Functor of list cells.
pub const CONS: &str = ".";
/// The empty list atom.
pub const NIL: &str = "[]";
/// Functor of parenthesised tuples `(A, B, C)`, nested to the right.
pub const TUPLE: &str = ",";

/// A term of the case language.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Arc<str>),
    Atom(Arc<str>),
    Int(i64),
    Str(Arc<str>),
    Compound(Arc<str>, Arc<[Term]>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.into())
    }

    pub fn atom(name: &str) -> Self {
        Term::Atom(name.into())
    }

    pub fn int(value: i64) -> Self {
        Term::Int(value)
    }

    pub fn string(value: &str) -> Self {
        Term::Str(value.into())
    }

    /// Builds a compound term. A functor applied to no arguments is an atom.
    pub fn compound(functor: &str, args: Vec<Term>) -> Self {
        if args.is_empty() {
            Term::Atom(functor.into())
        } else {
            Term::Compound(functor.into(), args.into())
        }
    }

    /// Builds a proper list.
    pub fn list(items: Vec<Term>) -> Self {
        Self::list_with_tail(items, Term::atom(NIL))
    }

    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Self {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::compound(CONS, vec![item, acc]))
    }

    /// Builds a right-nested tuple `(a, b, c)`. A single item is returned as is.
    pub fn tuple(mut items: Vec<Term>) -> Self {
        let mut acc = items.pop().expect("tuple needs at least one item");
        while let Some(item) = items.pop() {
            acc = Term::compound(TUPLE, vec![item, acc]);
        }
        acc
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_callable(&self) -> bool {
        matches!(self, Term::Atom(_) | Term::Compound(..))
    }

    /// Functor name and arity of a callable term.
    pub fn key(&self) -> Option<(&str, usize)> {
        match self {
            Term::Atom(name) => Some((name, 0)),
            Term::Compound(name, args) => Some((name, args.len())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Term::Atom(name) => Some(name),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(value) => Some(*value),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(name) => &**name == var,
            Term::Compound(_, args) => args.iter().any(|arg| arg.occurs(var)),
            _ => false,
        }
    }

    /// Collects variable names in left-to-right order of first occurrence.
    pub fn variables(&self) -> Vec<Arc<str>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_vars(&mut seen, &mut out);
        out
    }

    fn collect_vars(&self, seen: &mut BTreeSet<Arc<str>>, out: &mut Vec<Arc<str>>) {
        match self {
            Term::Var(name) => {
                if seen.insert(name.clone()) {
                    out.push(name.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|arg| arg.collect_vars(seen, out)),
            _ => {}
        }
    }

    /// Elements of a proper list, or `None` when the term is not one
    /// (including partial lists ending in a variable).
    pub fn list_items(&self) -> Option<Vec<Term>> {
        let mut items = Vec::new();
        let mut cursor = self;
        loop {
            match cursor {
                Term::Atom(name) if &**name == NIL => return Some(items),
                Term::Compound(name, args) if &**name == CONS && args.len() == 2 => {
                    items.push(args[0].clone());
                    cursor = &args[1];
                }
                _ => return None,
            }
        }
    }

    /// True when following list cells ends in an unbound variable.
    pub fn is_partial_list(&self) -> bool {
        let mut cursor = self;
        loop {
            match cursor {
                Term::Var(_) => return true,
                Term::Compound(name, args) if &**name == CONS && args.len() == 2 => {
                    cursor = &args[1]
                }
                _ => return false,
            }
        }
    }

    /// Flattens a right-nested tuple into its items.
    pub fn tuple_items(&self) -> Vec<Term> {
        let mut items = Vec::new();
        let mut cursor = self;
        while let Term::Compound(name, args) = cursor {
            if &**name != TUPLE || args.len() != 2 {
                break;
            }
            items.push(args[0].clone());
            cursor = &args[1];
        }
        items.push(cursor.clone());
        items
    }

    /// Replaces every variable through `f`, leaving other leaves untouched.
    pub fn map_vars(&self, f: &mut impl FnMut(&Arc<str>) -> Term) -> Term {
        match self {
            Term::Var(name) => f(name),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
            other => other.clone(),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Int(_) => 1,
            Term::Atom(_) => 2,
            Term::Str(_) => 3,
            Term::Compound(..) => 4,
        }
    }
}

/// Standard order of terms: variables, integers, atoms, strings, compounds.
/// Compounds compare by arity, then functor, then arguments left to right.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Int(a), Term::Int(b)) => a.cmp(b),
            (Term::Atom(a), Term::Atom(b)) => a.cmp(b),
            (Term::Str(a), Term::Str(b)) => a.cmp(b),
            (Term::Compound(f, xs), Term::Compound(g, ys)) => xs
                .len()
                .cmp(&ys.len())
                .then_with(|| f.cmp(g))
                .then_with(|| xs.iter().cmp(ys.iter())),
            _ => self.kind_rank().cmp(&other.kind_rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::caselang::format_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::caselang::format_term(self))
    }
}

/// A finite, idempotent mapping from variable names to terms.
///
/// Bindings are kept fully resolved: no bound variable occurs in any
/// binding's right-hand side.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Arc<str>, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Arc<str>, &Term)> {
        self.bindings.iter()
    }

    pub fn apply(&self, term: &Term) -> Term {
        if self.bindings.is_empty() {
            return term.clone();
        }
        match term {
            Term::Var(name) => self.bindings.get(name).cloned().unwrap_or_else(|| term.clone()),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
            other => other.clone(),
        }
    }

    /// Adds `var ↦ value`, where `value` is already resolved against `self`
    /// and does not contain `var`. Existing bindings are rewritten so the
    /// result stays idempotent.
    fn bind(&mut self, var: Arc<str>, value: Term) {
        debug_assert!(!value.occurs(&var));
        let single = Substitution {
            bindings: BTreeMap::from([(var.clone(), value.clone())]),
        };
        for bound in self.bindings.values_mut() {
            if bound.occurs(&var) {
                *bound = single.apply(bound);
            }
        }
        self.bindings.insert(var, value);
    }

    /// Keeps only the bindings of the given variables.
    pub fn restrict(&self, vars: &[Arc<str>]) -> Substitution {
        Substitution {
            bindings: vars
                .iter()
                .filter_map(|v| self.bindings.get(v).map(|t| (v.clone(), t.clone())))
                .collect(),
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings.iter().map(|(k, v)| (&**k, v))).finish()
    }
}

impl FromIterator<(Arc<str>, Term)> for Substitution {
    /// Builds a substitution by successive binding; panics if the pairs
    /// would create a cycle.
    fn from_iter<I: IntoIterator<Item = (Arc<str>, Term)>>(iter: I) -> Self {
        let mut subst = Substitution::new();
        for (var, value) in iter {
            let value = subst.apply(&value);
            assert!(!value.occurs(&var), "cyclic binding for {var}");
            subst.bind(var, value);
        }
        subst
    }
}

/// Most general unifier of `left` and `right` extending `within`.
/// Returns `None` when the terms do not unify.
pub fn unify(left: &Term, right: &Term, within: &Substitution) -> Option<Substitution> {
    let mut subst = within.clone();
    let mut pending = vec![(left.clone(), right.clone())];
    while let Some((a, b)) = pending.pop() {
        let a = subst.apply(&a);
        let b = subst.apply(&b);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.occurs(&x) {
                    return None;
                }
                subst.bind(x, t);
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                pending.extend(xs.iter().cloned().zip(ys.iter().cloned()).rev());
            }
            (a, b) => {
                if a != b {
                    return None;
                }
            }
        }
    }
    Some(subst)
}

/// Applies a substitution to a term.
pub fn apply(subst: &Substitution, term: &Term) -> Term {
    subst.apply(term)
}

/// True when the two terms are equal up to a consistent renaming of variables.
pub fn is_variant(a: &Term, b: &Term) -> bool {
    fn go(
        a: &Term,
        b: &Term,
        fwd: &mut BTreeMap<Arc<str>, Arc<str>>,
        back: &mut BTreeMap<Arc<str>, Arc<str>>,
    ) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let f = fwd.entry(x.clone()).or_insert_with(|| y.clone()).clone();
                let g = back.entry(y.clone()).or_insert_with(|| x.clone()).clone();
                f == *y && g == *x
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| go(x, y, fwd, back))
            }
            _ => a == b,
        }
    }
    go(a, b, &mut BTreeMap::new(), &mut BTreeMap::new())
}
