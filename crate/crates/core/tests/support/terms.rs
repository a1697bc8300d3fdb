//! Term generators and the unification properties checked over them.

#![allow(dead_code)]

use judge_core::term::{is_variant, unify, Substitution, Term};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

const VARS: [&str; 4] = ["X", "Y", "Z", "W"];
const ATOMS: [&str; 3] = ["a", "b", "valjean"];
const FUNCTORS: [(&str, usize); 4] = [("f", 1), ("g", 2), ("h", 3), ("vehicle", 2)];

pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => prop::sample::select(&VARS[..]).prop_map(Term::var),
        2 => prop::sample::select(&ATOMS[..]).prop_map(Term::atom),
        1 => (0i64..3).prop_map(Term::int),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        (prop::sample::select(&FUNCTORS[..]), prop::collection::vec(inner, 3)).prop_map(|((name, arity), mut args)| {
            args.truncate(arity);
            Term::compound(name, args)
        })
    })
}

/// Replaces some subterms of `term` with variables, so pairs unify often.
fn generalise(term: &Term, choices: &mut impl Iterator<Item = u8>) -> Term {
    let pick = choices.next().unwrap_or(0);
    if pick.is_multiple_of(5) {
        return Term::var(VARS[(pick / 5) as usize % VARS.len()]);
    }
    match term {
        Term::Compound(name, args) => Term::compound(name, args.iter().map(|a| generalise(a, choices)).collect()),
        other => other.clone(),
    }
}

/// Pairs where about half are instances of a common pattern.
pub fn arb_pair() -> impl Strategy<Value = (Term, Term)> {
    prop_oneof![
        (arb_term(), arb_term()),
        (arb_term(), prop::collection::vec(any::<u8>(), 16)).prop_map(|(t, bytes)| {
            let g = generalise(&t, &mut bytes.into_iter());
            (t, g)
        }),
    ]
}

fn idempotent(s: &Substitution) -> bool {
    s.iter().all(|(_, value)| s.iter().all(|(var, _)| !value.occurs(var)))
}

/// The mgu equates both sides, is idempotent, and success is symmetric with
/// variant results.
pub fn check_pair(left: &Term, right: &Term) -> Result<(), TestCaseError> {
    let forward = unify(left, right, &Substitution::new());
    let backward = unify(right, left, &Substitution::new());
    prop_assert_eq!(forward.is_some(), backward.is_some(), "symmetry for {} = {}", left, right);
    if let (Some(s), Some(r)) = (forward, backward) {
        let unified = s.apply(left);
        prop_assert_eq!(&unified, &s.apply(right));
        prop_assert!(idempotent(&s), "not idempotent: {:?}", s);
        prop_assert_eq!(&s.apply(&unified), &unified);
        prop_assert!(is_variant(&unified, &r.apply(left)), "results are not variants");
    }
    Ok(())
}

/// Binding a variable to a term that strictly contains it must fail.
pub fn check_occurs(var: &str, context: &Term) -> Result<(), TestCaseError> {
    let v = Term::var(var);
    let containing = Term::compound("f", vec![context.clone(), v.clone()]);
    prop_assert!(unify(&v, &containing, &Substitution::new()).is_none());
    prop_assert!(unify(&containing, &v, &Substitution::new()).is_none());
    Ok(())
}
