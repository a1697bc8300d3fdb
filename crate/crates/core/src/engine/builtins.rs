//! Builtin predicates.
//!
//! | builtin | mode |
//! |---|---|
//! | `length(List, N)` | `List` a proper list |
//! | `member(X, List)` | `List` a proper list; enumerates elements |
//! | `A > B`, `A < B`, `A >= B`, `A =< B` | both sides integer expressions |
//! | `A \= B` | neither side an unbound variable |
//! | `A = B` | unification |
//! | `V is Expr` | `Expr` built from integers with `+`, `-`, `*` |
//! | `minutes_between(D1, D2, M)` | dates `date(Y, Mo, D, H, Mi)` |
//! | `interval_gap(S1, E1, S2, E2, G)` | dates; `G` is 0 for overlapping intervals |
//! | `setof(Template, Goal, List)` | evaluated by the solver |

use chrono::NaiveDate;

use crate::term::{unify, Substitution, Term};

use super::EngineError;

const TABLE: &[(&str, usize)] = &[
    ("length", 2),
    ("member", 2),
    (">", 2),
    ("<", 2),
    (">=", 2),
    ("=<", 2),
    ("\\=", 2),
    ("=", 2),
    ("is", 2),
    ("minutes_between", 3),
    ("interval_gap", 5),
    ("setof", 3),
];

pub fn is_builtin(name: &str, arity: usize) -> bool {
    TABLE.iter().any(|&(n, a)| n == name && a == arity)
}

/// All `(name, arity)` pairs of the builtin table.
pub fn table() -> &'static [(&'static str, usize)] {
    TABLE
}

/// Evaluates a builtin other than `setof` against `subst`, returning one
/// extended substitution per solution.
pub fn eval_builtin(
    name: &str,
    args: &[Term],
    subst: &Substitution,
) -> Result<Vec<Substitution>, EngineError> {
    let args: Vec<Term> = args.iter().map(|a| subst.apply(a)).collect();
    let unify_one = |a: &Term, b: &Term| unify(a, b, subst).into_iter().collect::<Vec<_>>();
    match (name, args.as_slice()) {
        ("length", [list, n]) => {
            if list.is_partial_list() {
                return Err(instantiation(name));
            }
            let items = list
                .list_items()
                .ok_or_else(|| type_error(name, format!("expected a list, found {list}")))?;
            Ok(unify_one(n, &Term::int(items.len() as i64)))
        }
        ("member", [x, list]) => {
            if list.is_partial_list() {
                return Err(instantiation(name));
            }
            let items = list
                .list_items()
                .ok_or_else(|| type_error(name, format!("expected a list, found {list}")))?;
            Ok(items.iter().filter_map(|item| unify(x, item, subst)).collect())
        }
        (">" | "<" | ">=" | "=<", [a, b]) => {
            let (a, b) = (eval_int(name, a)?, eval_int(name, b)?);
            let holds = match name {
                ">" => a > b,
                "<" => a < b,
                ">=" => a >= b,
                _ => a <= b,
            };
            Ok(if holds { vec![subst.clone()] } else { vec![] })
        }
        ("\\=", [a, b]) => {
            if a.is_var() || b.is_var() {
                return Err(instantiation(name));
            }
            Ok(if unify(a, b, subst).is_none() { vec![subst.clone()] } else { vec![] })
        }
        ("=", [a, b]) => Ok(unify_one(a, b)),
        ("is", [v, expr]) => {
            let value = eval_int(name, expr)?;
            Ok(unify_one(v, &Term::int(value)))
        }
        ("minutes_between", [d1, d2, m]) => {
            let minutes = (date_minutes(name, d1)? - date_minutes(name, d2)?).abs();
            Ok(unify_one(m, &Term::int(minutes)))
        }
        ("interval_gap", [s1, e1, s2, e2, g]) => {
            let (s1, e1) = ordered(date_minutes(name, s1)?, date_minutes(name, e1)?);
            let (s2, e2) = ordered(date_minutes(name, s2)?, date_minutes(name, e2)?);
            let gap = 0.max(s2 - e1).max(s1 - e2);
            Ok(unify_one(g, &Term::int(gap)))
        }
        _ => Err(type_error(name, format!("no builtin {name}/{}", args.len()))),
    }
}

fn ordered(a: i64, b: i64) -> (i64, i64) {
    (a.min(b), a.max(b))
}

fn instantiation(name: &str) -> EngineError {
    EngineError::Instantiation { builtin: name.to_string() }
}

fn type_error(name: &str, message: String) -> EngineError {
    EngineError::Type { builtin: name.to_string(), message }
}

/// Evaluates an integer expression over `+`, `-` and `*`.
pub fn eval_int(builtin: &str, expr: &Term) -> Result<i64, EngineError> {
    match expr {
        Term::Int(v) => Ok(*v),
        Term::Var(_) => Err(instantiation(builtin)),
        Term::Compound(op, args) if args.len() == 2 && matches!(&**op, "+" | "-" | "*") => {
            let a = eval_int(builtin, &args[0])?;
            let b = eval_int(builtin, &args[1])?;
            let value = match &**op {
                "+" => a.checked_add(b),
                "-" => a.checked_sub(b),
                _ => a.checked_mul(b),
            };
            value.ok_or_else(|| type_error(builtin, "integer overflow".into()))
        }
        other => Err(type_error(builtin, format!("not an integer expression: {other}"))),
    }
}

/// Minutes since 1970-01-01 00:00 of a `date(Y, Mo, D, H, Mi)` term,
/// in naive civil time.
pub fn date_minutes(builtin: &str, date: &Term) -> Result<i64, EngineError> {
    if !date.is_ground() {
        return Err(instantiation(builtin));
    }
    let malformed = || type_error(builtin, format!("malformed date {date}"));
    let fields = match date {
        Term::Compound(name, args) if &**name == "date" && args.len() == 5 => args
            .iter()
            .map(Term::as_int)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(malformed)?,
        _ => return Err(malformed()),
    };
    let [y, mo, d, h, mi] = fields[..] else { unreachable!() };
    let small = |v: i64| u32::try_from(v).ok();
    let moment = i32::try_from(y)
        .ok()
        .zip(small(mo).zip(small(d)))
        .and_then(|(y, (mo, d))| NaiveDate::from_ymd_opt(y, mo, d))
        .zip(small(h).zip(small(mi)))
        .and_then(|(day, (h, mi))| day.and_hms_opt(h, mi, 0))
        .ok_or_else(malformed)?;
    Ok(moment.and_utc().timestamp().div_euclid(60))
}
