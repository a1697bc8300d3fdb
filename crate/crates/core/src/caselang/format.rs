use crate::engine::{Clause, Literal};
use crate::term::{Term, CONS, NIL, TUPLE};

use super::{Directive, SourceProgram};

fn is_bare_atom(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() && c.is_lowercase())
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn quote(text: &str, q: char) -> String {
    let doubled: String = [q, q].iter().collect();
    format!("{q}{}{q}", text.replace(q, &doubled))
}

pub fn format_atom(name: &str) -> String {
    if is_bare_atom(name) || name == NIL {
        name.to_string()
    } else {
        quote(name, '\'')
    }
}

/// Binding strength of an operator term; plain terms bind tightest.
fn precedence(term: &Term) -> u8 {
    match term {
        Term::Compound(name, args) => match (&**name, args.len()) {
            ("\\+", 1) => 0,
            (">" | "<" | ">=" | "=<" | "\\=" | "=" | "is", 2) => 1,
            ("+" | "-", 2) => 2,
            ("*", 2) => 3,
            _ => 4,
        },
        _ => 4,
    }
}

fn operand(term: &Term, min: u8, out: &mut String) {
    if precedence(term) < min {
        out.push('(');
        write_term(term, out);
        out.push(')');
    } else {
        write_term(term, out);
    }
}

fn write_term(term: &Term, out: &mut String) {
    match term {
        Term::Var(name) => {
            // Anonymous variables are numbered apart internally.
            if name.starts_with("_#") {
                out.push('_');
            } else {
                out.push_str(name);
            }
        }
        Term::Int(v) => out.push_str(&v.to_string()),
        Term::Atom(name) => out.push_str(&format_atom(name)),
        Term::Str(s) => out.push_str(&quote(s, '"')),
        Term::Compound(name, args) => {
            let prec = precedence(term);
            match (&**name, args.len()) {
                (CONS, 2) => write_list(term, out),
                (TUPLE, 2) => {
                    out.push('(');
                    for (i, item) in term.tuple_items().iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(item, out);
                    }
                    out.push(')');
                }
                ("\\+", 1) => {
                    out.push_str("\\+ ");
                    operand(&args[0], 0, out);
                }
                (op, 2) if prec < 4 => {
                    let (left_min, right_min) = match prec {
                        1 => (2, 2),
                        2 => (2, 3),
                        _ => (3, 4),
                    };
                    operand(&args[0], left_min, out);
                    out.push(' ');
                    out.push_str(op);
                    out.push(' ');
                    operand(&args[1], right_min, out);
                }
                _ => {
                    // `[]` is only bare as an atom; as a functor it needs quotes.
                    out.push_str(&if &**name == NIL { quote(name, '\'') } else { format_atom(name) });
                    out.push('(');
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(arg, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

fn write_list(term: &Term, out: &mut String) {
    out.push('[');
    let mut cursor = term;
    let mut first = true;
    loop {
        match cursor {
            Term::Compound(name, args) if &**name == CONS && args.len() == 2 => {
                if !first {
                    out.push_str(", ");
                }
                first = false;
                write_term(&args[0], out);
                cursor = &args[1];
            }
            Term::Atom(name) if &**name == NIL => break,
            tail => {
                out.push_str(" | ");
                write_term(tail, out);
                break;
            }
        }
    }
    out.push(']');
}

/// Canonical text of a term: minimal quoting, `", "` between arguments,
/// infix notation for the builtin operators.
pub fn format_term(term: &Term) -> String {
    let mut out = String::new();
    write_term(term, &mut out);
    out
}

pub fn format_literal(literal: &Literal) -> String {
    format_term(&literal.to_term())
}

pub fn format_clause(clause: &Clause) -> String {
    let head = format_term(&clause.head);
    if clause.body.is_empty() {
        return format!("{head}.");
    }
    let body: Vec<String> = clause.body.iter().map(|l| format!("    {}", format_literal(l))).collect();
    format!("{head} :-\n{}.", body.join(",\n"))
}

pub fn format_directive(directive: &Directive) -> String {
    let kv = |pairs: &[(String, Term)]| -> Vec<String> {
        pairs.iter().map(|(k, v)| format!("{} = {}", format_atom(k), format_term(v))).collect()
    };
    match directive {
        Directive::Tag { id, summary: None } => format!("tag({}).", format_atom(id)),
        Directive::Tag { id, summary: Some(s) } => {
            format!("tag({}, {}).", format_atom(id), format_atom(s))
        }
        Directive::EndTag => "end_tag.".to_string(),
        Directive::Suspect(name) => format!("suspect({}).", format_atom(name)),
        Directive::Policy(settings) => format!("policy({}).", kv(settings).join(", ")),
        Directive::Scenario(p) => {
            let tags: Vec<String> = p.enabled_tags.iter().map(|t| format_atom(t)).collect();
            let rel: Vec<String> = p
                .reliability
                .iter()
                .map(|(w, l)| format!("{} = {}", format_atom(w), format_atom(l)))
                .collect();
            let mut out = format!(
                "scenario({}, [{}], [{}], {}",
                format_atom(&p.id),
                tags.join(", "),
                rel.join(", "),
                format_atom(&p.expected)
            );
            if !p.policy.is_empty() {
                out.push_str(&format!(", [{}]", kv(&p.policy).join(", ")));
            }
            out.push_str(").");
            out
        }
    }
}

/// Canonical text of a whole program, directives in place.
pub fn format_program(program: &SourceProgram) -> String {
    let mut out = String::new();
    let mut directives = program.directives.iter().peekable();
    for index in 0..=program.clauses.len() {
        while let Some(d) = directives.next_if(|d| d.before_clause <= index) {
            out.push_str(&format_directive(&d.directive));
            out.push('\n');
        }
        if let Some(clause) = program.clauses.get(index) {
            out.push_str(&format_clause(clause));
            out.push('\n');
        }
    }
    out
}
