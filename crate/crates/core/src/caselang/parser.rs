use std::collections::BTreeSet;
use std::sync::Arc;

use crate::engine::{Clause, Literal};
use crate::term::{Term, NIL};

use super::lexer::{tokenize, Token, TokenKind};
use super::{Directive, ParseError, PlacedDirective, Position, ScenarioPreset, SourceProgram};

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// End of input, reported for errors at EOF.
    eof: Position,
    anonymous: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn position(&self) -> Position {
        self.tokens
            .get(self.pos)
            .map(|t| Position { line: t.span.line, column: t.span.column })
            .unwrap_or(self.eof)
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(kind) => kind.class().to_string(),
            None => "end of input".to_string(),
        };
        let at = self.position();
        ParseError {
            line: at.line,
            column: at.column,
            message: format!("expected {expected}, found {found}"),
            expected: expected.to_string(),
        }
    }

    fn bump(&mut self) -> Option<&'t TokenKind> {
        let kind = self.peek();
        self.pos += 1;
        kind
    }

    fn expect(&mut self, kind: &TokenKind) -> PResult<()> {
        if self.peek() == Some(kind) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(kind.class()))
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Skips past the next `.` (or to end of input).
    fn recover(&mut self) {
        while let Some(kind) = self.bump() {
            if *kind == TokenKind::Dot {
                break;
            }
        }
    }

    fn expr(&mut self) -> PResult<Term> {
        if self.eat(&TokenKind::Naf) {
            let inner = self.expr()?;
            return Ok(Term::compound("\\+", vec![inner]));
        }
        let left = self.sum()?;
        let op = match self.peek() {
            Some(TokenKind::Op(op @ (">" | "<" | ">=" | "=<" | "\\=" | "="))) => *op,
            Some(TokenKind::Ident(name)) if name == "is" => "is",
            _ => return Ok(left),
        };
        self.pos += 1;
        let right = self.sum()?;
        Ok(Term::compound(op, vec![left, right]))
    }

    fn sum(&mut self) -> PResult<Term> {
        let mut acc = self.product()?;
        while let Some(TokenKind::Op(op @ ("+" | "-"))) = self.peek() {
            self.pos += 1;
            let right = self.product()?;
            acc = Term::compound(op, vec![acc, right]);
        }
        Ok(acc)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut acc = self.primary()?;
        while self.peek() == Some(&TokenKind::Op("*")) {
            self.pos += 1;
            let right = self.primary()?;
            acc = Term::compound("*", vec![acc, right]);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> PResult<Term> {
        let Some(kind) = self.peek() else { return Err(self.error("term")) };
        match kind {
            TokenKind::Var(name) => {
                self.pos += 1;
                if name == "_" {
                    self.anonymous += 1;
                    Ok(Term::var(&format!("_#{}", self.anonymous)))
                } else {
                    Ok(Term::var(name))
                }
            }
            TokenKind::Int(v) => {
                self.pos += 1;
                Ok(Term::int(*v))
            }
            TokenKind::Op("-") if matches!(self.peek_at(1), Some(TokenKind::Int(_))) => {
                let Some(TokenKind::Int(v)) = self.peek_at(1) else { unreachable!() };
                self.pos += 2;
                Ok(Term::int(-v))
            }
            TokenKind::Str(s) => {
                self.pos += 1;
                Ok(Term::string(s))
            }
            TokenKind::Ident(name) | TokenKind::QuotedAtom(name) => {
                self.pos += 1;
                if self.eat(&TokenKind::LParen) {
                    let args = self.args(&TokenKind::RParen)?;
                    Ok(Term::compound(name, args))
                } else {
                    Ok(Term::atom(name))
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let items = self.args(&TokenKind::RParen)?;
                Ok(Term::tuple(items))
            }
            TokenKind::LBracket => {
                self.pos += 1;
                if self.eat(&TokenKind::RBracket) {
                    return Ok(Term::atom(NIL));
                }
                let mut items = vec![self.expr()?];
                while self.eat(&TokenKind::Comma) {
                    items.push(self.expr()?);
                }
                let tail = if self.eat(&TokenKind::Bar) { self.expr()? } else { Term::atom(NIL) };
                self.expect(&TokenKind::RBracket)?;
                Ok(Term::list_with_tail(items, tail))
            }
            _ => Err(self.error("term")),
        }
    }

    fn args(&mut self, close: &TokenKind) -> PResult<Vec<Term>> {
        let mut args = vec![self.expr()?];
        while self.eat(&TokenKind::Comma) {
            args.push(self.expr()?);
        }
        self.expect(close)?;
        Ok(args)
    }

    /// One clause or directive, up to and including its `.`.
    fn item(&mut self) -> PResult<Item> {
        let start = self.position();
        if self.eat(&TokenKind::Neck) {
            let term = self.expr()?;
            self.expect(&TokenKind::Dot)?;
            return directive_from(&term, start)
                .unwrap_or_else(|| Err(at(start, format!("unknown directive {term}"), "directive")))
                .map(Item::Directive);
        }
        let head = self.expr()?;
        let mut body = Vec::new();
        if self.eat(&TokenKind::Neck) {
            body.push(Literal::from_term(self.expr()?));
            while self.eat(&TokenKind::Comma) {
                body.push(Literal::from_term(self.expr()?));
            }
        }
        if self.peek() != Some(&TokenKind::Dot) {
            let expected = if body.is_empty() { "`.` or `:-`" } else { "`,` or `.`" };
            return Err(self.error(expected));
        }
        self.pos += 1;
        if body.is_empty() {
            if let Some(directive) = directive_from(&head, start) {
                return directive.map(Item::Directive);
            }
        }
        if !head.is_callable() {
            return Err(at(start, format!("clause head {head} is not callable"), "callable term"));
        }
        Ok(Item::Clause(Clause::rule(head, body), start))
    }
}

enum Item {
    Clause(Clause, Position),
    Directive(Directive),
}

fn at(pos: Position, message: String, expected: &str) -> ParseError {
    ParseError { line: pos.line, column: pos.column, message, expected: expected.to_string() }
}

fn atom_name(term: &Term) -> Option<String> {
    match term {
        Term::Atom(name) => Some(name.to_string()),
        _ => None,
    }
}

fn key_values(terms: &[Term]) -> Option<Vec<(String, Term)>> {
    terms
        .iter()
        .map(|t| match t {
            Term::Compound(op, kv) if &**op == "=" && kv.len() == 2 => {
                Some((atom_name(&kv[0])?, kv[1].clone()))
            }
            _ => None,
        })
        .collect()
}

fn atom_list(term: &Term) -> Option<Vec<String>> {
    term.list_items()?.iter().map(atom_name).collect()
}

/// Recognises directive forms. `None` means the term is an ordinary fact.
fn directive_from(term: &Term, start: Position) -> Option<PResult<Directive>> {
    let bad = |what: &str| Some(Err(at(start, format!("malformed {what} directive"), what)));
    let args = term.args();
    match term.key()? {
        ("tag", 1) | ("tag", 2) => {
            let Some(id) = atom_name(&args[0]) else { return bad("tag") };
            let summary = match args.get(1) {
                None => None,
                Some(Term::Atom(s)) | Some(Term::Str(s)) => Some(s.to_string()),
                Some(_) => return bad("tag"),
            };
            Some(Ok(Directive::Tag { id, summary }))
        }
        ("end_tag", 0) => Some(Ok(Directive::EndTag)),
        ("suspect", 1) => match atom_name(&args[0]) {
            Some(name) => Some(Ok(Directive::Suspect(name))),
            None => bad("suspect"),
        },
        ("policy", _) => key_values(args).map(|settings| Ok(Directive::Policy(settings))),
        ("scenario", 4) | ("scenario", 5) => {
            let parsed = (|| {
                let id = atom_name(&args[0])?;
                let enabled_tags = atom_list(&args[1])?;
                let reliability = key_values(&args[2].list_items()?)?
                    .into_iter()
                    .map(|(k, v)| Some((k, atom_name(&v).filter(|l| l == "hi" || l == "lo")?)))
                    .collect::<Option<Vec<_>>>()?;
                let expected = atom_name(&args[3]).filter(|e| e == "responsible" || e == "acquitted")?;
                let policy = match args.get(4) {
                    Some(list) => key_values(&list.list_items()?)?,
                    None => Vec::new(),
                };
                Some(ScenarioPreset { id, enabled_tags, reliability, policy, expected })
            })();
            match parsed {
                Some(preset) => Some(Ok(Directive::Scenario(preset))),
                None => bad("scenario"),
            }
        }
        _ => None,
    }
}

/// Parses a case file. Errors are collected across clauses: after an error
/// the parser skips to the next `.` and continues.
pub fn parse_program(text: &str) -> Result<SourceProgram, Vec<ParseError>> {
    let tokens = tokenize(text).map_err(|e| vec![e])?;
    let eof = {
        let line = text.matches('\n').count() + 1;
        let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Position { line, column }
    };
    let mut parser = Parser { tokens: &tokens, pos: 0, eof, anonymous: 0 };
    let mut program = SourceProgram::default();
    let mut errors = Vec::new();
    let mut current_tag: Option<Arc<str>> = None;
    let mut seen_tags = BTreeSet::new();
    while parser.peek().is_some() {
        let start = parser.position();
        match parser.item() {
            Ok(Item::Clause(mut clause, pos)) => {
                clause.tag = current_tag.clone();
                program.clauses.push(clause);
                program.positions.push(pos);
            }
            Ok(Item::Directive(directive)) => {
                match &directive {
                    Directive::Tag { id, .. } => {
                        if !seen_tags.insert(id.clone()) {
                            errors.push(at(start, format!("tag {id} opened twice"), "unused tag id"));
                        }
                        current_tag = Some(id.as_str().into());
                    }
                    Directive::EndTag => current_tag = None,
                    _ => {}
                }
                program
                    .directives
                    .push(PlacedDirective { before_clause: program.clauses.len(), directive });
            }
            Err(e) => {
                errors.push(e);
                parser.recover();
            }
        }
    }
    if errors.is_empty() {
        Ok(program)
    } else {
        Err(errors)
    }
}

/// Parses a single term (no trailing `.` needed).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens: &tokens, pos: 0, eof: Position { line: 1, column: text.chars().count() + 1 }, anonymous: 0 };
    let term = parser.expr()?;
    parser.eat(&TokenKind::Dot);
    if parser.peek().is_some() {
        return Err(parser.error("end of term"));
    }
    Ok(term)
}
