use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Lowercase identifier.
    Ident(String),
    Var(String),
    Int(i64),
    QuotedAtom(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bar,
    Comma,
    Dot,
    /// The rule arrow `:-`.
    Neck,
    /// The negation-as-failure operator `\+`.
    Naf,
    /// One of `>`, `<`, `>=`, `=<`, `\=`, `=`, `+`, `-`, `*`.
    Op(&'static str),
}

impl TokenKind {
    /// Short class name used in error messages.
    pub fn class(&self) -> &'static str {
        match self {
            TokenKind::Ident(_) => "identifier",
            TokenKind::Var(_) => "variable",
            TokenKind::Int(_) => "integer",
            TokenKind::QuotedAtom(_) => "quoted atom",
            TokenKind::Str(_) => "string",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Bar => "`|`",
            TokenKind::Comma => "`,`",
            TokenKind::Dot => "`.`",
            TokenKind::Neck => "`:-`",
            TokenKind::Naf => "`\\+`",
            TokenKind::Op(_) => "operator",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
    /// 1-based line and column (in characters) of `start`.
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        self.text[self.pos..].chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, f: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&f) {
            self.bump();
        }
    }

    fn mark(&self) -> Span {
        Span { start: self.pos, end: self.pos, line: self.line, column: self.column }
    }
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Splits case-language text into tokens. Whitespace, `%` line comments and
/// `/* */` block comments are skipped.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { text, pos: 0, line: 1, column: 1 };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let mut span = cur.mark();
        let error = |span: Span, message: String, expected: &str| ParseError {
            line: span.line,
            column: span.column,
            message,
            expected: expected.to_string(),
        };
        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '%' => {
                cur.eat_while(|c| c != '\n');
                continue;
            }
            '/' if cur.peek_second() == Some('*') => {
                cur.bump();
                cur.bump();
                loop {
                    match cur.bump() {
                        Some('*') if cur.peek() == Some('/') => {
                            cur.bump();
                            break;
                        }
                        Some(_) => {}
                        None => {
                            return Err(error(span, "unterminated block comment".into(), "`*/`"))
                        }
                    }
                }
                continue;
            }
            '\'' | '"' => {
                cur.bump();
                let mut value = String::new();
                loop {
                    match cur.bump() {
                        Some(q) if q == c && cur.peek() == Some(c) => {
                            cur.bump();
                            value.push(c);
                        }
                        Some(q) if q == c => break,
                        Some(other) => value.push(other),
                        None => {
                            let what = if c == '\'' { "quoted atom" } else { "string" };
                            return Err(error(span, format!("unterminated {what}"), &format!("`{c}`")));
                        }
                    }
                }
                if c == '\'' {
                    TokenKind::QuotedAtom(value)
                } else {
                    TokenKind::Str(value)
                }
            }
            c if c.is_ascii_digit() => {
                cur.eat_while(|c| c.is_ascii_digit());
                let digits = &text[span.start..cur.pos];
                match digits.parse::<i64>() {
                    Ok(v) => TokenKind::Int(v),
                    Err(_) => return Err(error(span, format!("integer {digits} out of range"), "integer")),
                }
            }
            c if c.is_uppercase() || c == '_' => {
                cur.eat_while(is_ident_continue);
                TokenKind::Var(text[span.start..cur.pos].to_string())
            }
            c if c.is_alphabetic() => {
                cur.eat_while(is_ident_continue);
                TokenKind::Ident(text[span.start..cur.pos].to_string())
            }
            _ => {
                cur.bump();
                let next = cur.peek();
                let two = |cur: &mut Cursor, kind| {
                    cur.bump();
                    kind
                };
                match (c, next) {
                    ('(', _) => TokenKind::LParen,
                    (')', _) => TokenKind::RParen,
                    ('[', _) => TokenKind::LBracket,
                    (']', _) => TokenKind::RBracket,
                    ('|', _) => TokenKind::Bar,
                    (',', _) => TokenKind::Comma,
                    ('.', _) => TokenKind::Dot,
                    (':', Some('-')) => two(&mut cur, TokenKind::Neck),
                    ('\\', Some('+')) => two(&mut cur, TokenKind::Naf),
                    ('\\', Some('=')) => two(&mut cur, TokenKind::Op("\\=")),
                    ('>', Some('=')) => two(&mut cur, TokenKind::Op(">=")),
                    ('=', Some('<')) => two(&mut cur, TokenKind::Op("=<")),
                    ('>', _) => TokenKind::Op(">"),
                    ('<', _) => TokenKind::Op("<"),
                    ('=', _) => TokenKind::Op("="),
                    ('+', _) => TokenKind::Op("+"),
                    ('-', _) => TokenKind::Op("-"),
                    ('*', _) => TokenKind::Op("*"),
                    _ => return Err(error(span, format!("unexpected character {c:?}"), "token")),
                }
            }
        };
        span.end = cur.pos;
        tokens.push(Token { kind, span });
    }
    Ok(tokens)
}
