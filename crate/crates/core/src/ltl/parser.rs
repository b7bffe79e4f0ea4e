//! Textual LTL grammar.
//!
//! ```text
//! formula := or
//! or      := and ("||" and)*
//! and     := until ("&&" until)*
//! until   := unary (("U" | "R") until)?          right associative
//! unary   := ("!" | "X" | "F" | "G") unary | primary
//! primary := "true" | "false" | "(" formula ")" | atom
//! atom    := "is-fireable" "(" names ")" | term ("<=" | "<" | "=") term
//! term    := INT | "tokens-count" "(" names ")"
//! names   := name ("," name)*                    name: identifier or "quoted"
//! ```
//!
//! `a = b` becomes `a <= b && b <= a`, and a strict comparison against a
//! constant is rewritten to `<=` (`k < e` to `k+1 <= e`).

use thiserror::Error;

use super::{Atom, Expr, Formula, Ltl};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Quoted(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Not,
    AndOp,
    OrOp,
    Le,
    Lt,
    Eq,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\'' | '$' | '@')
}

impl<'a> Lexer<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: at - self.line_start + 1,
            message: message.into(),
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while let Some(c) = self.peek_char() {
            if c == '\n' {
                self.pos += 1;
                self.line += 1;
                self.line_start = self.pos;
            } else if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let two = |s: &str| rest.starts_with(s);
        let (tok, len) = if two("&&") {
            (Tok::AndOp, 2)
        } else if two("||") {
            (Tok::OrOp, 2)
        } else if two("<=") {
            (Tok::Le, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '!' => (Tok::Not, 1),
                '<' => (Tok::Lt, 1),
                '=' => (Tok::Eq, 1),
                '"' => {
                    let body = &rest[1..];
                    let end = body
                        .find('"')
                        .ok_or_else(|| self.error(start, "unterminated quoted name"))?;
                    (Tok::Quoted(body[..end].to_string()), end + 2)
                }
                c if c.is_ascii_digit() || (c == '-' && rest[1..].starts_with(|d: char| d.is_ascii_digit())) => {
                    let len = 1 + rest[1..].find(|d: char| !d.is_ascii_digit()).unwrap_or(rest.len() - 1);
                    let text = &rest[..len];
                    if rest[len..].starts_with(|d: char| is_word_char(d) && !d.is_ascii_digit()) {
                        // identifier starting with digits, e.g. "1a"
                        let wl = rest.find(|d: char| !is_word_char(d)).unwrap_or(rest.len());
                        (Tok::Word(rest[..wl].to_string()), wl)
                    } else {
                        let v = text
                            .parse()
                            .map_err(|_| self.error(start, format!("integer out of range: {text}")))?;
                        (Tok::Int(v), len)
                    }
                }
                c if is_word_char(c) => {
                    let len = rest.find(|d: char| !is_word_char(d)).unwrap_or(rest.len());
                    (Tok::Word(rest[..len].to_string()), len)
                }
                other => return Err(self.error(start, format!("unexpected character '{other}'"))),
            }
        };
        self.pos += len;
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    /// Pending unary operators from a fused word such as `GF`.
    pending: Vec<char>,
    atoms: Vec<Atom>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, line: usize) -> Result<Self, ParseError> {
        let mut lexer = Lexer {
            src,
            pos: 0,
            line,
            line_start: 0,
        };
        let (tok, at) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            at,
            pending: Vec::new(),
            atoms: Vec::new(),
        })
    }

    fn bump(&mut self) -> Result<Tok, ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.at = at;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.lexer.error(self.at, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok == want {
            self.bump()?;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(&self.tok))))
        }
    }

    fn atom(&mut self, atom: Atom) -> Ltl {
        let id = match self.atoms.iter().position(|a| *a == atom) {
            Some(i) => i,
            None => {
                self.atoms.push(atom);
                self.atoms.len() - 1
            }
        };
        Ltl::Atom(id)
    }

    fn or(&mut self) -> Result<Ltl, ParseError> {
        let mut lhs = self.and()?;
        while self.tok == Tok::OrOp {
            self.bump()?;
            lhs = Ltl::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltl, ParseError> {
        let mut lhs = self.until()?;
        while self.tok == Tok::AndOp {
            self.bump()?;
            lhs = Ltl::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.unary()?;
        match &self.tok {
            Tok::Word(w) if w == "U" => {
                self.bump()?;
                Ok(Ltl::until(lhs, self.until()?))
            }
            Tok::Word(w) if w == "R" => {
                self.bump()?;
                Ok(Ltl::release(lhs, self.until()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Ltl, ParseError> {
        if let Some(op) = self.pending.pop() {
            return self.apply_unary(op);
        }
        match &self.tok {
            Tok::Not => {
                self.bump()?;
                Ok(Ltl::not(self.unary()?))
            }
            Tok::Word(w) if !w.is_empty() && w.chars().all(|c| matches!(c, 'X' | 'F' | 'G')) => {
                let ops: Vec<char> = w.chars().rev().collect();
                self.bump()?;
                self.pending = ops;
                let op = self.pending.pop().unwrap();
                self.apply_unary(op)
            }
            _ => self.primary(),
        }
    }

    fn apply_unary(&mut self, op: char) -> Result<Ltl, ParseError> {
        let inner = self.unary()?;
        Ok(match op {
            'X' => Ltl::next(inner),
            'F' => Ltl::finally(inner),
            _ => Ltl::globally(inner),
        })
    }

    fn primary(&mut self) -> Result<Ltl, ParseError> {
        match self.tok.clone() {
            Tok::LParen => {
                self.bump()?;
                let f = self.or()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Word(w) if w == "true" => {
                self.bump()?;
                Ok(Ltl::True)
            }
            Tok::Word(w) if w == "false" => {
                self.bump()?;
                Ok(Ltl::False)
            }
            Tok::Word(w) if w == "is-fireable" => {
                self.bump()?;
                let names = self.names()?;
                Ok(self.atom(Atom::Fireable(names)))
            }
            Tok::Word(w) if w == "tokens-count" => self.comparison(),
            Tok::Int(_) => self.comparison(),
            other => Err(self.error(format!("expected a formula, found {}", describe(&other)))),
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Int(k) => {
                self.bump()?;
                Ok(Expr::Const(k))
            }
            Tok::Word(w) if w == "tokens-count" => {
                self.bump()?;
                Ok(Expr::TokensCount(self.names()?))
            }
            other => Err(self.error(format!(
                "expected an integer or tokens-count(...), found {}",
                describe(&other)
            ))),
        }
    }

    fn comparison(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.term()?;
        let op = self.tok.clone();
        if !matches!(op, Tok::Le | Tok::Lt | Tok::Eq) {
            return Err(self.error(format!("expected '<=', '<' or '=', found {}", describe(&op))));
        }
        self.bump()?;
        let rhs = self.term()?;
        Ok(match op {
            Tok::Le => self.atom(Atom::Compare { lhs, strict: false, rhs }),
            Tok::Lt => {
                let atom = strict_to_le(lhs, rhs);
                self.atom(atom)
            }
            _ => {
                let a = self.atom(Atom::Compare {
                    lhs: lhs.clone(),
                    strict: false,
                    rhs: rhs.clone(),
                });
                let b = self.atom(Atom::Compare { lhs: rhs, strict: false, rhs: lhs });
                Ltl::and(a, b)
            }
        })
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let mut names = Vec::new();
        loop {
            match self.bump()? {
                Tok::Word(w) | Tok::Quoted(w) => names.push(w),
                Tok::Int(k) => names.push(k.to_string()),
                other => {
                    return Err(self.error(format!("expected a name, found {}", describe(&other))))
                }
            }
            match self.bump()? {
                Tok::Comma => continue,
                Tok::RParen => break,
                other => {
                    return Err(self.error(format!("expected ',' or ')', found {}", describe(&other))))
                }
            }
        }
        Ok(names)
    }
}

fn strict_to_le(lhs: Expr, rhs: Expr) -> Atom {
    match (lhs, rhs) {
        (Expr::Const(k), rhs) if k < i64::MAX => Atom::Compare {
            lhs: Expr::Const(k + 1),
            strict: false,
            rhs,
        },
        (lhs, Expr::Const(k)) if k > i64::MIN => Atom::Compare {
            lhs,
            strict: false,
            rhs: Expr::Const(k - 1),
        },
        (lhs, rhs) => Atom::Compare { lhs, strict: true, rhs },
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Word(w) => format!("'{w}'"),
        Tok::Quoted(w) => format!("\"{w}\""),
        Tok::Int(k) => format!("'{k}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Not => "'!'".into(),
        Tok::AndOp => "'&&'".into(),
        Tok::OrOp => "'||'".into(),
        Tok::Le => "'<='".into(),
        Tok::Lt => "'<'".into(),
        Tok::Eq => "'='".into(),
        Tok::End => "end of input".into(),
    }
}

fn parse_at_line(text: &str, line: usize) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, line)?;
    let root = p.or()?;
    if p.tok != Tok::End {
        return Err(p.error(format!("unexpected {}", describe(&p.tok))));
    }
    Ok(Formula { root, atoms: p.atoms })
}

/// Parses one formula.
pub fn parse_ltl(text: &str) -> Result<Formula, ParseError> {
    parse_at_line(text, 1)
}

/// Parses a formula file: one formula per line, `#` starts a comment.
pub fn parse_formula_file(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_at_line(line, i + 1)?);
    }
    Ok(out)
}

/// Drops a `#` comment, ignoring `#` inside quoted names.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}
