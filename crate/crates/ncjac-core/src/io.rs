//! Parsing and printing of potential expressions, plus machine-readable
//! reports.
//!
//! Grammar (EBNF):
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := rational | ident | '(' expr ')'
//! rational := nat ('/' nat)?
//! ```
//! Juxtaposition is NOT multiplication: `x*y` is a product, `xy` is a single
//! identifier. `^` binds tighter than `*`. `#` starts a comment that runs to
//! the end of the line.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::poly::NCPoly;
use crate::rational::{render, Q};
use crate::word::Context;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, Error> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c2) = chars.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_digit() {
                        s.push(c2);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Int(s.parse().unwrap()), line: tl, col: tc });
            }
            c2 if c2.is_ascii_alphabetic() || c2 == '_' => {
                let mut s = String::new();
                while let Some(&c3) = chars.peek() {
                    if c3.is_ascii_alphanumeric() || c3 == '_' {
                        s.push(c3);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(s), line: tl, col: tc });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => {
                        return Err(Error::Parse {
                            line: tl,
                            col: tc,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                };
                chars.next();
                col += 1;
                out.push(Spanned { tok, line: tl, col: tc });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ctx: &'a Context,
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.end_line, self.end_col),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), Error> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<NCPoly, Error> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NCPoly, Error> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly, Error> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.err("exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected natural-number exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<NCPoly, Error> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.bump();
                let mut value = Q::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(den)) => {
                            if den.is_zero() {
                                return Err(self.err("zero denominator"));
                            }
                            value = value / Q::from_integer(den);
                        }
                        _ => return Err(self.err("expected denominator after `/`")),
                    }
                }
                Ok(NCPoly::monomial(self.ctx.d(), crate::word::Word::one(), value))
            }
            Some(Tok::Ident(name)) => {
                let i = self
                    .ctx
                    .index_of(&name)
                    .ok_or_else(|| self.err(format!("unknown identifier `{name}`")))?;
                self.bump();
                Ok(NCPoly::var(self.ctx.d(), i))
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            _ => Err(self.err("expected a rational, identifier, or `(`")),
        }
    }
}

/// Parse a potential expression into an exact polynomial.
pub fn parse(text: &str, ctx: &Context) -> Result<NCPoly, Error> {
    let toks = lex(text)?;
    let lines: Vec<&str> = text.lines().collect();
    let end_line = lines.len().max(1);
    let end_col = lines.last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let mut p = Parser { toks, pos: 0, ctx, end_line, end_col };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Canonical printer: terms in graded-lex order, rational coefficients,
/// `*` between letters, `^` compressing runs. `parse(print(f)) == f`.
pub fn print(f: &NCPoly, ctx: &Context) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let one = Q::from_integer(1.into());
    let minus_one = Q::from_integer((-1).into());
    for (idx, (w, c)) in f.terms().enumerate() {
        let neg = c < &Q::zero();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let abs = if neg { -c.clone() } else { c.clone() };
        if w.degree() == 0 {
            out.push_str(&render(&abs));
        } else if c == &one || c == &minus_one {
            out.push_str(&w.render(ctx));
        } else {
            out.push_str(&render(&abs));
            out.push('*');
            out.push_str(&w.render(ctx));
        }
    }
    out
}

/// Strip `#` comments and parse the remaining expression (file front end).
pub fn parse_file_contents(text: &str, ctx: &Context) -> Result<NCPoly, Error> {
    parse(text, ctx)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// A structured report: an ordered list of key/value pairs with exact
/// integer or rational values only. Rendering is deterministic: identical
/// inputs produce identical bytes.
#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Vec<(String, serde_json::Value)>,
}

impl Report {
    pub fn new() -> Report {
        Report { fields: Vec::new() }
    }

    pub fn push(&mut self, key: &str, value: serde_json::Value) {
        self.fields.push((key.to_string(), value));
    }

    pub fn get(&self, key: &str) -> Option<&serde_json::Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Human-readable rendering: one `key: value` line per field.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(k);
            out.push_str(": ");
            match v {
                serde_json::Value::String(s) => out.push_str(s),
                other => out.push_str(&other.to_string()),
            }
            out.push('\n');
        }
        out
    }

    /// JSON rendering preserving field order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::to_string(k).unwrap());
            out.push(':');
            out.push_str(&serde_json::to_string(v).unwrap());
        }
        out.push('}');
        out
    }
}
