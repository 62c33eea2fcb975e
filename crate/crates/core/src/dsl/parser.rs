use num_bigint::BigInt;

use super::lexer::{Tok, Token};
use crate::error::{Error, Result};
use crate::poly::{Poly, RingRef};
use crate::scalars::{Field, FieldElem};

/// Token cursor with recursive-descent helpers.
pub struct Cursor {
    toks: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Cursor {
        Cursor { toks, at: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn pos(&self) -> (usize, usize) {
        let t = &self.toks[self.at];
        (t.line, t.col)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.pos();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    /// Index of the next token, for [`Cursor::text_since`].
    pub fn offset(&self) -> usize {
        self.at
    }

    /// Source text of the tokens from `start` up to the cursor, normalized.
    pub fn text_since(&self, start: usize) -> String {
        join_tokens(&self.toks[start..self.at])
    }

    /// `( ... , ... )` kept as raw text per item, for syntaxes the polynomial
    /// parser does not cover.
    pub fn raw_list(&mut self) -> Result<Vec<String>> {
        self.expect_sym('(')?;
        let mut items = Vec::new();
        let mut start = self.at;
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return self.err("unclosed `(`"),
                Tok::Sym('(') | Tok::Sym('{') => depth += 1,
                Tok::Sym(')') | Tok::Sym('}') if depth > 0 => depth -= 1,
                Tok::Sym(')') | Tok::Sym(',') if depth == 0 => {
                    let closing = self.is_sym(')');
                    if self.at == start {
                        if closing && items.is_empty() {
                            self.bump();
                            return Ok(items);
                        }
                        return self.err("empty item");
                    }
                    items.push(join_tokens(&self.toks[start..self.at]).replace(' ', ""));
                    self.bump();
                    if closing {
                        return Ok(items);
                    }
                    start = self.at;
                    continue;
                }
                _ => {}
            }
            self.bump();
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn is_sym(&self, c: char) -> bool {
        matches!(self.peek(), Tok::Sym(d) if *d == c)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", describe(self.peek())))
        }
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    pub fn eat_ident(&mut self, s: &str) -> bool {
        if self.is_ident(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected a name, found {}", describe(&t))),
        }
    }

    pub fn integer(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Num(s, None) => match s.parse::<u64>() {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => self.err("integer out of range"),
            },
            t => self.err(format!("expected an integer, found {}", describe(&t))),
        }
    }

    /// A numeric literal: integer, decimal, or `a mod p`.
    fn number(&mut self, field: Field) -> Result<FieldElem> {
        let (int, frac) = match self.bump() {
            Tok::Num(i, f) => (i, f),
            _ => unreachable!(),
        };
        let num: BigInt = format!("{int}{}", frac.clone().unwrap_or_default()).parse().unwrap();
        let den = BigInt::from(10u32).pow(frac.map_or(0, |f| f.len() as u32));
        if self.is_ident("mod") {
            self.bump();
            let p = self.integer()?;
            if field != Field::Prime(p as u32) || p > u32::MAX as u64 {
                return self.err(format!("literal `mod {p}` does not match coefficient field {field}"));
            }
        }
        match field.from_ratio(&num, &den) {
            Ok(v) => Ok(v),
            Err(_) => self.err(format!("decimal literal has no value in {field}")),
        }
    }

    /// `expr := term (('+' | '-') term)*`
    pub fn poly(&mut self, ring: &RingRef) -> Result<Poly> {
        let mut acc = if self.eat_sym('-') { -self.product(ring)? } else { self.product(ring)? };
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.product(ring)?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.product(ring)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self, ring: &RingRef) -> Result<Poly> {
        let mut acc = self.power(ring)?;
        loop {
            if self.eat_sym('*') {
                acc = &acc * &self.power(ring)?;
            } else if self.is_sym('/') {
                let (line, col) = self.pos();
                self.bump();
                let d = self.power(ring)?;
                let c = match d.constant_value() {
                    Some(c) if !c.is_zero() => c,
                    Some(_) => return Err(Error::Syntax { line, col, msg: "division by zero".into() }),
                    None => {
                        return Err(Error::Syntax { line, col, msg: "division by a non-constant".into() })
                    }
                };
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self, ring: &RingRef) -> Result<Poly> {
        if self.eat_sym('-') {
            return Ok(-self.power(ring)?);
        }
        let base = self.atom(ring)?;
        if self.eat_sym('^') {
            let e = self.integer()?;
            if e > u32::MAX as u64 {
                return self.err("exponent too large");
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self, ring: &RingRef) -> Result<Poly> {
        match self.peek().clone() {
            Tok::Num(..) => {
                let c = self.number(ring.field())?;
                Ok(Poly::constant(ring, c))
            }
            Tok::Ident(name) => match ring.var_index(&name) {
                Some(i) => {
                    self.bump();
                    Ok(Poly::var(ring, i))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Tok::Sym('(') => {
                self.bump();
                let p = self.poly(ring)?;
                self.expect_sym(')')?;
                Ok(p)
            }
            t => self.err(format!("expected a term, found {}", describe(&t))),
        }
    }

    /// `(p, q, ...)`; the empty list `()` is allowed.
    pub fn poly_list(&mut self, ring: &RingRef) -> Result<Vec<Poly>> {
        self.expect_sym('(')?;
        let mut out = Vec::new();
        if self.eat_sym(')') {
            return Ok(out);
        }
        loop {
            out.push(self.poly(ring)?);
            if self.eat_sym(')') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }
}

fn token_text(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => s.clone(),
        Tok::Num(i, None) => i.clone(),
        Tok::Num(i, Some(f)) => format!("{i}.{f}"),
        Tok::Sym(c) => c.to_string(),
        Tok::Eof => String::new(),
    }
}

fn join_tokens(toks: &[Token]) -> String {
    let mut out = String::new();
    let mut prev: Option<&Tok> = None;
    for t in toks {
        let tight_before = matches!(t.tok, Tok::Sym(',' | ')' | ']' | '}' | ';' | '^' | '*' | '/' | '['))
            || matches!(t.tok, Tok::Sym('(')) && matches!(prev, Some(Tok::Ident(_)));
        let tight_after = matches!(prev, Some(Tok::Sym('(' | '[' | '{' | '^' | '*' | '/' | '=')));
        let eq = matches!(t.tok, Tok::Sym('='));
        if prev.is_some() && !tight_before && !tight_after && !eq {
            out.push(' ');
        }
        out.push_str(&token_text(&t.tok));
        prev = Some(&t.tok);
    }
    out
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(i, None) => format!("`{i}`"),
        Tok::Num(i, Some(f)) => format!("`{i}.{f}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".to_string(),
    }
}
