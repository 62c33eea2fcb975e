use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Integer part and optional digits after a decimal point.
    Num(String, Option<String>),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[s..i].iter().collect();
            let mut frac = None;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                let f0 = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = Some(chars[f0..i].iter().collect());
            }
            col += i - s;
            out.push(Token { tok: Tok::Num(int, frac), line: l0, col: c0 });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - s;
            out.push(Token { tok: Tok::Ident(chars[s..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if "+-*/^()[],;={}|:.".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
