//! Input language: polynomial expressions and session scripts.

mod lexer;
mod parser;
mod session;

pub use lexer::{tokenize, Tok, Token};
pub use parser::Cursor;
pub use session::{Binding, Options, Output, PerfectSpec, Session};

use crate::error::Result;
use crate::poly::{Poly, RingRef};

/// Parses a polynomial such as `x^2*y - 3/2*z` in `ring`.
pub fn parse_poly(ring: &RingRef, src: &str) -> Result<Poly> {
    let mut c = Cursor::new(tokenize(src)?);
    let p = c.poly(ring)?;
    if !c.at_eof() {
        return c.err(format!("unexpected {}", parser::describe(c.peek())));
    }
    Ok(p)
}
