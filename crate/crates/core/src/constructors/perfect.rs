use serde::Serialize;

use crate::error::{Error, Result};
use crate::grade::koszul_grade;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing};
use crate::ring::{IdealHandle, IntOrInf, PresentedModule, PresentedRing, Ring};
use crate::scalars::Field;

/// A polynomial in `x_1..x_d` whose exponents lie in `Z[1/p]`, stored as
/// `(coefficient, [(numerator, denominator)])` per term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracPoly {
    pub terms: Vec<(i64, Vec<(u64, u64)>)>,
}

impl FracPoly {
    /// Largest exponent denominator.
    pub fn denominator(&self) -> u64 {
        self.terms.iter().flat_map(|(_, e)| e.iter().map(|&(_, d)| d)).max().unwrap_or(1)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parses `c*x^(a/b)*z^{c/d} - ...` over the given variables. Exponents may be
/// integers, `(a/b)` or `{a/b}`.
pub fn parse_fractional(vars: &[String], src: &str) -> Result<FracPoly> {
    let err = |msg: String| Error::Syntax { line: 1, col: 1, msg };
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty polynomial".into()));
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let mut neg = false;
    for (i, c) in s.chars().enumerate() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if (c == '+' || c == '-') && depth == 0 {
            if i > 0 {
                if cur.is_empty() {
                    return Err(err(format!("empty term in `{src}`")));
                }
                pieces.push((neg, std::mem::take(&mut cur)));
            }
            neg = c == '-';
        } else {
            cur.push(c);
        }
    }
    if cur.is_empty() {
        return Err(err(format!("empty term in `{src}`")));
    }
    pieces.push((neg, cur));
    let mut terms = Vec::new();
    for (neg, t) in pieces {
        let mut coef: i64 = if neg { -1 } else { 1 };
        let mut exps = vec![(0u64, 1u64); vars.len()];
        for f in t.split('*') {
            if f.is_empty() {
                return Err(err(format!("empty factor in `{src}`")));
            }
            if let Ok(c) = f.parse::<i64>() {
                coef *= c;
                continue;
            }
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.trim_start_matches(['(', '{']).trim_end_matches([')', '}'])),
                None => (f, "1"),
            };
            let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownReference(name.into()))?;
            let (a, b) = match e.split_once('/') {
                Some((a, b)) => (a, b),
                None => (e, "1"),
            };
            let bad = || err(format!("bad exponent `{e}`"));
            let a: u64 = a.parse().map_err(|_| bad())?;
            let b: u64 = b.parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            let (n0, d0) = exps[i];
            let num = n0 * b + a * d0;
            let den = d0 * b;
            let g = gcd(num, den).max(1);
            exps[i] = (num / g, den / g);
        }
        terms.push((coef, exps));
    }
    Ok(FracPoly { terms })
}

/// The level ring `F_p[y_1..y_d]` with `x_i = y_i^(p^level)`. Variables keep
/// the names of the `x_i`.
#[derive(Clone)]
pub struct PerfectClosureLevel {
    p: u32,
    level: u32,
    vars: Vec<String>,
    ring: Ring,
}

impl PerfectClosureLevel {
    pub fn new(p: u32, vars: &[String], level: u32) -> Result<PerfectClosureLevel> {
        let field = Field::prime(p as u64)?;
        let s = PolyRing::new(field, vars.to_vec(), MonomialOrder::DegRevLex);
        Ok(PerfectClosureLevel { p, level, vars: vars.to_vec(), ring: PresentedRing::domain(&s, &[])? })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn scale(&self) -> u64 {
        (self.p as u64).pow(self.level)
    }

    /// Least level at which every exponent of `f` becomes an integer.
    pub fn required_level(p: u32, f: &FracPoly) -> Result<u32> {
        let mut need = 0;
        for (_, exps) in &f.terms {
            for &(_, d) in exps {
                let (mut d, mut k) = (d, 0);
                while d % p as u64 == 0 {
                    d /= p as u64;
                    k += 1;
                }
                if d != 1 {
                    return Err(Error::Invalid(format!("exponent denominator is not a power of {p}")));
                }
                need = need.max(k);
            }
        }
        Ok(need)
    }

    /// `f` rewritten in the level ring by multiplying exponents by `p^level`.
    pub fn embed(&self, f: &FracPoly) -> Result<Poly> {
        let need = Self::required_level(self.p, f)?;
        if need > self.level {
            return Err(Error::LevelTooLow { denominator: f.denominator(), needed: need, level: self.level });
        }
        let q = self.scale();
        let s = self.ring.ambient();
        let field = s.field();
        Ok(Poly::from_terms(
            s,
            f.terms.iter().map(|(c, exps)| {
                let m = Monomial::new(exps.iter().map(|&(a, b)| (a * (q / b)) as u32));
                (m, field.from_i64(*c))
            }),
        ))
    }

    /// The embedding into the next level, `y_i ↦ y_i^p`.
    pub fn lift(&self, f: &Poly, next: &PerfectClosureLevel) -> Poly {
        let s = next.ring.ambient();
        Poly::from_terms(
            s,
            f.terms().map(|(m, c)| (Monomial::new(m.exps().iter().map(|&e| e * self.p)), c.clone())),
        )
    }

    pub fn next(&self) -> Result<PerfectClosureLevel> {
        PerfectClosureLevel::new(self.p, &self.vars, self.level + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectReport {
    pub level: u32,
    pub ideal: String,
    pub grade: IntOrInf,
    pub height: IntOrInf,
    pub next_grade: IntOrInf,
    pub next_height: IntOrInf,
}

impl PerfectReport {
    pub fn stable(&self) -> bool {
        self.grade == self.next_grade && self.height == self.next_height
    }
}

/// Grade and height of `(gens)` in the perfect closure of `F_p[vars]`, read
/// off at `level` and rechecked at `level + 1`.
pub fn perfect_closure_ops(p: u32, vars: &[String], level: u32, gens: &[&str]) -> Result<PerfectReport> {
    let fs = gens.iter().map(|g| parse_fractional(vars, g)).collect::<Result<Vec<_>>>()?;
    let here = PerfectClosureLevel::new(p, vars, level)?;
    let up = here.next()?;
    let at_here = fs.iter().map(|f| here.embed(f)).collect::<Result<Vec<_>>>()?;
    let at_up: Vec<Poly> = at_here.iter().map(|f| here.lift(f, &up)).collect();
    let gh = |ring: &Ring, gens: Vec<Poly>| -> Result<(IntOrInf, IntOrInf, String)> {
        let a = IdealHandle::new(ring, gens)?;
        let g = koszul_grade(&a, &PresentedModule::free(ring, 1))?.value;
        Ok((g, a.height()?, a.to_string()))
    };
    let (grade, height, ideal) = gh(here.ring(), at_here)?;
    let (next_grade, next_height, _) = gh(up.ring(), at_up)?;
    Ok(PerfectReport { level, ideal, grade, height, next_grade, next_height })
}
