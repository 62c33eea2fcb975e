use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

pub type Exponents = SmallVec<[u32; 8]>;

/// Exponent vector of a monomial; the length is the number of ambient variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Exponents);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn new(exps: impl IntoIterator<Item = u32>) -> Monomial {
        Monomial(exps.into_iter().collect())
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Exponents::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a.checked_mul(e).expect("exponent overflow")).collect())
    }

    /// Variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    pub(crate) fn exps_mut(&mut self) -> &mut Exponents {
        &mut self.0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Term orders on monomials. `Elimination(k)` compares the first `k`
/// variables by degrevlex first, then the rest by degrevlex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    Elimination(usize),
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.as_slice().cmp(b.0.as_slice()),
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::Elimination(k) => {
                let k = (*k).min(a.0.len());
                match degrevlex(&a.0[..k], &b.0[..k]) {
                    Ordering::Equal => degrevlex(&a.0[k..], &b.0[k..]),
                    o => o,
                }
            }
        }
    }
}

/// How module terms `m e_i` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleOrder {
    /// Monomial first, then position (`e_0 > e_1 > ...`).
    TermOverPosition,
    /// Position first (`e_0 > e_1 > ...`), then monomial.
    PositionOverTerm,
}

/// All monomials of total degree `d` in `n` variables, descending in the
/// first variable's exponent.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn go(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur.push(left);
            out.push(Monomial::new(cur.iter().copied()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, n, d, &mut Vec::new(), &mut out);
    }
    out
}
