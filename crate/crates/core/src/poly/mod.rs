//! Multivariate polynomials over an exact field.

mod monomial;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use monomial::{monomials_of_degree, ModuleOrder, Monomial, MonomialOrder};

use crate::error::{Error, Result};
use crate::scalars::{Field, FieldElem};

/// A term of a sparse (module) vector: `coef * mon * e_pos`.
/// Polynomials use position 0 throughout.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub mon: Monomial,
    pub pos: u32,
    pub coef: FieldElem,
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}*{:?}e{}", self.coef, self.mon, self.pos)
    }
}

/// `a + c * m * b` for term lists sorted descending under `cmp`.
/// Multiplying by a monomial preserves any of the orders used here, so a
/// single merge pass suffices.
pub(crate) fn merge_axpy<F>(a: &[Term], c: &FieldElem, m: Option<&Monomial>, b: &[Term], cmp: F) -> Vec<Term>
where
    F: Fn(&Monomial, u32, &Monomial, u32) -> Ordering,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let scaled = |t: &Term| Term {
        mon: match m {
            Some(m) => t.mon.mul(m),
            None => t.mon.clone(),
        },
        pos: t.pos,
        coef: c * &t.coef,
    };
    let (mut i, mut j) = (0, 0);
    let mut pending: Option<Term> = None;
    loop {
        if pending.is_none() && j < b.len() {
            pending = Some(scaled(&b[j]));
            j += 1;
        }
        match (a.get(i), pending.as_ref()) {
            (None, None) => break,
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(_)) => {
                let t = pending.take().unwrap();
                if !t.coef.is_zero() {
                    out.push(t);
                }
            }
            (Some(x), Some(y)) => match cmp(&x.mon, x.pos, &y.mon, y.pos) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let t = pending.take().unwrap();
                    if !t.coef.is_zero() {
                        out.push(t);
                    }
                }
                Ordering::Equal => {
                    let s = &x.coef + &y.coef;
                    if !s.is_zero() {
                        out.push(Term { mon: x.mon.clone(), pos: x.pos, coef: s });
                    }
                    i += 1;
                    pending = None;
                }
            },
        }
    }
    out
}

/// Ambient polynomial ring `k[x_1..x_n]` with a fixed term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: Field,
    vars: Vec<String>,
    order: MonomialOrder,
}

pub type RingRef = Arc<PolyRing>;

impl PolyRing {
    pub fn new(field: Field, vars: Vec<String>, order: MonomialOrder) -> RingRef {
        Arc::new(PolyRing { field, vars, order })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables, different term order.
    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        PolyRing::new(self.field, self.vars.clone(), order)
    }

    /// `new_vars` prepended, with the given order (typically an elimination order).
    pub fn prepend_vars(&self, new_vars: &[String], order: MonomialOrder) -> RingRef {
        let mut vars = new_vars.to_vec();
        vars.extend(self.vars.iter().cloned());
        PolyRing::new(self.field, vars, order)
    }

    pub fn append_vars(&self, new_vars: &[String], order: MonomialOrder) -> RingRef {
        let mut vars = self.vars.clone();
        vars.extend(new_vars.iter().cloned());
        PolyRing::new(self.field, vars, order)
    }

    pub fn term_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    /// A variable name not already used by the ring.
    pub fn fresh_var(&self, stem: &str) -> String {
        let mut k = 0;
        loop {
            let name = if k == 0 { stem.to_string() } else { format!("{stem}{k}") };
            if self.var_index(&name).is_none() {
                return name;
            }
            k += 1;
        }
    }
}

/// A polynomial: nonzero terms sorted descending by the ring's order.
#[derive(Clone)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<Term>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: FieldElem) -> Poly {
        Poly::monomial(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &RingRef, n: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &RingRef, i: usize) -> Poly {
        Poly::monomial(ring, ring.field().one(), Monomial::var(ring.nvars(), i, 1))
    }

    pub fn monomial(ring: &RingRef, c: FieldElem, m: Monomial) -> Poly {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![Term { mon: m, pos: 0, coef: c }] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, zero) terms.
    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Poly {
        let mut acc: HashMap<Monomial, FieldElem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mon, coef)| Term { mon, pos: 0, coef })
            .collect();
        terms.sort_by(|a, b| ring.term_cmp(&b.mon, &a.mon));
        Poly { ring: ring.clone(), terms }
    }

    /// Terms must already be sorted and nonzero.
    pub(crate) fn from_sorted_terms(ring: &RingRef, terms: Vec<Term>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| ring.term_cmp(&w[0].mon, &w[1].mon) == Ordering::Greater));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mon.is_one())
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter().map(|t| (&t.mon, &t.coef))
    }

    pub(crate) fn raw_terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mon)
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElem> {
        self.terms.first().map(|t| &t.coef)
    }

    /// Leading term as a polynomial.
    pub fn leading_term(&self) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().take(1).cloned().collect() }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mon.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|t| t.mon.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Indices of variables occurring in the polynomial.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for t in &self.terms {
            for i in t.mon.support() {
                used[i] = true;
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.mon.exps()[i]).max().unwrap_or(0)
    }

    fn cmp_fn(&self) -> impl Fn(&Monomial, u32, &Monomial, u32) -> Ordering + '_ {
        move |a, _, b, _| self.ring.term_cmp(a, b)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let one = self.ring.field().one();
        let terms = merge_axpy(&self.terms, &one, None, &other.terms, self.cmp_fn());
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let m1 = -self.ring.field().one();
        let terms = merge_axpy(&self.terms, &m1, None, &other.terms, self.cmp_fn());
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        let (short, long) = if self.nterms() <= other.nterms() { (self, other) } else { (other, self) };
        let mut acc: Vec<Term> = Vec::new();
        for t in &short.terms {
            acc = merge_axpy(&acc, &t.coef, Some(&t.mon), &long.terms, self.cmp_fn());
        }
        Ok(Poly { ring: self.ring.clone(), terms: acc })
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|t| Term { mon: t.mon.clone(), pos: 0, coef: c * &t.coef }).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul_term(&self, c: &FieldElem, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|t| Term { mon: t.mon.mul(m), pos: 0, coef: c * &t.coef }).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Constant value when the polynomial is constant.
    pub fn constant_value(&self) -> Option<FieldElem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field().zero()),
            [t] if t.mon.is_one() => Some(t.coef.clone()),
            _ => None,
        }
    }

    /// Homomorphic image under `x_i -> images[i]` in `target`. Every variable
    /// that occurs in `self` must have an image.
    pub fn substitute(&self, images: &BTreeMap<usize, Poly>, target: &RingRef) -> Result<Poly> {
        let mut out = Poly::zero(target);
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        for t in &self.terms {
            let mut prod = Poly::constant(target, t.coef.clone());
            for (i, &e) in t.mon.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images
                    .get(&i)
                    .ok_or_else(|| Error::SubstitutionDomainError(self.ring.vars()[i].clone()))?;
                img.check(&out)?;
                let p = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                prod = &prod * &*p;
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Substitution keyed by variable names.
    pub fn substitute_named(&self, images: &BTreeMap<String, Poly>, target: &RingRef) -> Result<Poly> {
        let mut by_index = BTreeMap::new();
        for (name, p) in images {
            if let Some(i) = self.ring.var_index(name) {
                by_index.insert(i, p.clone());
            }
        }
        self.substitute(&by_index, target)
    }

    /// Re-embeds into `target`, sending variable `i` to variable `mapping[i]`.
    pub fn map_vars(&self, target: &RingRef, mapping: &[usize]) -> Poly {
        assert_eq!(self.field(), target.field());
        let n = target.nvars();
        Poly::from_terms(
            target,
            self.terms.iter().map(|t| {
                let mut m = Monomial::one(n);
                for (i, &e) in t.mon.exps().iter().enumerate() {
                    if e > 0 {
                        m.exps_mut()[mapping[i]] += e;
                    }
                }
                (m, t.coef.clone())
            }),
        )
    }

    /// Moves into a ring with the same variable list but another order.
    pub fn reorder(&self, target: &RingRef) -> Poly {
        assert_eq!(self.ring.vars(), target.vars());
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| target.term_cmp(&b.mon, &a.mon));
        Poly { ring: target.clone(), terms }
    }

    /// Moves into a ring whose variables are named the same (a superset,
    /// possibly reordered).
    pub fn transfer(&self, target: &RingRef) -> Result<Poly> {
        let mut mapping = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.vars().iter().enumerate() {
            match target.var_index(v) {
                Some(j) => mapping.push(j),
                None if self.degree_in(i) == 0 => mapping.push(usize::MAX),
                None => return Err(Error::SubstitutionDomainError(v.clone())),
            }
        }
        let n = target.nvars();
        Ok(Poly::from_terms(
            target,
            self.terms.iter().map(|t| {
                let mut m = Monomial::one(n);
                for (i, &e) in t.mon.exps().iter().enumerate() {
                    if e > 0 {
                        m.exps_mut()[mapping[i]] += e;
                    }
                }
                (m, t.coef.clone())
            }),
        ))
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }
}

macro_rules! poly_ops {
    ($($tr:ident $m:ident $try:ident),*) => {$(
        impl $tr for &Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                self.$try(o).expect("polynomials from different ambient rings")
            }
        }
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly { (&self).$m(&o) }
        }
    )*};
}
poly_ops!(Add add try_add, Sub sub try_sub, Mul mul try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-self.ring.field().one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_monomial(f: &mut impl fmt::Write, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(&vars[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coef.is_negative();
            let c = if neg { -&t.coef } else { t.coef.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if t.mon.is_one() {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                fmt_monomial(f, self.ring.vars(), &t.mon)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str], order: MonomialOrder) -> RingRef {
        PolyRing::new(Field::Rational, vars.iter().map(|s| s.to_string()).collect(), order)
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &(&x * &x) - &(&y * &y));
        assert_eq!(p.to_string(), "x^2 - y^2");
        assert_eq!(&p + &Poly::zero(&r), p);
    }

    #[test]
    fn lex_leading_term() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let f = &Poly::var(&r, 0) + &Poly::var(&r, 1).pow(5);
        assert_eq!(f.leading_term(), Poly::var(&r, 0));
    }

    #[test]
    fn ambient_mismatch() {
        let r1 = ring(&["x"], MonomialOrder::DegRevLex);
        let r2 = ring(&["y"], MonomialOrder::DegRevLex);
        assert_eq!(Poly::var(&r1, 0).try_add(&Poly::var(&r2, 0)), Err(Error::AmbientMismatch));
    }

    #[test]
    fn substitution_examples() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let xy = &x * &y;
        let map: BTreeMap<usize, Poly> = [(0, &x + &y), (1, &x - &y)].into_iter().collect();
        assert_eq!(xy.substitute(&map, &r).unwrap(), &(&x * &x) - &(&y * &y));
        let ident: BTreeMap<usize, Poly> = [(0, x.clone()), (1, y.clone())].into_iter().collect();
        assert_eq!((&x + &y).substitute(&ident, &r).unwrap(), &x + &y);
        let only_x: BTreeMap<usize, Poly> = [(0, y.clone())].into_iter().collect();
        assert_eq!(
            xy.substitute(&only_x, &r),
            Err(Error::SubstitutionDomainError("y".into()))
        );
    }

    #[test]
    fn level_rewrite_square() {
        // x -> y^2 sends x^2 to y^4
        let src = PolyRing::new(Field::Prime(2), vec!["x".into()], MonomialOrder::DegRevLex);
        let dst = PolyRing::new(Field::Prime(2), vec!["y".into()], MonomialOrder::DegRevLex);
        let map: BTreeMap<usize, Poly> = [(0, Poly::var(&dst, 0).pow(2))].into_iter().collect();
        assert_eq!(Poly::var(&src, 0).pow(2).substitute(&map, &dst).unwrap(), Poly::var(&dst, 0).pow(4));
    }
}
