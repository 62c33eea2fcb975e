//! The small amount of factoring the prime machinery needs: monomial content,
//! exact division, quadrics, and polynomials of degree one in some variable.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::groebner::intersect;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing, RingRef};
use crate::scalars::{Field, FieldElem};

/// `f / g` when `g` divides `f` exactly.
pub fn divide_exact(f: &Poly, g: &Poly) -> Option<Poly> {
    let ring = f.ring();
    let (gl, gc) = (g.leading_monomial()?, g.leading_coefficient()?.clone());
    let ginv = gc.inv().ok()?;
    let mut rem = f.clone();
    let mut quot = Poly::zero(ring);
    while let (Some(m), Some(c)) = (rem.leading_monomial().cloned(), rem.leading_coefficient().cloned()) {
        let q = m.div(gl)?;
        let qc = &c * &ginv;
        quot = &quot + &Poly::monomial(ring, qc.clone(), q.clone());
        rem = &rem - &g.mul_term(&qc, &q);
    }
    Some(quot)
}

/// Largest monomial dividing every term, and the cofactor.
pub fn monomial_content(f: &Poly) -> (Monomial, Poly) {
    let mut it = f.terms();
    let Some((m0, _)) = it.next() else {
        return (Monomial::one(f.ring().nvars()), f.clone());
    };
    let g = it.fold(m0.clone(), |acc, (m, _)| acc.gcd(m));
    let rest = Poly::from_terms(f.ring(), f.terms().map(|(m, c)| (m.div(&g).unwrap(), c.clone())));
    (g, rest)
}

/// Splits `f` into two non-unit factors when a cheap method finds one.
pub fn split(f: &Poly) -> Option<(Poly, Poly)> {
    if f.is_constant() {
        return None;
    }
    let (m, rest) = monomial_content(f);
    if !m.is_one() {
        if !rest.is_constant() {
            return Some((Poly::monomial(f.ring(), f.field().one(), m), rest));
        }
        // a monomial: split off one variable
        let v = m.support().next().unwrap();
        let n = f.ring().nvars();
        if m.degree() > 1 {
            let x = Poly::var(f.ring(), v);
            let other = Poly::monomial(f.ring(), rest.constant_value().unwrap(), m.div(&Monomial::var(n, v, 1)).unwrap());
            return Some((x, other));
        }
        return None;
    }
    if f.total_degree() == Some(2) {
        return factor_quadric(f);
    }
    None
}

/// Irreducibility when it can be decided cheaply; `None` when undecided.
pub fn is_irreducible(f: &Poly) -> Result<Option<bool>> {
    if f.is_constant() {
        return Ok(Some(false));
    }
    if f.total_degree() == Some(1) {
        return Ok(Some(true));
    }
    if split(f).is_some() {
        return Ok(Some(false));
    }
    if f.total_degree() == Some(2) {
        return Ok(Some(true));
    }
    // degree one in some variable v: f = A v + B is irreducible iff gcd(A, B) = 1
    for v in f.support() {
        if f.degree_in(v) != 1 {
            continue;
        }
        let (a, b) = coefficients_in(f, v);
        if b.is_zero() {
            return Ok(Some(a.is_constant()));
        }
        let l = intersect(f.ring(), std::slice::from_ref(&a), std::slice::from_ref(&b))?;
        let deg = |p: &Poly| p.total_degree().unwrap_or(0);
        return Ok(Some(l.len() == 1 && deg(&l[0]) == deg(&a) + deg(&b)));
    }
    Ok(None)
}

/// `f = A v + B` with `A, B` free of `v` (requires degree at most one in `v`).
fn coefficients_in(f: &Poly, v: usize) -> (Poly, Poly) {
    let ring = f.ring();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (m, c) in f.terms() {
        if m.exps()[v] == 1 {
            a.push((m.div(&Monomial::var(ring.nvars(), v, 1)).unwrap(), c.clone()));
        } else {
            b.push((m.clone(), c.clone()));
        }
    }
    (Poly::from_terms(ring, a), Poly::from_terms(ring, b))
}

/// Factors a quadric (total degree two) into two linear factors over the base
/// field, if possible.
pub fn factor_quadric(f: &Poly) -> Option<(Poly, Poly)> {
    let ring = f.ring();
    let n = ring.nvars();
    // homogenize with a trailing variable h
    let hname = ring.fresh_var("h");
    let hr = PolyRing::new(ring.field(), ring.vars().iter().cloned().chain([hname]).collect(), MonomialOrder::DegRevLex);
    let q = Poly::from_terms(
        &hr,
        f.terms().map(|(m, c)| {
            let mut e: Vec<u32> = m.exps().to_vec();
            e.push(2 - m.degree());
            (Monomial::new(e), c.clone())
        }),
    );
    let (l1, l2) = factor_quadric_form(&q)?;
    let dehom = |p: &Poly| {
        Poly::from_terms(ring, p.terms().map(|(m, c)| (Monomial::new(m.exps()[..n].iter().copied()), c.clone())))
    };
    let (a, b) = (dehom(&l1), dehom(&l2));
    (!a.is_constant() && !b.is_constant()).then_some((a, b))
}

fn quad_coeffs(q: &Poly) -> (BTreeMap<usize, FieldElem>, BTreeMap<(usize, usize), FieldElem>) {
    let mut sq = BTreeMap::new();
    let mut cross = BTreeMap::new();
    for (m, c) in q.terms() {
        let s: Vec<usize> = m.support().collect();
        match s.as_slice() {
            [i] => {
                sq.insert(*i, c.clone());
            }
            [i, j] => {
                cross.insert((*i, *j), c.clone());
            }
            _ => unreachable!("not a quadratic form"),
        }
    }
    (sq, cross)
}

fn linear(ring: &RingRef, coeffs: &[(usize, FieldElem)]) -> Poly {
    let n = ring.nvars();
    Poly::from_terms(ring, coeffs.iter().map(|(i, c)| (Monomial::var(n, *i, 1), c.clone())))
}

/// Factors a homogeneous quadratic form into linear forms.
fn factor_quadric_form(q: &Poly) -> Option<(Poly, Poly)> {
    let ring = q.ring();
    let field = ring.field();
    if field == Field::Prime(2) {
        return factor_char2(q);
    }
    let (sq, cross) = quad_coeffs(q);
    let cross_of = |i: usize, j: usize| cross.get(&(i.min(j), i.max(j))).cloned().unwrap_or_else(|| field.zero());
    match sq.iter().next() {
        Some((&v, a)) => {
            // q = a v^2 + B v + C; factors iff B^2 - 4 a C is a square of a linear form
            let others: Vec<usize> = q.support().into_iter().filter(|&i| i != v).collect();
            let b = linear(ring, &others.iter().map(|&i| (i, cross_of(v, i))).collect::<Vec<_>>());
            let c = Poly::from_terms(ring, q.terms().filter(|(m, _)| m.exps()[v] == 0).map(|(m, c)| (m.clone(), c.clone())));
            let d = &(&b * &b) - &c.scale(&(&field.from_i64(4) * a));
            let l = sqrt_quadratic_form(&d)?;
            let two_a_inv = (&field.from_i64(2) * a).inv().ok()?;
            let x = Poly::var(ring, v);
            let f1 = &x + &(&b - &l).scale(&two_a_inv);
            let f2 = (&x + &(&b + &l).scale(&two_a_inv)).scale(a);
            debug_assert_eq!(&f1 * &f2, *q);
            Some((f1, f2))
        }
        None => {
            // no squares: q = v B + C factors iff B divides C
            let v = *q.support().first()?;
            let x = Poly::var(ring, v);
            let others: Vec<usize> = q.support().into_iter().filter(|&i| i != v).collect();
            let b = linear(ring, &others.iter().map(|&i| (i, cross_of(v, i))).collect::<Vec<_>>());
            let c = Poly::from_terms(ring, q.terms().filter(|(m, _)| m.exps()[v] == 0).map(|(m, c)| (m.clone(), c.clone())));
            let l = divide_exact(&c, &b)?;
            Some((b, &x + &l))
        }
    }
}

/// `L` with `L^2 = d` for a quadratic form `d`, if one exists.
fn sqrt_quadratic_form(d: &Poly) -> Option<Poly> {
    let ring = d.ring();
    if d.is_zero() {
        return Some(Poly::zero(ring));
    }
    let field = ring.field();
    let (sq, cross) = quad_coeffs(d);
    let (&w, dw) = sq.iter().next()?;
    let s = dw.sqrt()?;
    let two_s_inv = (&field.from_i64(2) * &s).inv().ok()?;
    let mut coeffs = vec![(w, s)];
    for ((i, j), c) in &cross {
        if *i == w || *j == w {
            let u = if *i == w { *j } else { *i };
            coeffs.push((u, c * &two_s_inv));
        }
    }
    let l = linear(ring, &coeffs);
    (&l * &l == *d).then_some(l)
}

/// Characteristic two: try every monic linear factor.
fn factor_char2(q: &Poly) -> Option<(Poly, Poly)> {
    let ring = q.ring();
    let field = ring.field();
    let supp = q.support();
    let k = supp.len();
    for lead in 0..k {
        let rest = &supp[lead + 1..];
        for mask in 0u32..(1 << rest.len()) {
            let mut coeffs = vec![(supp[lead], field.one())];
            for (b, &i) in rest.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    coeffs.push((i, field.one()));
                }
            }
            let l = linear(ring, &coeffs);
            if let Some(other) = divide_exact(q, &l) {
                return Some((l, other));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_poly;

    fn ring(field: Field) -> RingRef {
        PolyRing::new(field, vec!["x".into(), "y".into(), "z".into()], MonomialOrder::DegRevLex)
    }

    #[test]
    fn quadrics() {
        let r = ring(Field::Rational);
        let p = |s| parse_poly(&r, s).unwrap();
        for s in ["x^2 - y^2", "x*y + x*z", "x^2 + 2*x*y + y^2", "x*y - x + y - 1", "2*x^2 - x*y - y^2 + z*x - z*y"] {
            let f = p(s);
            let (a, b) = factor_quadric(&f).unwrap_or_else(|| panic!("{s} should factor"));
            assert_eq!(&a * &b, f);
        }
        for s in ["x^2 + y^2", "x^2 - 2*y^2", "x*y - z^2", "x^2 + y*z", "x*y + z", "x^2 - y"] {
            assert!(factor_quadric(&p(s)).is_none(), "{s} should be irreducible");
        }
    }

    #[test]
    fn quadrics_char_two() {
        let r = ring(Field::Prime(2));
        let p = |s| parse_poly(&r, s).unwrap();
        let f = p("x^2 + y^2");
        let (a, b) = factor_quadric(&f).unwrap();
        assert_eq!(&a * &b, f);
        assert!(factor_quadric(&p("x^2 + x*y + y^2")).is_none());
    }

    #[test]
    fn irreducibility() {
        let r = ring(Field::Rational);
        let p = |s| parse_poly(&r, s).unwrap();
        assert_eq!(is_irreducible(&p("x*y^2 + z^3")).unwrap(), Some(true));
        assert_eq!(is_irreducible(&p("x*y^2 + x*z^3")).unwrap(), Some(false));
        assert_eq!(is_irreducible(&p("x*y^2 - x*z^2 + y^2 - z^2")).unwrap(), Some(false));
        assert_eq!(is_irreducible(&p("x^2 - y*z")).unwrap(), Some(true));
    }
}
