//! Ideal operations in the ambient ring, all reduced to Gröbner computations.

use super::{poly_syzygies, syzygies, Gb, ModuleElem};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly, PolyRing, RingRef};

/// Generators of `(a : f)`.
pub fn colon(ring: &RingRef, a: &[Poly], f: &Poly) -> Result<Vec<Poly>> {
    if f.is_zero() {
        return Err(Error::ZeroColonDivisor);
    }
    let mut gens = Vec::with_capacity(a.len() + 1);
    gens.push(f.clone());
    gens.extend(a.iter().cloned());
    let syz = poly_syzygies(ring, &gens)?;
    let out: Vec<Poly> = syz.iter().map(|s| s.component(0)).filter(|p| !p.is_zero()).collect();
    Ok(reduced_gens(ring, &out)?)
}

/// Generators of `(N :_S v) = {g : g v in N}` for a submodule `N` of `S^rank`.
pub fn module_colon(ring: &RingRef, rank: usize, n: &[ModuleElem], v: &ModuleElem) -> Result<Vec<Poly>> {
    if v.is_zero() {
        return Err(Error::ZeroColonDivisor);
    }
    let mut gens = Vec::with_capacity(n.len() + 1);
    gens.push(v.clone());
    gens.extend(n.iter().cloned());
    let syz = syzygies(ring, rank, &gens)?;
    let out: Vec<Poly> = syz.iter().map(|s| s.component(0)).filter(|p| !p.is_zero()).collect();
    reduced_gens(ring, &out)
}

/// Reduced Gröbner basis polynomials of the ideal, as a generator list.
pub fn reduced_gens(ring: &RingRef, gens: &[Poly]) -> Result<Vec<Poly>> {
    Ok(Gb::ideal(ring, gens)?.polys())
}

/// Ring with `extra` variables placed first and an elimination order for them.
fn elimination_ring(ring: &RingRef, extra: &[String]) -> RingRef {
    ring.prepend_vars(extra, MonomialOrder::Elimination(extra.len()))
}

/// `a ∩ S'` where `S'` is the subring on the variables not listed in `elim`.
/// The result lives in `ring`.
pub fn eliminate(ring: &RingRef, gens: &[Poly], elim: &[usize]) -> Result<Vec<Poly>> {
    let k = elim.len();
    let rest: Vec<usize> = (0..ring.nvars()).filter(|i| !elim.contains(i)).collect();
    let mut names: Vec<String> = elim.iter().map(|&i| ring.vars()[i].clone()).collect();
    names.extend(rest.iter().map(|&i| ring.vars()[i].clone()));
    let er = PolyRing::new(ring.field(), names, MonomialOrder::Elimination(k));
    let mut mapping = vec![0; ring.nvars()];
    for (slot, &i) in elim.iter().chain(rest.iter()).enumerate() {
        mapping[i] = slot;
    }
    let moved: Vec<Poly> = gens.iter().map(|g| g.map_vars(&er, &mapping)).collect();
    let gb = Gb::ideal(&er, &moved)?;
    let mut back = vec![0; ring.nvars()];
    for (i, &slot) in mapping.iter().enumerate() {
        back[slot] = i;
    }
    let kept: Vec<Poly> = gb
        .polys()
        .into_iter()
        .filter(|g| g.support().iter().all(|&v| v >= k))
        .map(|g| g.map_vars(ring, &back))
        .collect();
    reduced_gens(ring, &kept)
}

/// Generators of `a ∩ b` via `(t a + (1 - t) b) ∩ S`.
pub fn intersect(ring: &RingRef, a: &[Poly], b: &[Poly]) -> Result<Vec<Poly>> {
    let t = ring.fresh_var("t");
    let er = elimination_ring(ring, &[t]);
    let shift: Vec<usize> = (1..=ring.nvars()).collect();
    let tv = Poly::var(&er, 0);
    let omt = &Poly::one(&er) - &tv;
    let mut gens = Vec::new();
    for g in a {
        gens.push(&tv * &g.map_vars(&er, &shift));
    }
    for g in b {
        gens.push(&omt * &g.map_vars(&er, &shift));
    }
    let gb = Gb::ideal(&er, &gens)?;
    let back: Vec<usize> = std::iter::once(usize::MAX).chain(0..ring.nvars()).collect();
    let kept: Vec<Poly> = gb
        .polys()
        .into_iter()
        .filter(|g| g.degree_in(0) == 0)
        .map(|g| strip_first(&g, ring, &back))
        .collect();
    reduced_gens(ring, &kept)
}

fn strip_first(g: &Poly, ring: &RingRef, back: &[usize]) -> Poly {
    let n = ring.nvars();
    Poly::from_terms(
        ring,
        g.terms().map(|(m, c)| {
            let exps: Vec<u32> = (0..n).map(|i| m.exps()[i + 1]).collect();
            debug_assert_eq!(back[0], usize::MAX);
            (crate::poly::Monomial::new(exps), c.clone())
        }),
    )
}

/// `a : f^∞` by iterated colons, with the first `k` where `(a : f^k) = (a : f^{k+1})`.
pub fn saturation(ring: &RingRef, a: &[Poly], f: &Poly) -> Result<(Vec<Poly>, u32)> {
    if f.is_zero() {
        return Err(Error::ZeroColonDivisor);
    }
    let mut cur = reduced_gens(ring, a)?;
    let mut k = 0;
    loop {
        let next = colon(ring, &cur, f)?;
        if next == cur {
            return Ok((cur, k));
        }
        cur = next;
        k += 1;
    }
}

/// Whether `f` lies in the radical of `a`: `1 ∈ (a, 1 - t f)`.
pub fn radical_member(ring: &RingRef, f: &Poly, a: &[Poly]) -> Result<bool> {
    let t = ring.fresh_var("t");
    let er = ring.append_vars(&[t], ring.order());
    let map: Vec<usize> = (0..ring.nvars()).collect();
    let tv = Poly::var(&er, ring.nvars());
    let mut gens: Vec<Poly> = a.iter().map(|g| g.map_vars(&er, &map)).collect();
    gens.push(&Poly::one(&er) - &(&tv * &f.map_vars(&er, &map)));
    Ok(Gb::ideal(&er, &gens)?.is_whole())
}

/// Generators of `a · b`.
pub fn product(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for f in a {
        for g in b {
            let p = f * g;
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Generators of `a^n` (`n = 0` gives the unit ideal).
pub fn power(ring: &RingRef, a: &[Poly], n: u32) -> Vec<Poly> {
    let mut acc = vec![Poly::one(ring)];
    for _ in 0..n {
        acc = product(&acc, a);
    }
    acc
}

/// Ideal equality through reduced bases.
pub fn same_ideal(ring: &RingRef, a: &[Poly], b: &[Poly]) -> Result<bool> {
    Ok(reduced_gens(ring, a)? == reduced_gens(ring, b)?)
}

/// `a ⊆ b`.
pub fn ideal_contained(ring: &RingRef, a: &[Poly], b: &[Poly]) -> Result<bool> {
    let gb = Gb::ideal(ring, b)?;
    for f in a {
        if !gb.contains_poly(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_poly;
    use crate::scalars::Field;

    fn setup(vars: &[&str]) -> RingRef {
        PolyRing::new(Field::Rational, vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::DegRevLex)
    }

    fn ps(r: &RingRef, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| parse_poly(r, x).unwrap()).collect()
    }

    #[test]
    fn colon_examples() {
        let r = setup(&["x", "y", "z"]);
        let x = parse_poly(&r, "x").unwrap();
        let y = parse_poly(&r, "y").unwrap();
        assert!(same_ideal(&r, &colon(&r, &ps(&r, &["x^2", "x*y"]), &x).unwrap(), &ps(&r, &["x", "y"])).unwrap());
        assert!(same_ideal(&r, &colon(&r, &ps(&r, &["x"]), &y).unwrap(), &ps(&r, &["x"])).unwrap());
        assert!(same_ideal(&r, &colon(&r, &ps(&r, &["x*y", "x*z"]), &x).unwrap(), &ps(&r, &["y", "z"])).unwrap());
        assert_eq!(colon(&r, &ps(&r, &["x"]), &Poly::zero(&r)), Err(Error::ZeroColonDivisor));
    }

    #[test]
    fn intersection_examples() {
        let r = setup(&["x", "y", "z"]);
        let i = intersect(&r, &ps(&r, &["x"]), &ps(&r, &["y", "z"])).unwrap();
        assert_eq!(i, ps(&r, &["x*z", "x*y"]));
        let i = intersect(&r, &ps(&r, &["x"]), &ps(&r, &["y"])).unwrap();
        assert_eq!(i, ps(&r, &["x*y"]));
        let a = ps(&r, &["x^2 - y", "z*y"]);
        assert!(same_ideal(&r, &intersect(&r, &a, &a).unwrap(), &a).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let r = setup(&["x", "y"]);
        let x = parse_poly(&r, "x").unwrap();
        let y = parse_poly(&r, "y").unwrap();
        let (s, _) = saturation(&r, &ps(&r, &["x^2*y"]), &x).unwrap();
        assert_eq!(s, ps(&r, &["y"]));
        let (s, k) = saturation(&r, &ps(&r, &["x"]), &y).unwrap();
        assert_eq!((s, k), (ps(&r, &["x"]), 0));
        // (x^2, xy) : x = (x, y); (x, y) : x = (1)
        let (s, k) = saturation(&r, &ps(&r, &["x^2", "x*y"]), &x).unwrap();
        assert_eq!((s, k), (ps(&r, &["1"]), 2));
    }

    #[test]
    fn radical_examples() {
        let r = setup(&["x", "y"]);
        let f = |s| parse_poly(&r, s).unwrap();
        assert!(radical_member(&r, &f("x"), &ps(&r, &["x^2"])).unwrap());
        assert!(!radical_member(&r, &f("y"), &ps(&r, &["x^2"])).unwrap());
        assert!(radical_member(&r, &f("x+y"), &ps(&r, &["x^2", "y^2"])).unwrap());
    }
}
