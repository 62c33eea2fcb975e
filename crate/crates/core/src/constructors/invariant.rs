use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grade::koszul_grade;
use crate::groebner::Gb;
use crate::poly::{monomials_of_degree, Monomial, MonomialOrder, Poly, PolyRing, RingRef};
use crate::ring::{IdealHandle, IntOrInf, PresentedModule, PresentedRing, Ring};

/// A finite group acting linearly on the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupAction {
    /// Generators `σ` with `x_i ↦ x_σ(i)`.
    Permutations(Vec<Vec<usize>>),
    /// The cyclic group of order `modulus` acting by `x_i ↦ ζ^(w_i) x_i` for a
    /// primitive root of unity `ζ`. Invariant polynomials are the spans of
    /// monomials of weight `0 mod modulus`, so the invariant subring is
    /// defined over the base field even when `ζ` is not.
    Diagonal { weights: Vec<u32>, modulus: u32 },
}

pub struct InvariantRingPresentation {
    source: Ring,
    action: GroupAction,
    elements: Vec<Vec<usize>>,
    order: usize,
    generators: Vec<Poly>,
    tnames: Vec<String>,
    presentation: Ring,
    /// `k[x, t]` with the `x` block eliminated, and the basis of `(t_j - g_j)`.
    graph: Gb,
    verified_degree: u32,
}

fn close_permutations(n: usize, gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    for g in gens {
        let set: BTreeSet<usize> = g.iter().copied().collect();
        if g.len() != n || set.len() != n || set.iter().any(|&i| i >= n) {
            return Err(Error::Invalid(format!("{g:?} is not a permutation of {n} variables")));
        }
    }
    let id: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<usize> = (0..n).map(|i| g[p[i]]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

impl InvariantRingPresentation {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Names of the presentation variables, `t_j ↦ generators()[j]`.
    pub fn variables(&self) -> &[String] {
        &self.tnames
    }

    pub fn presentation(&self) -> &Ring {
        &self.presentation
    }

    /// Generation was checked on every invariant of degree at most this.
    pub fn verified_degree(&self) -> u32 {
        self.verified_degree
    }

    /// `ρ(f) = (1/|G|) Σ_g g·f`.
    pub fn reynolds(&self, f: &Poly) -> Result<Poly> {
        reynolds(&self.action, &self.elements, self.source.ambient(), f)
    }

    pub fn is_invariant(&self, f: &Poly) -> Result<bool> {
        Ok(&self.reynolds(f)? == f)
    }

    /// Image of a polynomial in the `t` variables under `t_j ↦ g_j`.
    pub fn embed(&self, f: &Poly) -> Result<Poly> {
        let images: BTreeMap<usize, Poly> = self.generators.iter().cloned().enumerate().collect();
        f.substitute(&images, self.source.ambient())
    }

    /// `aR` for an ideal `a` of the invariant ring.
    pub fn extend_ideal(&self, a: &IdealHandle) -> Result<IdealHandle> {
        let gens = a.gens().iter().map(|g| self.embed(g)).collect::<Result<Vec<_>>>()?;
        IdealHandle::new(&self.source, gens)
    }

    /// Whether `f` lies in the subalgebra generated by the invariant generators.
    pub fn in_subalgebra(&self, f: &Poly) -> Result<bool> {
        in_span(&self.graph, self.source.nvars(), f)
    }
}

fn reynolds(action: &GroupAction, elements: &[Vec<usize>], s: &RingRef, f: &Poly) -> Result<Poly> {
    match action {
        GroupAction::Diagonal { weights, modulus } => Ok(Poly::from_terms(
            s,
            f.terms()
                .filter(|(m, _)| {
                    let w: u64 = m.exps().iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum();
                    w % *modulus as u64 == 0
                })
                .map(|(m, c)| (m.clone(), c.clone())),
        )),
        GroupAction::Permutations(_) => {
            let mut acc = Poly::zero(s);
            for g in elements {
                acc = &acc + &f.map_vars(s, g);
            }
            let inv = s.field().from_usize(elements.len()).inv()?;
            Ok(acc.scale(&inv))
        }
    }
}

fn graph_basis(s: &RingRef, gens: &[Poly], tnames: &[String]) -> Result<Gb> {
    let n = s.nvars();
    let e = s.append_vars(tnames, MonomialOrder::Elimination(n));
    let rel = gens
        .iter()
        .enumerate()
        .map(|(j, g)| Ok(&Poly::var(&e, n + j) - &g.transfer(&e)?))
        .collect::<Result<Vec<_>>>()?;
    Gb::ideal(&e, &rel)
}

fn in_span(graph: &Gb, n: usize, f: &Poly) -> Result<bool> {
    let nf = graph.reduce_poly(&f.transfer(graph.ring())?)?;
    Ok(nf.support().iter().all(|&v| v >= n))
}

/// Row-echelon basis of a space of polynomials, keyed by leading monomial.
#[derive(Default)]
struct Echelon {
    rows: HashMap<Monomial, Poly>,
}

impl Echelon {
    fn reduce(&self, f: &Poly) -> Poly {
        let mut f = f.clone();
        let mut rem = Poly::zero(f.ring());
        while let Some(lm) = f.leading_monomial().cloned() {
            let lt = f.leading_term();
            match self.rows.get(&lm) {
                Some(b) => f = &f - &b.scale(f.leading_coefficient().unwrap()),
                None => {
                    rem = &rem + &lt;
                    f = &f - &lt;
                }
            }
        }
        rem
    }

    /// Adds `f` to the span; false when it was already there.
    fn insert(&mut self, f: &Poly) -> bool {
        let r = self.reduce(f);
        match r.leading_monomial().cloned() {
            Some(lm) => {
                self.rows.insert(lm, r.monic());
                true
            }
            None => false,
        }
    }
}

/// Products of the (homogeneous) generators of total degree `d`.
fn products_of_degree(s: &RingRef, gens: &[Poly], d: u32) -> Vec<Poly> {
    fn go(gens: &[Poly], start: usize, left: u32, cur: Poly, out: &mut Vec<Poly>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for (i, g) in gens.iter().enumerate().skip(start) {
            let e = g.total_degree().unwrap_or(0);
            if e > 0 && e <= left {
                go(gens, i, left - e, &cur * g, out);
            }
        }
    }
    let mut out = Vec::new();
    go(gens, 0, d, Poly::one(s), &mut out);
    out
}

fn fresh_stem(s: &RingRef, count: usize) -> Vec<String> {
    for stem in ["t", "u", "w", "inv"] {
        let names: Vec<String> = (0..count).map(|j| format!("{stem}{j}")).collect();
        if names.iter().all(|v| s.var_index(v).is_none()) {
            return names;
        }
    }
    (0..count).map(|j| s.fresh_var(&format!("t{j}_"))).collect()
}

/// `R^G` for a polynomial ring `R`: generators from Reynolds images of
/// monomials up to degree `|G|`, pruned by subalgebra membership, and the
/// presentation `k[t]/ker(t_j ↦ g_j)`.
pub fn invariant_ring(r: &Ring, action: GroupAction) -> Result<InvariantRingPresentation> {
    if !r.is_polynomial_ring() {
        return Err(Error::Invalid("invariant rings are built over polynomial rings".into()));
    }
    let s = r.ambient().clone();
    let n = s.nvars();
    let (elements, order) = match &action {
        GroupAction::Permutations(gens) => {
            let el = close_permutations(n, gens)?;
            let k = el.len();
            (el, k)
        }
        GroupAction::Diagonal { weights, modulus } => {
            if weights.len() != n || *modulus == 0 {
                return Err(Error::Invalid("diagonal action needs one weight per variable and a positive modulus".into()));
            }
            (Vec::new(), *modulus as usize)
        }
    };
    let ch = s.field().characteristic();
    if ch != 0 && order % ch as usize == 0 {
        return Err(Error::BadCharacteristic { order, characteristic: ch });
    }
    let mut gens: Vec<Poly> = Vec::new();
    for d in 1..=order as u32 {
        let mut span = Echelon::default();
        for p in products_of_degree(&s, &gens, d) {
            span.insert(&p);
        }
        for m in monomials_of_degree(n, d) {
            let f = reynolds(&action, &elements, &s, &Poly::monomial(&s, s.field().one(), m))?;
            if span.insert(&f) {
                gens.push(f.monic());
            }
        }
    }
    let tnames = fresh_stem(&s, gens.len());
    let graph = graph_basis(&s, &gens, &tnames)?;
    let verified_degree = order as u32 + 2;
    for d in 1..=verified_degree {
        for m in monomials_of_degree(n, d) {
            let f = reynolds(&action, &elements, &s, &Poly::monomial(&s, s.field().one(), m))?;
            if !f.is_zero() && !in_span(&graph, n, &f)? {
                return Err(Error::Invalid(format!("invariant {f} of degree {d} is not generated")));
            }
        }
    }
    let t = PolyRing::new(s.field(), tnames.clone(), MonomialOrder::DegRevLex);
    let kernel = graph
        .polys()
        .into_iter()
        .filter(|g| g.support().iter().all(|&v| v >= n))
        .map(|g| g.transfer(&t))
        .collect::<Result<Vec<_>>>()?;
    let presentation = PresentedRing::domain(&t, &kernel)?;
    Ok(InvariantRingPresentation {
        source: r.clone(),
        action,
        elements,
        order,
        generators: gens,
        tnames,
        presentation,
        graph,
        verified_degree,
    })
}

/// The `n`-th Veronese subring of `k[vars]`, as invariants of the cyclic
/// group of order `n` acting by the same root of unity on every variable.
pub fn veronese(r: &Ring, n: u32) -> Result<InvariantRingPresentation> {
    invariant_ring(r, GroupAction::Diagonal { weights: vec![1; r.nvars()], modulus: n })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub ideal: String,
    pub extended: String,
    pub grade_invariant: IntOrInf,
    pub grade_extended: IntOrInf,
    pub height_invariant: IntOrInf,
    pub height_extended: IntOrInf,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.grade_invariant == self.grade_extended && self.height_invariant == self.height_extended
    }
}

/// Grade and height of `a` in `R^G` against those of `aR` in `R`.
pub fn invariant_transfer_check(p: &InvariantRingPresentation, a: &IdealHandle) -> Result<TransferReport> {
    let ext = p.extend_ideal(a)?;
    let g_inv = koszul_grade(a, &PresentedModule::free(p.presentation(), 1))?.value;
    let g_ext = koszul_grade(&ext, &PresentedModule::free(p.source(), 1))?.value;
    Ok(TransferReport {
        ideal: a.to_string(),
        extended: ext.to_string(),
        grade_invariant: g_inv,
        grade_extended: g_ext,
        height_invariant: a.height()?,
        height_extended: ext.height()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn ring(field: Field, vars: &[&str]) -> Ring {
        let s = PolyRing::new(field, vars.iter().map(|v| v.to_string()).collect(), MonomialOrder::DegRevLex);
        PresentedRing::polynomial(&s)
    }

    fn strs(ps: &[Poly]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn veronese_two() {
        let r = ring(Field::Rational, &["x", "y"]);
        let v = veronese(&r, 2).unwrap();
        assert_eq!(strs(v.generators()), ["x^2", "x*y", "y^2"]);
        assert_eq!(strs(v.presentation().defining()), ["t1^2 - t0*t2"]);
        for k in v.presentation().defining() {
            assert!(v.embed(k).unwrap().is_zero());
        }
    }

    #[test]
    fn symmetric_functions() {
        let r = ring(Field::Rational, &["x", "y"]);
        let p = invariant_ring(&r, GroupAction::Permutations(vec![vec![1, 0]])).unwrap();
        assert_eq!(p.group_order(), 2);
        assert_eq!(p.generators().len(), 2);
        assert!(p.presentation().defining().is_empty());
        let xy = r.parse("x*y").unwrap();
        assert!(p.in_subalgebra(&xy).unwrap());
        assert!(!p.in_subalgebra(&r.parse("x").unwrap()).unwrap());
    }

    #[test]
    fn trivial_group() {
        let r = ring(Field::Rational, &["x", "y"]);
        let p = invariant_ring(&r, GroupAction::Permutations(Vec::new())).unwrap();
        assert_eq!(strs(p.generators()), ["x", "y"]);
        assert!(p.presentation().is_polynomial_ring());
    }

    #[test]
    fn bad_characteristic() {
        let r = ring(Field::prime(2).unwrap(), &["x", "y"]);
        let e = veronese(&r, 2).err().unwrap();
        assert!(matches!(e, Error::BadCharacteristic { order: 2, characteristic: 2 }));
    }

    #[test]
    fn reynolds_retraction() {
        let r = ring(Field::Rational, &["x", "y", "z"]);
        let p = invariant_ring(&r, GroupAction::Permutations(vec![vec![1, 2, 0]])).unwrap();
        let f = r.parse("x^2*y + 3*z").unwrap();
        let rf = p.reynolds(&f).unwrap();
        assert!(p.is_invariant(&rf).unwrap());
        assert_eq!(p.reynolds(&rf).unwrap(), rf);
        let h = p.generators()[0].clone();
        assert_eq!(p.reynolds(&(&h * &f)).unwrap(), &h * &rf);
    }

    #[test]
    fn transfer() {
        let r = ring(Field::Rational, &["x", "y"]);
        let v = veronese(&r, 2).unwrap();
        let t = v.presentation();
        for (gens, g, h) in [(vec!["t0", "t1", "t2"], 2, 2), (vec!["t0"], 1, 1)] {
            let a = IdealHandle::parse(t, &gens).unwrap();
            let rep = invariant_transfer_check(&v, &a).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert_eq!((rep.grade_invariant, rep.height_invariant), (IntOrInf::Fin(g), IntOrInf::Fin(h)));
        }
        let zero = IdealHandle::zero(t);
        let rep = invariant_transfer_check(&v, &zero).unwrap();
        assert_eq!((rep.grade_invariant, rep.grade_extended), (IntOrInf::Fin(0), IntOrInf::Fin(0)));
    }
}
