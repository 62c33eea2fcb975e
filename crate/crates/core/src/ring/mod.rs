//! Presented rings `R = S/I`, their ideals and finitely presented modules.
//!
//! Everything is computed in the ambient polynomial ring `S`: an ideal of `R`
//! is stored through its preimage, a module as `S^b / (relations + I S^b)`.

pub mod dim;
pub mod primes;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groebner::{self, module_colon, Gb, ModuleElem};
use crate::homology;
use crate::poly::{ModuleOrder, Poly, RingRef};
pub use primes::AmbientPrime;

/// A nonnegative integer or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntOrInf {
    Fin(usize),
    Inf,
}

impl IntOrInf {
    pub fn finite(self) -> Option<usize> {
        match self {
            IntOrInf::Fin(n) => Some(n),
            IntOrInf::Inf => None,
        }
    }
}

impl fmt::Display for IntOrInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntOrInf::Fin(n) => write!(f, "{n}"),
            IntOrInf::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for IntOrInf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IntOrInf::Fin(n) => s.serialize_u64(*n as u64),
            IntOrInf::Inf => s.serialize_str("inf"),
        }
    }
}

/// `S / I` with the Gröbner basis of `I` and lazily computed invariants.
pub struct PresentedRing {
    ambient: RingRef,
    defining: Vec<Poly>,
    gb: Gb,
    known_prime: bool,
    min_primes: OnceLock<Vec<AmbientPrime>>,
}

pub type Ring = Arc<PresentedRing>;

impl fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.ambient.field(), self.ambient.vars().join(","))?;
        if !self.defining.is_empty() {
            let gens: Vec<String> = self.defining.iter().map(|p| p.to_string()).collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

impl PresentedRing {
    pub fn new(ambient: &RingRef, gens: &[Poly]) -> Result<Ring> {
        PresentedRing::build(ambient, gens, false)
    }

    /// The polynomial ring itself.
    pub fn polynomial(ambient: &RingRef) -> Ring {
        PresentedRing::build(ambient, &[], true).expect("zero ideal")
    }

    /// A quotient whose defining ideal is known to be prime, such as the
    /// kernel of a map into a polynomial ring.
    pub fn domain(ambient: &RingRef, gens: &[Poly]) -> Result<Ring> {
        PresentedRing::build(ambient, gens, true)
    }

    fn build(ambient: &RingRef, gens: &[Poly], known_prime: bool) -> Result<Ring> {
        for g in gens {
            if g.ring() != ambient {
                return Err(Error::AmbientMismatch);
            }
        }
        let gb = Gb::ideal(ambient, gens)?;
        let defining = gb.polys();
        Ok(Arc::new(PresentedRing { ambient: ambient.clone(), defining, gb, known_prime, min_primes: OnceLock::new() }))
    }

    pub fn ambient(&self) -> &RingRef {
        &self.ambient
    }

    /// Reduced Gröbner basis of the defining ideal.
    pub fn defining(&self) -> &[Poly] {
        &self.defining
    }

    pub fn gb(&self) -> &Gb {
        &self.gb
    }

    pub fn is_zero_ring(&self) -> bool {
        self.gb.is_whole()
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.defining.is_empty()
    }

    pub fn known_prime(&self) -> bool {
        self.known_prime
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(&self.ambient, i)
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        crate::dsl::parse_poly(&self.ambient, s)
    }

    /// Canonical representative modulo `I`.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        self.gb.reduce_poly(f)
    }

    /// `R[new_vars]`, the new variables appended after the old ones.
    pub fn adjoin(&self, new_vars: &[String]) -> Result<Ring> {
        let s = self.ambient.append_vars(new_vars, self.ambient.order());
        let gens = self.defining.iter().map(|g| g.transfer(&s)).collect::<Result<Vec<_>>>()?;
        PresentedRing::build(&s, &gens, self.known_prime)
    }

    pub fn krull_dim(&self) -> Result<usize> {
        dim::dim_of_gb(&self.gb).ok_or(Error::ZeroRing)
    }

    /// `Min(I)` as ambient primes.
    pub fn min_primes_ambient(&self) -> Result<&[AmbientPrime]> {
        if let Some(v) = self.min_primes.get() {
            return Ok(v);
        }
        let v = primes::ambient_min_primes(&self.ambient, &self.defining, self.known_prime)?;
        Ok(self.min_primes.get_or_init(|| v))
    }

    /// `ht_R(P / I)` for an ambient prime `P ⊇ I`: the longest chain down to
    /// a minimal prime of `R`, using catenarity of affine domains.
    pub fn prime_height(&self, p: &AmbientPrime) -> Result<usize> {
        let mut best = 0;
        for q in self.min_primes_ambient()? {
            if groebner::ideal_contained(&self.ambient, &q.gens, &p.gens)? {
                best = best.max(q.dim - p.dim);
            }
        }
        Ok(best)
    }

    /// Height of `(gens + I) / I`, `Inf` for the unit ideal.
    pub fn height_of(&self, gens: &[Poly]) -> Result<IntOrInf> {
        let mut all = self.defining.clone();
        all.extend(gens.iter().cloned());
        let mins = primes::ambient_min_primes(&self.ambient, &all, self.known_prime && gens.iter().all(|g| self.gb.contains_poly(g).unwrap_or(false)))?;
        if mins.is_empty() {
            return Ok(IntOrInf::Inf);
        }
        let mut h = usize::MAX;
        for p in &mins {
            h = h.min(self.prime_height(p)?);
        }
        Ok(IntOrInf::Fin(h))
    }
}

/// A finitely generated ideal of a presented ring.
#[derive(Clone)]
pub struct IdealHandle {
    ring: Ring,
    gens: Vec<Poly>,
    gb: Arc<Gb>,
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl IdealHandle {
    pub fn new(ring: &Ring, gens: Vec<Poly>) -> Result<IdealHandle> {
        for g in &gens {
            if g.ring() != ring.ambient() {
                return Err(Error::AmbientMismatch);
            }
        }
        let gb = Arc::new(ring.gb.extend_polys(&gens)?);
        Ok(IdealHandle { ring: ring.clone(), gens, gb })
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<IdealHandle> {
        let polys = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        IdealHandle::new(ring, polys)
    }

    pub fn zero(ring: &Ring) -> IdealHandle {
        IdealHandle::new(ring, Vec::new()).expect("zero ideal")
    }

    /// The ideal generated by all variables.
    pub fn irrelevant(ring: &Ring) -> IdealHandle {
        IdealHandle::new(ring, (0..ring.nvars()).map(|i| ring.var(i)).collect()).expect("variables")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Nonzero generators modulo `I`.
    pub fn nonzero_gens(&self) -> Vec<Poly> {
        self.gens.iter().filter(|g| !self.ring.gb.contains_poly(g).unwrap_or(false)).cloned().collect()
    }

    /// Reduced Gröbner basis of the preimage `gens + I`.
    pub fn preimage(&self) -> Vec<Poly> {
        self.gb.polys()
    }

    pub fn gb(&self) -> &Gb {
        &self.gb
    }

    pub fn is_unit(&self) -> bool {
        self.gb.is_whole()
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        self.gb.contains_poly(f)
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same(&self, other: &IdealHandle) -> bool {
        self.preimage() == other.preimage()
    }

    pub fn height(&self) -> Result<IntOrInf> {
        self.ring.height_of(&self.gens)
    }

    /// `Min(a)` with primality certificates; `UnitIdeal` for `a = R`.
    pub fn minimal_primes(&self) -> Result<Vec<PrimeWitness>> {
        if self.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let known = self.ring.known_prime && self.nonzero_gens().is_empty();
        let mins = primes::ambient_min_primes(self.ring.ambient(), &self.preimage(), known)?;
        mins.into_iter()
            .map(|p| {
                Ok(PrimeWitness { ideal: IdealHandle::new(&self.ring, p.gens.clone())?, certified: p.certified, dim: p.dim })
            })
            .collect()
    }

    /// `R / a` as a module.
    pub fn quotient_module(&self) -> PresentedModule {
        let rels = self.gens.iter().map(|g| ModuleElem::from_polys(self.ring.ambient(), std::slice::from_ref(g))).collect();
        PresentedModule::new(&self.ring, 1, rels)
    }

    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        IdealHandle::new(&self.ring, g)
    }

    pub fn power(&self, n: u32) -> Result<IdealHandle> {
        let gens = groebner::power(self.ring.ambient(), &self.nonzero_gens(), n);
        IdealHandle::new(&self.ring, gens)
    }

    /// `(a :_R f)`, through the preimage.
    pub fn colon(&self, f: &Poly) -> Result<IdealHandle> {
        if self.ring.gb.contains_poly(f)? {
            return Err(Error::ZeroColonDivisor);
        }
        IdealHandle::new(&self.ring, groebner::colon(self.ring.ambient(), &self.preimage(), f)?)
    }

    /// Generators left after greedily dropping those that lie in the ideal
    /// of the others.
    pub fn minimal_gens(&self) -> Result<Vec<Poly>> {
        let mut kept = self.nonzero_gens();
        let mut seen = Vec::new();
        kept.retain(|g| {
            let fresh = !seen.contains(g);
            seen.push(g.clone());
            fresh
        });
        // try to drop high-degree generators first
        let mut order: Vec<Poly> = kept.clone();
        order.sort_by_key(|g| std::cmp::Reverse((g.total_degree(), g.nterms())));
        for g in order {
            let others: Vec<Poly> = self.ring.defining.iter().chain(kept.iter().filter(|k| **k != g)).cloned().collect();
            if Gb::ideal(self.ring.ambient(), &others)?.contains_poly(&g)? {
                kept.retain(|k| *k != g);
            }
        }
        Ok(kept)
    }

    /// Upper bound for the minimal number of generators.
    pub fn mu_hat(&self) -> Result<usize> {
        Ok(self.minimal_gens()?.len())
    }
}

/// A prime of a presented ring with its certification status.
#[derive(Clone, Debug)]
pub struct PrimeWitness {
    pub ideal: IdealHandle,
    pub certified: bool,
    /// `dim S / P`.
    pub dim: usize,
}

impl PrimeWitness {
    pub fn height(&self) -> Result<usize> {
        let ap = AmbientPrime { gens: self.ideal.preimage(), certified: self.certified, dim: self.dim };
        self.ideal.ring.prime_height(&ap)
    }

    /// Wraps an ideal asserted to be prime, certifying it when possible.
    pub fn from_ideal(ideal: IdealHandle) -> Result<PrimeWitness> {
        if ideal.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let pre = ideal.preimage();
        let certified = primes::certify(ideal.ring.ambient(), &pre)?
            || (ideal.ring.known_prime && ideal.nonzero_gens().is_empty());
        let dim = dim::dim_of_gb(ideal.gb()).expect("proper");
        Ok(PrimeWitness { ideal, certified, dim })
    }
}

/// `M = S^b / (relations + I S^b)`.
#[derive(Clone)]
pub struct PresentedModule {
    ring: Ring,
    rank: usize,
    relations: Vec<ModuleElem>,
    gb: Arc<OnceLock<Gb>>,
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coker{:?} over {}", self.relations, self.ring)
    }
}

impl PresentedModule {
    pub fn new(ring: &Ring, rank: usize, relations: Vec<ModuleElem>) -> PresentedModule {
        for r in &relations {
            assert_eq!(r.rank(), rank, "relation of wrong rank");
            assert!(r.ring() == ring.ambient(), "relation from another ring");
        }
        PresentedModule { ring: ring.clone(), rank, relations, gb: Arc::new(OnceLock::new()) }
    }

    pub fn free(ring: &Ring, rank: usize) -> PresentedModule {
        PresentedModule::new(ring, rank, Vec::new())
    }

    /// Cokernel of the matrix with the given rows (columns are relations).
    pub fn coker(ring: &Ring, rows: &[Vec<Poly>]) -> Result<PresentedModule> {
        let b = rows.len();
        let a = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != a) {
            return Err(Error::Invalid("ragged presentation matrix".into()));
        }
        let cols = (0..a)
            .map(|j| {
                let col: Vec<Poly> = rows.iter().map(|r| r[j].clone()).collect();
                ModuleElem::from_polys(ring.ambient(), &col)
            })
            .collect();
        Ok(PresentedModule::new(ring, b, cols))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[ModuleElem] {
        &self.relations
    }

    /// Relations together with `I e_j`.
    pub fn full_relations(&self) -> Vec<ModuleElem> {
        let s = self.ring.ambient();
        let mut out = self.relations.clone();
        for j in 0..self.rank {
            for f in &self.ring.defining {
                out.push(ModuleElem::from_polys(s, std::slice::from_ref(f)).shift(j, self.rank));
            }
        }
        out
    }

    pub fn gb(&self) -> Result<&Gb> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = Gb::new(self.ring.ambient(), self.rank, &self.full_relations(), ModuleOrder::TermOverPosition)?;
        Ok(self.gb.get_or_init(|| g))
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.rank == 0 || self.gb()?.is_whole())
    }

    /// `Ann M = ∩_j (N : e_j)`, as an ideal of the ring.
    pub fn annihilator(&self) -> Result<IdealHandle> {
        let s = self.ring.ambient();
        if self.is_zero()? {
            return IdealHandle::new(&self.ring, vec![Poly::one(s)]);
        }
        let n = self.full_relations();
        let mut acc: Option<Vec<Poly>> = None;
        for j in 0..self.rank {
            let e = ModuleElem::unit(s, self.rank, j);
            let c = module_colon(s, self.rank, &n, &e)?;
            acc = Some(match acc {
                None => c,
                Some(a) => groebner::intersect(s, &a, &c)?,
            });
        }
        IdealHandle::new(&self.ring, acc.unwrap_or_default())
    }

    /// `M / aM`.
    pub fn quotient_by(&self, a: &IdealHandle) -> PresentedModule {
        self.quotient_by_elems(a.gens())
    }

    /// `M / (f_1, ..., f_t) M`.
    pub fn quotient_by_elems(&self, fs: &[Poly]) -> PresentedModule {
        let s = self.ring.ambient();
        let mut rels = self.relations.clone();
        for f in fs {
            for j in 0..self.rank {
                rels.push(ModuleElem::unit(s, self.rank, j).scale_poly(f));
            }
        }
        PresentedModule::new(&self.ring, self.rank, rels)
    }

    /// `M = aM`, decided by `M / aM = 0`.
    pub fn equals_a_times(&self, a: &IdealHandle) -> Result<bool> {
        self.quotient_by(a).is_zero()
    }

    /// Krull dimension of `M` (that of `R / Ann M`); `None` for `M = 0`.
    pub fn dim(&self) -> Result<Option<usize>> {
        let ann = self.annihilator()?;
        Ok(dim::dim_of_gb(ann.gb()))
    }

    /// `ht_M(a)`: height of the image of `a` in `R / Ann M`, `Inf` when `M = aM`.
    pub fn module_height(&self, a: &IdealHandle) -> Result<IntOrInf> {
        if self.equals_a_times(a)? {
            return Ok(IntOrInf::Inf);
        }
        let ann = self.annihilator()?;
        let quotient = PresentedRing::new(self.ring.ambient(), &ann.preimage())?;
        quotient.height_of(a.gens())
    }

    /// `M ⊗_R R'` for a ring whose ambient variables contain those of `R`
    /// and whose defining ideal contains that of `R`.
    pub fn base_change(&self, target: &Ring) -> Result<PresentedModule> {
        let t = target.ambient();
        let rels = self
            .relations
            .iter()
            .map(|r| {
                let c = r.coords().iter().map(|p| p.transfer(t)).collect::<Result<Vec<_>>>()?;
                Ok(ModuleElem::from_polys(t, &c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PresentedModule::new(target, self.rank, rels))
    }

    /// The same module regarded over the ambient polynomial ring.
    pub fn over_ambient(&self) -> PresentedModule {
        let s = PresentedRing::polynomial(self.ring.ambient());
        PresentedModule::new(&s, self.rank, self.full_relations())
    }

    /// `Ass(M)` through `Ass(M) = ∪_i {P ∈ Min(Ann Ext^i_S(M, S)) : ht P = i}`.
    /// Over these Noetherian rings the weakly associated primes coincide
    /// with the associated ones.
    pub fn associated_primes(&self) -> Result<Vec<PrimeWitness>> {
        let s = self.ring.ambient();
        let n = s.nvars();
        let over = self.over_ambient();
        if over.is_zero()? {
            return Ok(Vec::new());
        }
        let sring = over.ring().clone();
        let res = homology::free_resolution(&over, n + 1)?;
        let target = PresentedModule::free(&sring, 1);
        let mut found: Vec<AmbientPrime> = Vec::new();
        for i in 0..=n.min(res.length()) {
            let ext = homology::hom_cohomology(&res, &target, i)?;
            if ext.is_zero() {
                continue;
            }
            let ann = ext.annihilator()?;
            for p in primes::ambient_min_primes(s, &ann, false)? {
                if n - p.dim == i {
                    found.push(p);
                }
            }
        }
        found.sort_by_key(|p| p.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>());
        found.dedup_by(|a, b| a.gens == b.gens);
        found
            .into_iter()
            .map(|p| Ok(PrimeWitness { ideal: IdealHandle::new(&self.ring, p.gens)?, certified: p.certified, dim: p.dim }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};
    use crate::scalars::Field;

    fn ring(vars: &[&str], rels: &[&str]) -> Ring {
        let s = PolyRing::new(Field::Rational, vars.iter().map(|v| v.to_string()).collect(), MonomialOrder::DegRevLex);
        let gens: Vec<Poly> = rels.iter().map(|r| crate::dsl::parse_poly(&s, r).unwrap()).collect();
        PresentedRing::new(&s, &gens).unwrap()
    }

    fn gens_of(p: &PrimeWitness) -> Vec<String> {
        p.ideal.preimage().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn dimensions() {
        assert_eq!(ring(&["x", "y", "z"], &["x*y", "x*z"]).krull_dim().unwrap(), 2);
        assert_eq!(ring(&["x", "y"], &[]).krull_dim().unwrap(), 2);
        assert_eq!(ring(&["x"], &["x^2"]).krull_dim().unwrap(), 0);
        assert_eq!(ring(&["x"], &["1"]).krull_dim(), Err(Error::ZeroRing));
    }

    #[test]
    fn heights() {
        let r = ring(&["x", "y", "z"], &["x*y", "x*z"]);
        let h = |g: &[&str]| IdealHandle::parse(&r, g).unwrap().height().unwrap();
        assert_eq!(h(&["y", "z"]), IntOrInf::Fin(0));
        assert_eq!(h(&["x", "y", "z"]), IntOrInf::Fin(2));
        assert_eq!(h(&["1"]), IntOrInf::Inf);
        let k = ring(&["x", "y"], &[]);
        assert_eq!(IdealHandle::parse(&k, &["x"]).unwrap().height().unwrap(), IntOrInf::Fin(1));
    }

    #[test]
    fn remark_ring_minimal_primes() {
        let r = ring(&["x", "y", "z"], &["x*y", "x*z"]);
        // (y, xz) lies in both (x, y) and (y, z); only the latter is a
        // component of the ring itself, so ht (y) = 0
        let a = IdealHandle::parse(&r, &["y"]).unwrap();
        let m = a.minimal_primes().unwrap();
        let gens: Vec<Vec<String>> = m.iter().map(gens_of).collect();
        assert_eq!(gens, vec![vec!["y", "x"], vec!["z", "y"]]);
        assert!(m.iter().all(|p| p.certified));
        assert_eq!(m[1].height().unwrap(), 0);
        assert_eq!(m[0].height().unwrap(), 1);
        assert_eq!(a.height().unwrap(), IntOrInf::Fin(0));
        assert_eq!(IdealHandle::parse(&r, &["1"]).unwrap().minimal_primes().err(), Some(Error::UnitIdeal));
    }

    #[test]
    fn module_heights_and_annihilators() {
        let r = ring(&["x", "y"], &[]);
        let m = IdealHandle::parse(&r, &["x"]).unwrap().quotient_module();
        let a = IdealHandle::parse(&r, &["x"]).unwrap();
        let b = IdealHandle::parse(&r, &["y"]).unwrap();
        assert_eq!(m.module_height(&a).unwrap(), IntOrInf::Fin(0));
        assert_eq!(m.module_height(&b).unwrap(), IntOrInf::Fin(1));
        assert_eq!(m.annihilator().unwrap().preimage(), vec![r.parse("x").unwrap()]);
        assert!(PresentedModule::free(&r, 1).annihilator().unwrap().preimage().is_empty());
    }

    #[test]
    fn associated_primes_examples() {
        let r = ring(&["x", "y"], &[]);
        let m = IdealHandle::parse(&r, &["x^2", "x*y"]).unwrap().quotient_module();
        let ass: Vec<Vec<String>> = m.associated_primes().unwrap().iter().map(gens_of).collect();
        assert_eq!(ass, vec![vec!["x".to_string()], vec!["y".to_string(), "x".to_string()]]);
        let m = IdealHandle::parse(&r, &["x"]).unwrap().quotient_module();
        let ass: Vec<Vec<String>> = m.associated_primes().unwrap().iter().map(gens_of).collect();
        assert_eq!(ass, vec![vec!["x".to_string()]]);
    }
}
