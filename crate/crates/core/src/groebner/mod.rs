//! Buchberger engine for ideals of `S = k[x_1..x_n]` and submodules of `S^r`.
//!
//! Elements are sparse vectors of [`Term`]s. A run can track, for every basis
//! element, its expression in the input generators; Schreyer syzygies are
//! read off from those cofactors.

mod ideal_ops;

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

pub use ideal_ops::*;

use crate::error::{Error, Result};
use crate::poly::{merge_axpy, ModuleOrder, Monomial, MonomialOrder, Poly, RingRef, Term};
use crate::scalars::FieldElem;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

static DEFAULT: AtomicU64 = AtomicU64::new(DEFAULT_BUDGET);

thread_local! {
    static BUDGET: Cell<Option<u64>> = const { Cell::new(None) };
}

/// Restores the previous per-run step budget when dropped.
pub struct BudgetGuard(Option<u64>);

impl Drop for BudgetGuard {
    fn drop(&mut self) {
        BUDGET.with(|b| b.set(self.0));
    }
}

/// Sets the reduction-step budget of every engine run on this thread until
/// the guard is dropped.
pub fn set_budget(steps: u64) -> BudgetGuard {
    BudgetGuard(BUDGET.with(|b| b.replace(Some(steps))))
}

/// Sets the budget for threads without their own override.
pub fn set_default_budget(steps: u64) {
    DEFAULT.store(steps, AtomicOrdering::Relaxed);
}

pub fn budget() -> u64 {
    BUDGET.with(|b| b.get()).unwrap_or_else(|| DEFAULT.load(AtomicOrdering::Relaxed))
}

/// Comparison of module terms `m e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    pub mono: MonomialOrder,
    pub module: ModuleOrder,
}

impl TermOrder {
    pub fn top(mono: MonomialOrder) -> TermOrder {
        TermOrder { mono, module: ModuleOrder::TermOverPosition }
    }

    pub fn cmp(&self, am: &Monomial, ap: u32, bm: &Monomial, bp: u32) -> Ordering {
        match self.module {
            ModuleOrder::TermOverPosition => self.mono.cmp(am, bm).then(bp.cmp(&ap)),
            ModuleOrder::PositionOverTerm => bp.cmp(&ap).then_with(|| self.mono.cmp(am, bm)),
        }
    }

    fn sort(&self, terms: &mut [Term]) {
        terms.sort_by(|a, b| self.cmp(&b.mon, b.pos, &a.mon, a.pos));
    }

    fn merge(&self, a: &[Term], c: &FieldElem, m: Option<&Monomial>, b: &[Term]) -> Vec<Term> {
        merge_axpy(a, c, m, b, |x, xp, y, yp| self.cmp(x, xp, y, yp))
    }
}

/// An element of the free module `S^rank`, terms sorted term-over-position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElem {
    ring: RingRef,
    rank: usize,
    terms: Vec<Term>,
}

impl ModuleElem {
    pub fn zero(ring: &RingRef, rank: usize) -> ModuleElem {
        ModuleElem { ring: ring.clone(), rank, terms: Vec::new() }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(ring: &RingRef, rank: usize, i: usize) -> ModuleElem {
        assert!(i < rank);
        let t = Term { mon: Monomial::one(ring.nvars()), pos: i as u32, coef: ring.field().one() };
        ModuleElem { ring: ring.clone(), rank, terms: vec![t] }
    }

    pub fn from_polys(ring: &RingRef, coords: &[Poly]) -> ModuleElem {
        let mut terms = Vec::new();
        for (i, p) in coords.iter().enumerate() {
            assert!(p.ring() == ring, "coordinate from another ring");
            for t in p.raw_terms() {
                terms.push(Term { mon: t.mon.clone(), pos: i as u32, coef: t.coef.clone() });
            }
        }
        TermOrder::top(ring.order()).sort(&mut terms);
        ModuleElem { ring: ring.clone(), rank: coords.len(), terms }
    }

    pub(crate) fn from_raw(ring: &RingRef, rank: usize, mut terms: Vec<Term>, order: &TermOrder) -> ModuleElem {
        if order.module != ModuleOrder::TermOverPosition || order.mono != ring.order() {
            TermOrder::top(ring.order()).sort(&mut terms);
        }
        ModuleElem { ring: ring.clone(), rank, terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn component(&self, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.pos as usize == i)
            .map(|t| Term { mon: t.mon.clone(), pos: 0, coef: t.coef.clone() })
            .collect();
        Poly::from_sorted_terms(&self.ring, terms)
    }

    pub fn coords(&self) -> Vec<Poly> {
        (0..self.rank).map(|i| self.component(i)).collect()
    }

    fn top(&self) -> TermOrder {
        TermOrder::top(self.ring.order())
    }

    pub fn try_add(&self, o: &ModuleElem) -> Result<ModuleElem> {
        self.combine(o, self.ring.field().one())
    }

    pub fn try_sub(&self, o: &ModuleElem) -> Result<ModuleElem> {
        self.combine(o, -self.ring.field().one())
    }

    fn combine(&self, o: &ModuleElem, c: FieldElem) -> Result<ModuleElem> {
        if self.ring != o.ring || self.rank != o.rank {
            return Err(Error::AmbientMismatch);
        }
        let terms = self.top().merge(&self.terms, &c, None, &o.terms);
        Ok(ModuleElem { ring: self.ring.clone(), rank: self.rank, terms })
    }

    /// `p * self`.
    pub fn scale_poly(&self, p: &Poly) -> ModuleElem {
        let ord = self.top();
        let mut acc = Vec::new();
        for t in p.raw_terms() {
            acc = ord.merge(&acc, &t.coef, Some(&t.mon), &self.terms);
        }
        ModuleElem { ring: self.ring.clone(), rank: self.rank, terms: acc }
    }

    /// Moves coordinate `i` to coordinate `offset + i` of a module of rank `rank`.
    pub fn shift(&self, offset: usize, rank: usize) -> ModuleElem {
        assert!(offset + self.rank <= rank);
        let terms = self
            .terms
            .iter()
            .map(|t| Term { mon: t.mon.clone(), pos: t.pos + offset as u32, coef: t.coef.clone() })
            .collect();
        // shifting all positions by a constant preserves term-over-position order
        ModuleElem { ring: self.ring.clone(), rank, terms }
    }

    /// Keeps coordinates `range` and renumbers them from zero.
    pub fn project(&self, range: std::ops::Range<usize>) -> ModuleElem {
        let terms = self
            .terms
            .iter()
            .filter(|t| range.contains(&(t.pos as usize)))
            .map(|t| Term { mon: t.mon.clone(), pos: t.pos - range.start as u32, coef: t.coef.clone() })
            .collect();
        ModuleElem { ring: self.ring.clone(), rank: range.len(), terms }
    }

    /// Largest total degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mon.degree()).max()
    }

    /// Reorders terms for a ring with the same variables but another order.
    pub fn reorder(&self, target: &RingRef) -> ModuleElem {
        assert_eq!(self.ring.vars(), target.vars());
        let mut terms = self.terms.clone();
        TermOrder::top(target.order()).sort(&mut terms);
        ModuleElem { ring: target.clone(), rank: self.rank, terms }
    }
}

impl fmt::Display for ModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn divmask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i % 64);
        }
    }
    mask
}

#[derive(Clone)]
struct Elem {
    v: Vec<Term>,
    rep: Vec<Term>,
    mask: u64,
}

impl Elem {
    fn lead(&self) -> &Term {
        &self.v[0]
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: u32,
}

/// Reduction context shared by the engine and by finished bases.
struct Reducer<'a> {
    ord: TermOrder,
    rep_ord: TermOrder,
    elems: &'a [Elem],
    active: &'a [usize],
}

impl Reducer<'_> {
    fn find(&self, t: &Term) -> Option<&Elem> {
        let mask = divmask(&t.mon);
        self.active.iter().map(|&k| &self.elems[k]).find(|e| {
            let l = e.lead();
            l.pos == t.pos && e.mask & !mask == 0 && l.mon.divides(&t.mon)
        })
    }

    /// Reduces `v` (and its cofactor `rep` when `track`). `full` also
    /// reduces non-leading terms.
    fn reduce(
        &self,
        mut v: Vec<Term>,
        mut rep: Vec<Term>,
        track: bool,
        full: bool,
        steps: &mut Steps,
    ) -> Result<(Vec<Term>, Vec<Term>)> {
        let mut done: Vec<Term> = Vec::new();
        while !v.is_empty() {
            let head = &v[0];
            match self.find(head) {
                Some(g) => {
                    steps.tick()?;
                    let l = g.lead();
                    let m = head.mon.div(&l.mon).unwrap();
                    let c = -(head.coef.div(&l.coef).unwrap());
                    v = self.ord.merge(&v, &c, Some(&m), &g.v);
                    if track {
                        rep = self.rep_ord.merge(&rep, &c, Some(&m), &g.rep);
                    }
                }
                None if full => done.push(v.remove(0)),
                None => break,
            }
        }
        if full {
            done.extend(v);
            v = done;
        }
        Ok((v, rep))
    }
}

struct Steps {
    used: u64,
    limit: u64,
}

impl Steps {
    fn new() -> Steps {
        Steps { used: 0, limit: budget() }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

fn monic(v: &mut [Term], rep: &mut [Term], track: bool) {
    let inv = v[0].coef.inv().expect("nonzero lead");
    if inv.is_one() {
        return;
    }
    for t in v.iter_mut() {
        t.coef = &t.coef * &inv;
    }
    if track {
        for t in rep.iter_mut() {
            t.coef = &t.coef * &inv;
        }
    }
}

struct Engine {
    ring: RingRef,
    ord: TermOrder,
    rep_ord: TermOrder,
    track: bool,
    rank1: bool,
    elems: Vec<Elem>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    steps: Steps,
}

impl Engine {
    fn new(ring: &RingRef, rank: usize, ord: TermOrder, track: bool) -> Engine {
        Engine {
            ring: ring.clone(),
            ord,
            rep_ord: TermOrder::top(ring.order()),
            track,
            rank1: rank == 1,
            elems: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            steps: Steps::new(),
        }
    }

    /// Adds an element known to be part of a basis already; no pairs are formed
    /// with other such elements.
    fn seed(&mut self, v: Vec<Term>, rep: Vec<Term>) {
        let mask = divmask(&v[0].mon);
        self.elems.push(Elem { v, rep, mask });
        self.active.push(self.elems.len() - 1);
    }

    fn insert(&mut self, v: Vec<Term>, rep: Vec<Term>) -> Result<()> {
        let red = Reducer { ord: self.ord, rep_ord: self.rep_ord, elems: &self.elems, active: &self.active };
        let (mut v, mut rep) = red.reduce(v, rep, self.track, true, &mut self.steps)?;
        if v.is_empty() {
            return Ok(());
        }
        monic(&mut v, &mut rep, self.track);
        let mask = divmask(&v[0].mon);
        self.elems.push(Elem { v, rep, mask });
        let h = self.elems.len() - 1;
        self.update(h);
        Ok(())
    }

    // Gebauer-Moeller
    fn update(&mut self, h: usize) {
        let (hm, hp) = {
            let l = self.elems[h].lead();
            (l.mon.clone(), l.pos)
        };
        let mut cand: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .filter(|&&k| self.elems[k].lead().pos == hp)
            .map(|&k| {
                let km = &self.elems[k].lead().mon;
                (k, km.lcm(&hm), self.rank1 && km.coprime(&hm))
            })
            .collect();

        // chain criterion among the new pairs
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a != b && keep[b] && cand[b].1 != cand[a].1 && cand[b].1.divides(&cand[a].1) {
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut idx: Vec<usize> = (0..cand.len()).filter(|&a| keep[a]).collect();
        // one representative per lcm; a coprime member kills the whole class
        idx.sort_by(|&a, &b| cand[a].1.cmp(&cand[b].1).then(cand[a].0.cmp(&cand[b].0)));
        let mut chosen = Vec::new();
        let mut s = 0;
        while s < idx.len() {
            let mut e = s;
            while e < idx.len() && cand[idx[e]].1 == cand[idx[s]].1 {
                e += 1;
            }
            if !idx[s..e].iter().any(|&a| cand[a].2) {
                chosen.push(idx[s]);
            }
            s = e;
        }

        // old pairs made redundant by the new lead
        let elems = &self.elems;
        self.pairs.retain(|p| {
            if p.pos != hp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = elems[p.i].lead().mon.lcm(&hm);
            let lj = elems[p.j].lead().mon.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });

        for a in chosen {
            let (k, lcm, _) = std::mem::replace(&mut cand[a], (0, Monomial::one(0), false));
            self.pairs.push(Pair { i: k, j: h, lcm, pos: hp });
        }

        let elems = &self.elems;
        self.active.retain(|&k| {
            let l = elems[k].lead();
            !(l.pos == hp && hm.divides(&l.mon))
        });
        self.active.push(h);
    }

    fn spair(&self, i: usize, j: usize, lcm: &Monomial) -> (Vec<Term>, Vec<Term>) {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        let ma = lcm.div(&a.lead().mon).unwrap();
        let mb = lcm.div(&b.lead().mon).unwrap();
        let one = self.ring.field().one();
        let m1 = -self.ring.field().one();
        let av = self.ord.merge(&[], &one, Some(&ma), &a.v);
        let v = self.ord.merge(&av, &m1, Some(&mb), &b.v);
        let rep = if self.track {
            let ar = self.rep_ord.merge(&[], &one, Some(&ma), &a.rep);
            self.rep_ord.merge(&ar, &m1, Some(&mb), &b.rep)
        } else {
            Vec::new()
        };
        (v, rep)
    }

    fn run(&mut self) -> Result<()> {
        while !self.pairs.is_empty() {
            // normal selection: smallest lcm first
            let mut best = 0;
            for k in 1..self.pairs.len() {
                let (p, q) = (&self.pairs[k], &self.pairs[best]);
                if self.ord.cmp(&p.lcm, p.pos, &q.lcm, q.pos) == Ordering::Less {
                    best = k;
                }
            }
            let p = self.pairs.swap_remove(best);
            self.steps.tick()?;
            let (v, rep) = self.spair(p.i, p.j, &p.lcm);
            self.insert(v, rep)?;
        }
        Ok(())
    }

    /// Tail-reduces the minimal basis and returns it sorted by lead term.
    fn finish(mut self) -> Result<(Vec<Elem>, Steps)> {
        let mut active = self.active.clone();
        active.sort_by(|&a, &b| {
            let (x, y) = (self.elems[a].lead(), self.elems[b].lead());
            self.ord.cmp(&x.mon, x.pos, &y.mon, y.pos)
        });
        let mut out = Vec::with_capacity(active.len());
        for (n, &k) in active.iter().enumerate() {
            let others: Vec<usize> = active.iter().enumerate().filter(|&(m, _)| m != n).map(|(_, &k)| k).collect();
            let red = Reducer { ord: self.ord, rep_ord: self.rep_ord, elems: &self.elems, active: &others };
            let e = &self.elems[k];
            let head = e.v[0].clone();
            let (tail, rep) = red.reduce(e.v[1..].to_vec(), e.rep.clone(), self.track, true, &mut self.steps)?;
            let mut v = Vec::with_capacity(tail.len() + 1);
            v.push(head);
            v.extend(tail);
            let mut rep = rep;
            monic(&mut v, &mut rep, self.track);
            out.push(Elem { mask: divmask(&v[0].mon), v, rep });
        }
        Ok((out, self.steps))
    }
}

/// A reduced, monic Gröbner basis of a submodule of `S^rank` (an ideal when
/// `rank == 1`).
#[derive(Clone)]
pub struct Gb {
    ring: RingRef,
    rank: usize,
    ord: TermOrder,
    elems: Vec<Elem>,
}

impl fmt::Debug for Gb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements()).finish()
    }
}

fn to_raw(e: &ModuleElem, ord: &TermOrder) -> Vec<Term> {
    let mut t = e.terms.clone();
    if ord.module != ModuleOrder::TermOverPosition || ord.mono != e.ring.order() {
        ord.sort(&mut t);
    }
    t
}

impl Gb {
    /// Gröbner basis of the submodule generated by `gens` under `order`
    /// (term-over-position extending the ring order when `None`).
    pub fn new(ring: &RingRef, rank: usize, gens: &[ModuleElem], module: ModuleOrder) -> Result<Gb> {
        Gb::build(ring, rank, gens, module, false, None)
    }

    /// Ideal basis for the ring's own monomial order.
    pub fn ideal(ring: &RingRef, gens: &[Poly]) -> Result<Gb> {
        let elems: Vec<ModuleElem> = gens.iter().map(|p| ModuleElem::from_polys(ring, std::slice::from_ref(p))).collect();
        Gb::new(ring, 1, &elems, ModuleOrder::TermOverPosition)
    }

    /// Basis of `self + gens`, reusing the existing basis.
    pub fn extend(&self, gens: &[ModuleElem]) -> Result<Gb> {
        Gb::build(&self.ring, self.rank, gens, self.ord.module, false, Some(self))
    }

    pub fn extend_polys(&self, gens: &[Poly]) -> Result<Gb> {
        let elems: Vec<ModuleElem> = gens.iter().map(|p| ModuleElem::from_polys(&self.ring, std::slice::from_ref(p))).collect();
        self.extend(&elems)
    }

    fn build(
        ring: &RingRef,
        rank: usize,
        gens: &[ModuleElem],
        module: ModuleOrder,
        track: bool,
        base: Option<&Gb>,
    ) -> Result<Gb> {
        let ord = TermOrder { mono: ring.order(), module };
        let mut eng = Engine::new(ring, rank, ord, track);
        if let Some(b) = base {
            for e in &b.elems {
                eng.seed(e.v.clone(), Vec::new());
            }
        }
        let one = ring.field().one();
        for (k, g) in gens.iter().enumerate() {
            if g.ring != *ring || g.rank != rank {
                return Err(Error::AmbientMismatch);
            }
            if g.is_zero() {
                continue;
            }
            let rep = if track {
                vec![Term { mon: Monomial::one(ring.nvars()), pos: k as u32, coef: one.clone() }]
            } else {
                Vec::new()
            };
            eng.insert(to_raw(g, &ord), rep)?;
            eng.run()?;
        }
        let (elems, _) = eng.finish()?;
        Ok(Gb { ring: ring.clone(), rank, ord, elems })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> TermOrder {
        self.ord
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Basis elements in term-over-position storage.
    pub fn elements(&self) -> Vec<ModuleElem> {
        self.elems.iter().map(|e| ModuleElem::from_raw(&self.ring, self.rank, e.v.clone(), &self.ord)).collect()
    }

    /// Basis elements as polynomials (rank one only).
    pub fn polys(&self) -> Vec<Poly> {
        assert_eq!(self.rank, 1);
        self.elems.iter().map(|e| Poly::from_sorted_terms(&self.ring, e.v.clone())).collect()
    }

    /// Leading terms `(monomial, position)`, in basis order.
    pub fn leading(&self) -> Vec<(Monomial, u32)> {
        self.elems.iter().map(|e| (e.lead().mon.clone(), e.lead().pos)).collect()
    }

    /// True when the basis contains a unit vector in every position, i.e. the
    /// submodule is everything.
    pub fn is_whole(&self) -> bool {
        (0..self.rank as u32).all(|p| self.elems.iter().any(|e| e.lead().pos == p && e.lead().mon.is_one()))
    }

    fn reducer(&self) -> (Vec<usize>, TermOrder) {
        ((0..self.elems.len()).collect(), TermOrder::top(self.ring.order()))
    }

    fn reduce_raw(&self, v: Vec<Term>) -> Vec<Term> {
        let (active, rep_ord) = self.reducer();
        let red = Reducer { ord: self.ord, rep_ord, elems: &self.elems, active: &active };
        let mut steps = Steps { used: 0, limit: u64::MAX };
        red.reduce(v, Vec::new(), false, true, &mut steps).expect("unbounded").0
    }

    pub fn normal_form(&self, v: &ModuleElem) -> Result<ModuleElem> {
        if v.ring != self.ring || v.rank != self.rank {
            return Err(Error::AmbientMismatch);
        }
        let r = self.reduce_raw(to_raw(v, &self.ord));
        Ok(ModuleElem::from_raw(&self.ring, self.rank, r, &self.ord))
    }

    pub fn contains(&self, v: &ModuleElem) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    pub fn reduce_poly(&self, f: &Poly) -> Result<Poly> {
        if self.rank != 1 || f.ring() != &self.ring {
            return Err(Error::AmbientMismatch);
        }
        let v: Vec<Term> = f.raw_terms().to_vec();
        Ok(Poly::from_sorted_terms(&self.ring, self.reduce_raw(v)))
    }

    pub fn contains_poly(&self, f: &Poly) -> Result<bool> {
        Ok(self.reduce_poly(f)?.is_zero())
    }

    /// Checks the Buchberger criterion directly: every S-vector reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let one = self.ring.field().one();
        let m1 = -one.clone();
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                let (a, b) = (self.elems[i].lead(), self.elems[j].lead());
                if a.pos != b.pos {
                    continue;
                }
                let lcm = a.mon.lcm(&b.mon);
                let av = self.ord.merge(&[], &one, Some(&lcm.div(&a.mon).unwrap()), &self.elems[i].v);
                let s = self.ord.merge(&av, &m1, Some(&lcm.div(&b.mon).unwrap()), &self.elems[j].v);
                if !self.reduce_raw(s).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// True when both bases span the same submodule.
    pub fn same_span(&self, other: &Gb) -> bool {
        self.ring == other.ring
            && self.rank == other.rank
            && other.elements().iter().all(|e| self.contains(e).unwrap_or(false))
            && self.elements().iter().all(|e| other.contains(e).unwrap_or(false))
    }
}

/// Generators of the syzygy module of `gens`: all `s` with `sum s_i gens_i = 0`,
/// as elements of `S^{gens.len()}`. Schreyer's construction on a cofactor-
/// tracked basis.
pub fn syzygies(ring: &RingRef, rank: usize, gens: &[ModuleElem]) -> Result<Vec<ModuleElem>> {
    let m = gens.len();
    let gb = Gb::build(ring, rank, gens, ModuleOrder::TermOverPosition, true, None)?;
    let ord = gb.ord;
    let rep_ord = TermOrder::top(ring.order());
    let (active, _) = gb.reducer();
    let red = Reducer { ord, rep_ord, elems: &gb.elems, active: &active };
    let mut steps = Steps::new();
    let one = ring.field().one();
    let m1 = -one.clone();
    let mut out: Vec<Vec<Term>> = Vec::new();

    // pair syzygies; for each i only the minimal quotients lcm/lt_i are needed
    let n = gb.elems.len();
    for i in 0..n {
        let li = gb.elems[i].lead();
        let mut quots: Vec<(Monomial, usize)> = Vec::new();
        for j in i + 1..n {
            let lj = gb.elems[j].lead();
            if lj.pos != li.pos {
                continue;
            }
            quots.push((li.mon.lcm(&lj.mon).div(&li.mon).unwrap(), j));
        }
        let minimal: Vec<usize> = (0..quots.len())
            .filter(|&a| {
                !quots.iter().enumerate().any(|(b, q)| {
                    b != a && q.0.divides(&quots[a].0) && (q.0 != quots[a].0 || b < a)
                })
            })
            .collect();
        for a in minimal {
            let j = quots[a].1;
            let lcm = li.mon.lcm(&gb.elems[j].lead().mon);
            let (ei, ej) = (&gb.elems[i], &gb.elems[j]);
            let mi = lcm.div(&ei.lead().mon).unwrap();
            let mj = lcm.div(&ej.lead().mon).unwrap();
            let v = ord.merge(&ord.merge(&[], &one, Some(&mi), &ei.v), &m1, Some(&mj), &ej.v);
            let rep = rep_ord.merge(&rep_ord.merge(&[], &one, Some(&mi), &ei.rep), &m1, Some(&mj), &ej.rep);
            let (rest, rep) = red.reduce(v, rep, true, false, &mut steps)?;
            debug_assert!(rest.is_empty());
            out.push(rep);
        }
    }

    // each input expressed through the basis
    for (k, g) in gens.iter().enumerate() {
        let rep0 = vec![Term { mon: Monomial::one(ring.nvars()), pos: k as u32, coef: one.clone() }];
        let (rest, rep) = red.reduce(to_raw(g, &ord), rep0, true, false, &mut steps)?;
        debug_assert!(rest.is_empty());
        out.push(rep);
    }

    let mut syz: Vec<ModuleElem> = Vec::new();
    for rep in out {
        if rep.is_empty() {
            continue;
        }
        let mut e = ModuleElem { ring: ring.clone(), rank: m, terms: rep };
        let inv = e.terms[0].coef.inv()?;
        for t in e.terms.iter_mut() {
            t.coef = &t.coef * &inv;
        }
        if !syz.contains(&e) {
            syz.push(e);
        }
    }
    Ok(syz)
}

/// Syzygies of polynomials.
pub fn poly_syzygies(ring: &RingRef, gens: &[Poly]) -> Result<Vec<ModuleElem>> {
    let elems: Vec<ModuleElem> = gens.iter().map(|p| ModuleElem::from_polys(ring, std::slice::from_ref(p))).collect();
    syzygies(ring, 1, &elems)
}

/// Drops generators lying in the submodule spanned by the others
/// (greedy, in order of increasing degree).
pub fn prune_generators(ring: &RingRef, rank: usize, gens: &[ModuleElem]) -> Result<Vec<ModuleElem>> {
    let mut sorted: Vec<&ModuleElem> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by_key(|g| g.degree());
    let mut kept: Vec<ModuleElem> = Vec::new();
    let mut gb: Option<Gb> = None;
    for g in sorted {
        let inside = match &gb {
            Some(b) => b.contains(g)?,
            None => false,
        };
        if !inside {
            kept.push(g.clone());
            gb = Some(match &gb {
                Some(b) => b.extend(std::slice::from_ref(g))?,
                None => Gb::new(ring, rank, std::slice::from_ref(g), ModuleOrder::TermOverPosition)?,
            });
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::scalars::Field;

    fn ring(vars: &[&str], order: MonomialOrder) -> RingRef {
        PolyRing::new(Field::Rational, vars.iter().map(|s| s.to_string()).collect(), order)
    }

    fn p(r: &RingRef, s: &str) -> Poly {
        crate::dsl::parse_poly(r, s).unwrap()
    }

    #[test]
    fn circle_and_line_lex() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let gb = Gb::ideal(&r, &[p(&r, "x^2+y^2-1"), p(&r, "x-y")]).unwrap();
        // reduced monic form of {x - y, 2y^2 - 1}
        assert_eq!(gb.polys(), vec![p(&r, "y^2 - 1/2"), p(&r, "x - y")]);
        assert_eq!(gb.reduce_poly(&p(&r, "x^2")).unwrap(), p(&r, "1/2"));
        assert!(gb.s_pairs_reduce_to_zero());
    }

    #[test]
    fn trivial_bases() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let gb = Gb::ideal(&r, &[p(&r, "x"), p(&r, "y")]).unwrap();
        assert_eq!(gb.len(), 2);
        assert_eq!(gb.reduce_poly(&p(&r, "1")).unwrap(), p(&r, "1"));
        assert!(gb.contains_poly(&p(&r, "x")).unwrap());
        assert!(Gb::ideal(&r, &[Poly::zero(&r)]).unwrap().is_empty());
    }

    #[test]
    fn syzygy_examples() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let s = poly_syzygies(&r, &[p(&r, "x"), p(&r, "y")]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].coords(), vec![p(&r, "-y"), p(&r, "x")]);

        let s = poly_syzygies(&r, &[p(&r, "x^2"), p(&r, "x*y")]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].coords(), vec![p(&r, "-y"), p(&r, "x")]);

        assert!(poly_syzygies(&r, &[p(&r, "1")]).unwrap().is_empty());
    }

    #[test]
    fn budget_aborts() {
        let r = ring(&["x", "y", "z"], MonomialOrder::DegRevLex);
        let gens = [p(&r, "x + y + z"), p(&r, "x*y + y*z + z*x"), p(&r, "x*y*z - 1")];
        let _g = set_budget(3);
        assert_eq!(Gb::ideal(&r, &gens).err(), Some(Error::BudgetExceeded(3)));
    }
}
