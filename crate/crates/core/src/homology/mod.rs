//! Complexes of finite free modules over presented rings, Koszul complexes,
//! (co)homology of `Hom(F, M)` and `F ⊗ M`, free resolutions and Ext.
//!
//! A module `M = S^b / N` over `R = S/I` is handled in the ambient ring: the
//! direct sum `M^r` lives in `S^{rb}`, block `l` holding coordinate `l`.

use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::{module_colon, syzygies, Gb, ModuleElem};
use crate::poly::{ModuleOrder, Poly, RingRef};
use crate::ring::{PresentedModule, Ring};

/// A matrix over a presented ring, entries reduced modulo the defining ideal.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Poly>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let s: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            f.write_str(&s.join(" "))?;
        }
        f.write_str("]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Vec<Poly>>) -> Matrix {
        assert_eq!(entries.len(), rows);
        assert!(entries.iter().all(|r| r.len() == cols));
        Matrix { rows, cols, entries }
    }

    pub fn zero(s: &RingRef, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: vec![vec![Poly::zero(s); cols]; rows] }
    }

    /// Matrix whose columns are the given elements of `S^rows`.
    pub fn from_columns(s: &RingRef, rows: usize, cols: &[ModuleElem]) -> Matrix {
        let mut m = Matrix::zero(s, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, p) in c.coords().into_iter().enumerate() {
                m.entries[i][j] = p;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn column(&self, s: &RingRef, j: usize) -> ModuleElem {
        let c: Vec<Poly> = (0..self.rows).map(|i| self.entries[i][j].clone()).collect();
        if c.is_empty() {
            ModuleElem::zero(s, 0)
        } else {
            ModuleElem::from_polys(s, &c)
        }
    }

    pub fn transpose(&self) -> Matrix {
        let entries = (0..self.cols).map(|j| (0..self.rows).map(|i| self.entries[i][j].clone()).collect()).collect();
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, s: &RingRef, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Matrix::zero(s, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Poly::zero(s);
                for k in 0..self.cols {
                    if !self.entries[i][k].is_zero() && !o.entries[k][j].is_zero() {
                        acc = &acc + &(&self.entries[i][k] * &o.entries[k][j]);
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// Columns of `self ⊗ id_b`, acting `S^{cols·b} → S^{rows·b}`.
    fn tensor_columns(&self, s: &RingRef, b: usize) -> Vec<ModuleElem> {
        let rank = self.rows * b;
        let mut out = Vec::with_capacity(self.cols * b);
        for l in 0..self.cols {
            for j in 0..b {
                let mut coords = vec![Poly::zero(s); rank];
                for k in 0..self.rows {
                    coords[k * b + j] = self.entries[k][l].clone();
                }
                out.push(if rank == 0 { ModuleElem::zero(s, 0) } else { ModuleElem::from_polys(s, &coords) });
            }
        }
        out
    }

    /// `(self ⊗ id_b) v`.
    fn apply(&self, s: &RingRef, b: usize, v: &ModuleElem) -> ModuleElem {
        let cols = self.tensor_columns(s, b);
        let mut acc = ModuleElem::zero(s, self.rows * b);
        for (c, p) in cols.iter().zip(v.coords()) {
            if !p.is_zero() {
                acc = acc.try_add(&c.scale_poly(&p)).expect("same rank");
            }
        }
        acc
    }
}

/// A finite complex `F_n → … → F_1 → F_0` of free modules; `diffs[i]` is
/// the matrix of `F_{i+1} → F_i`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: Ring,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl FreeComplex {
    /// Checks shapes and `d ∘ d = 0` modulo the defining ideal.
    pub fn new(ring: &Ring, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<FreeComplex> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(Error::Invalid("differential count does not match ranks".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.rows != ranks[i] || d.cols != ranks[i + 1] {
                return Err(Error::Invalid(format!("differential {i} has the wrong shape")));
            }
        }
        let c = FreeComplex { ring: ring.clone(), ranks, diffs };
        if !c.is_complex()? {
            return Err(Error::Invalid("consecutive differentials do not compose to zero".into()));
        }
        Ok(c)
    }

    /// Koszul complex of `xs`: `F_i = ∧^i R^r` on `i`-subsets in lex order,
    /// `d(e_J) = Σ_k (-1)^k x_{j_k} e_{J∖j_k}`.
    pub fn koszul(ring: &Ring, xs: &[Poly]) -> FreeComplex {
        let s = ring.ambient();
        let r = xs.len();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=r).map(|i| subsets_of(r, i)).collect();
        let ranks: Vec<usize> = subsets.iter().map(|v| v.len()).collect();
        let mut diffs = Vec::new();
        for i in 1..=r {
            let mut m = Matrix::zero(s, ranks[i - 1], ranks[i]);
            for (c, j) in subsets[i].iter().enumerate() {
                for k in 0..j.len() {
                    let mut rest = j.clone();
                    rest.remove(k);
                    let row = subsets[i - 1].binary_search(&rest).expect("subset present");
                    let x = ring.reduce(&xs[j[k]]).expect("reduction");
                    m.entries[row][c] = if k % 2 == 0 { x } else { -x };
                }
            }
            diffs.push(m);
        }
        FreeComplex { ring: ring.clone(), ranks, diffs }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.diffs
    }

    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    /// `d_i ∘ d_{i+1} = 0` modulo the defining ideal for all `i`.
    pub fn is_complex(&self) -> Result<bool> {
        let s = self.ring.ambient();
        for w in self.diffs.windows(2) {
            let p = w[0].mul(s, &w[1]);
            for row in &p.entries {
                for e in row {
                    if !self.ring.gb().contains_poly(e)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `H^i(Hom(F, M))`.
    pub fn hom_cohomology(&self, m: &PresentedModule, i: usize) -> Result<Subquotient> {
        if i >= self.ranks.len() {
            return cohomology(m, None, None, 0);
        }
        let alpha = (i > 0).then(|| self.diffs[i - 1].transpose());
        let beta = self.diffs.get(i).map(|d| d.transpose());
        cohomology(m, alpha.as_ref(), beta.as_ref(), self.ranks[i])
    }

    /// `H_i(F ⊗ M)`.
    pub fn tensor_homology(&self, m: &PresentedModule, i: usize) -> Result<Subquotient> {
        if i >= self.ranks.len() {
            return cohomology(m, None, None, 0);
        }
        let alpha = self.diffs.get(i);
        let beta = (i > 0).then(|| &self.diffs[i - 1]);
        cohomology(m, alpha, beta, self.ranks[i])
    }

    /// Exactness at `F_i` for `1 ≤ i < length`: the relations of `d_i` over
    /// `R` and the image of `d_{i+1}` span the same submodule modulo `I`.
    pub fn is_exact_at(&self, i: usize) -> Result<bool> {
        let s = self.ring.ambient();
        if i == 0 || i >= self.diffs.len() {
            return Err(Error::Invalid("exactness is checked at interior spots".into()));
        }
        let r = self.ranks[i];
        let cols: Vec<ModuleElem> = (0..self.diffs[i - 1].cols).map(|j| self.diffs[i - 1].column(s, j)).collect();
        let kernel = ring_syzygies(&self.ring, self.ranks[i - 1], &cols)?;
        let mut base = ideal_multiples(&self.ring, r);
        let mut image = base.clone();
        image.extend((0..self.diffs[i].cols).map(|j| self.diffs[i].column(s, j)));
        base.extend(kernel);
        let a = Gb::new(s, r, &image, ModuleOrder::TermOverPosition)?;
        let b = Gb::new(s, r, &base, ModuleOrder::TermOverPosition)?;
        Ok(a.same_span(&b))
    }
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `I e_j` for `j < rank`.
fn ideal_multiples(ring: &Ring, rank: usize) -> Vec<ModuleElem> {
    let s = ring.ambient();
    let mut out = Vec::new();
    for j in 0..rank {
        for f in ring.defining() {
            out.push(ModuleElem::from_polys(s, std::slice::from_ref(f)).shift(j, rank));
        }
    }
    out
}

/// Generators of the syzygies of `cols ⊆ R^rank` over `R`, reduced modulo `I`.
pub fn ring_syzygies(ring: &Ring, rank: usize, cols: &[ModuleElem]) -> Result<Vec<ModuleElem>> {
    let s = ring.ambient();
    let m = cols.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut all = cols.to_vec();
    all.extend(ideal_multiples(ring, rank));
    let syz = syzygies(s, rank, &all)?;
    let mut out = Vec::new();
    for z in syz {
        let p = reduce_elem(ring, &z.project(0..m))?;
        if !p.is_zero() && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

fn reduce_elem(ring: &Ring, v: &ModuleElem) -> Result<ModuleElem> {
    if ring.is_polynomial_ring() || v.rank() == 0 {
        return Ok(v.clone());
    }
    let coords = v.coords().iter().map(|p| ring.reduce(p)).collect::<Result<Vec<_>>>()?;
    Ok(ModuleElem::from_polys(ring.ambient(), &coords))
}

/// Drops generators lying in the span of the earlier ones plus `I R^rank`,
/// in order of increasing degree.
pub fn prune_over(ring: &Ring, rank: usize, gens: &[ModuleElem]) -> Result<Vec<ModuleElem>> {
    let s = ring.ambient();
    let mut sorted: Vec<&ModuleElem> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by_key(|g| (g.degree(), g.terms().len()));
    let mut gb = Gb::new(s, rank, &ideal_multiples(ring, rank), ModuleOrder::TermOverPosition)?;
    let mut kept = Vec::new();
    for g in sorted {
        if !gb.contains(g)? {
            gb = gb.extend(std::slice::from_ref(g))?;
            kept.push(g.clone());
        }
    }
    Ok(kept)
}

/// `ker / im` inside `S^rank`: kernel generators not in the image, and a
/// Gröbner basis of the image (which contains the module relations).
#[derive(Clone, Debug)]
pub struct Subquotient {
    ring: Ring,
    rank: usize,
    gens: Vec<ModuleElem>,
    image: Gb,
}

impl Subquotient {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Kernel generators with nonzero class, by increasing degree.
    pub fn gens(&self) -> &[ModuleElem] {
        &self.gens
    }

    /// The smallest-degree kernel element outside the image.
    pub fn witness(&self) -> Option<&ModuleElem> {
        self.gens.first()
    }

    pub fn image_contains(&self, v: &ModuleElem) -> Result<bool> {
        self.image.contains(v)
    }

    /// Ambient generators of the annihilator.
    pub fn annihilator(&self) -> Result<Vec<Poly>> {
        let s = self.ring.ambient();
        if self.gens.is_empty() {
            return Ok(vec![Poly::one(s)]);
        }
        let rels = self.image.elements();
        let mut acc: Option<Vec<Poly>> = None;
        for g in &self.gens {
            let c = module_colon(s, self.rank, &rels, g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => crate::groebner::intersect(s, &a, &c)?,
            });
        }
        Ok(acc.unwrap_or_default())
    }

    /// The subquotient presented on its generators.
    pub fn to_module(&self) -> Result<PresentedModule> {
        let s = self.ring.ambient();
        let k = self.gens.len();
        if k == 0 {
            return Ok(PresentedModule::free(&self.ring, 0));
        }
        let mut all = self.gens.clone();
        all.extend(self.image.elements());
        let rels: Vec<ModuleElem> = syzygies(s, self.rank, &all)?
            .into_iter()
            .map(|z| z.project(0..k))
            .filter(|z| !z.is_zero())
            .collect();
        Ok(PresentedModule::new(&self.ring, k, rels))
    }
}

/// Cohomology of `M^{r'} --α--> M^r --β--> M^{r''}` at the middle spot.
/// `α` is `r × r'` and `β` is `r'' × r`; `None` stands for a zero map.
pub fn cohomology(m: &PresentedModule, alpha: Option<&Matrix>, beta: Option<&Matrix>, r: usize) -> Result<Subquotient> {
    let ring = m.ring().clone();
    let s = ring.ambient().clone();
    let b = m.rank();
    let rb = r * b;
    let rels = m.full_relations();
    let block_rels = |blocks: usize| -> Vec<ModuleElem> {
        let mut out = Vec::new();
        for k in 0..blocks {
            for n in &rels {
                out.push(n.shift(k * b, blocks * b));
            }
        }
        out
    };

    let mut image = block_rels(r);
    if let Some(a) = alpha {
        assert_eq!(a.rows, r);
        image.extend(a.tensor_columns(&s, b).into_iter().filter(|c| !c.is_zero()));
    }
    let image = Gb::new(&s, rb, &image, ModuleOrder::TermOverPosition)?;

    let kernel: Vec<ModuleElem> = match beta {
        Some(bm) if bm.rows > 0 && rb > 0 => {
            assert_eq!(bm.cols, r);
            let mut cols = bm.tensor_columns(&s, b);
            cols.extend(block_rels(bm.rows));
            syzygies(&s, bm.rows * b, &cols)?.into_iter().map(|z| z.project(0..rb)).collect()
        }
        _ => (0..rb).map(|i| ModuleElem::unit(&s, rb, i)).collect(),
    };
    let mut gens = Vec::new();
    for g in kernel {
        let nf = image.normal_form(&g)?;
        if !nf.is_zero() && !gens.contains(&nf) {
            gens.push(nf);
        }
    }
    gens.sort_by_key(|g: &ModuleElem| (g.degree(), g.terms().len()));
    Ok(Subquotient { ring, rank: rb, gens, image })
}

/// `H^i(Hom(K(xs), M))`.
pub fn koszul_cohomology(xs: &[Poly], m: &PresentedModule, i: usize) -> Result<Subquotient> {
    FreeComplex::koszul(m.ring(), xs).hom_cohomology(m, i)
}

/// `H_i(K(xs) ⊗ M)`.
pub fn koszul_homology(xs: &[Poly], m: &PresentedModule, i: usize) -> Result<Subquotient> {
    FreeComplex::koszul(m.ring(), xs).tensor_homology(m, i)
}

/// A free resolution over `R`, computed one step at a time.
#[derive(Clone, Debug)]
pub struct Resolution {
    ring: Ring,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
    /// A zero syzygy module has been reached.
    complete: bool,
}

impl Resolution {
    pub fn new(m: &PresentedModule) -> Result<Resolution> {
        let ring = m.ring().clone();
        let s = ring.ambient();
        let b = m.rank();
        let mut res = Resolution { ring: ring.clone(), ranks: vec![b], diffs: Vec::new(), complete: false };
        let cols: Vec<ModuleElem> = m.relations().iter().map(|r| reduce_elem(&ring, r)).collect::<Result<_>>()?;
        let cols = prune_over(&ring, b, &cols)?;
        if cols.is_empty() {
            res.complete = true;
        } else {
            res.ranks.push(cols.len());
            res.diffs.push(Matrix::from_columns(s, b, &cols));
        }
        Ok(res)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Computes differentials until `d_len: F_len → F_{len-1}` exists or the
    /// resolution ends.
    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        let s = self.ring.ambient().clone();
        while !self.complete && self.diffs.len() < len {
            let last = self.diffs.last().expect("nonempty");
            let rows = last.cols;
            let cols: Vec<ModuleElem> = (0..last.cols).map(|j| last.column(&s, j)).collect();
            let syz = ring_syzygies(&self.ring, last.rows, &cols)?;
            let syz = prune_over(&self.ring, rows, &syz)?;
            if syz.is_empty() {
                self.complete = true;
            } else {
                self.ranks.push(syz.len());
                self.diffs.push(Matrix::from_columns(&s, rows, &syz));
            }
        }
        Ok(())
    }

    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn to_complex(&self) -> FreeComplex {
        FreeComplex { ring: self.ring.clone(), ranks: self.ranks.clone(), diffs: self.diffs.clone() }
    }

    /// `H^i(Hom(F, M)) = Ext^i_R(N, M)`.
    pub fn ext(&mut self, m: &PresentedModule, i: usize) -> Result<Subquotient> {
        self.extend_to(i + 1)?;
        if i >= self.ranks.len() {
            return cohomology(m, None, None, 0);
        }
        let alpha = (i > 0).then(|| self.diffs[i - 1].transpose());
        let beta = self.diffs.get(i).map(|d| d.transpose());
        cohomology(m, alpha.as_ref(), beta.as_ref(), self.ranks[i])
    }
}

/// A free resolution of `M` with at most `length_bound` differentials.
pub fn free_resolution(m: &PresentedModule, length_bound: usize) -> Result<Resolution> {
    let mut r = Resolution::new(m)?;
    r.extend_to(length_bound)?;
    Ok(r)
}

/// `H^i(Hom(F, M))` for a computed resolution `F`.
pub fn hom_cohomology(res: &Resolution, m: &PresentedModule, i: usize) -> Result<Subquotient> {
    let mut r = res.clone();
    r.ext(m, i)
}

/// `Ext^i_R(N, M)` as a presented module.
pub fn ext_module(i: usize, n: &PresentedModule, m: &PresentedModule) -> Result<PresentedModule> {
    Resolution::new(n)?.ext(m, i)?.to_module()
}

/// Applies the chain map multiplying `e_J` by `Π_{j∈J} x_j^e` to a Koszul
/// cycle of degree `i`.
pub fn koszul_transition(xs: &[Poly], i: usize, e: u32, b: usize, v: &ModuleElem) -> ModuleElem {
    let s = v.ring().clone();
    let subsets = subsets_of(xs.len(), i);
    let n = subsets.len();
    let mut diag = Matrix::zero(&s, n, n);
    for (k, j) in subsets.iter().enumerate() {
        let mut f = Poly::one(&s);
        for &t in j {
            f = &f * &xs[t].pow(e);
        }
        diag.entries[k][k] = f;
    }
    diag.apply(&s, b, v)
}
