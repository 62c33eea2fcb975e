//! Grade of an ideal on a module in its several forms, depth at a prime,
//! and the sequence conditions built from Koszul homology.
//!
//! Every ideal here is finitely generated, so the sup over finitely generated
//! subideals in the Koszul and Čech definitions is attained by the ideal itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::ideal_contained;
use crate::homology::{self, koszul_cohomology, koszul_homology, Resolution};
use crate::poly::Poly;
use crate::ring::{IdealHandle, IntOrInf, PresentedModule, PresentedRing, PrimeWitness, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    Koszul,
    Ext,
    Classical,
    PolynomialWitness,
    HgradeTruncated,
    CechAlias,
}

impl Notion {
    pub fn parse(s: &str) -> Option<Notion> {
        Some(match s {
            "koszul" => Notion::Koszul,
            "ext" => Notion::Ext,
            "classical" => Notion::Classical,
            "pgrade" | "polynomial" => Notion::PolynomialWitness,
            "hgrade" => Notion::HgradeTruncated,
            "cech" => Notion::CechAlias,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `M = aM`: nothing is nonzero.
    None,
    /// First nonvanishing index and an element of that (co)homology.
    Index { index: usize, element: String },
    /// An explicit weak regular sequence.
    Sequence { elements: Vec<String> },
    /// Values for `a, a^2, …` and the level from which they are constant.
    Stabilization { level: usize, values: Vec<IntOrInf> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradeReport {
    pub notion: Notion,
    pub value: IntOrInf,
    pub witness: Witness,
    /// A search or truncation ended before the answer was certain.
    pub truncated: bool,
    /// For the classical notion: whether the lower bound met the Koszul grade.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl GradeReport {
    fn new(notion: Notion, value: IntOrInf, witness: Witness) -> GradeReport {
        GradeReport { notion, value, witness, truncated: false, exact: None, note: None }
    }
}

/// Generators for the Koszul complex: nonzero, interreduced.
fn koszul_gens(a: &IdealHandle) -> Result<Vec<Poly>> {
    a.minimal_gens()
}

fn check_ring(a: &IdealHandle, m: &PresentedModule) -> Result<()> {
    if !std::sync::Arc::ptr_eq(a.ring(), m.ring()) && a.ring().to_string() != m.ring().to_string() {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// `inf { i : H^i(Hom(K(a), M)) ≠ 0 }`.
pub fn koszul_grade(a: &IdealHandle, m: &PresentedModule) -> Result<GradeReport> {
    check_ring(a, m)?;
    if m.equals_a_times(a)? {
        return Ok(GradeReport::new(Notion::Koszul, IntOrInf::Inf, Witness::None));
    }
    let xs = koszul_gens(a)?;
    for i in 0..=xs.len() {
        let h = koszul_cohomology(&xs, m, i)?;
        if let Some(w) = h.witness() {
            return Ok(GradeReport::new(Notion::Koszul, IntOrInf::Fin(i), Witness::Index { index: i, element: w.to_string() }));
        }
    }
    unreachable!("top Koszul cohomology is M/aM, which is nonzero")
}

/// The Čech grade, reported through its equality with the Koszul grade.
pub fn cech_grade(a: &IdealHandle, m: &PresentedModule) -> Result<GradeReport> {
    let mut r = koszul_grade(a, m)?;
    r.notion = Notion::CechAlias;
    r.note = Some("equal to the Koszul grade for every finitely generated ideal".into());
    Ok(r)
}

/// `inf { i : Ext^i_R(R/a, M) ≠ 0 }` from a free resolution of `R/a`.
pub fn ext_grade(a: &IdealHandle, m: &PresentedModule) -> Result<GradeReport> {
    check_ring(a, m)?;
    if m.equals_a_times(a)? {
        return Ok(GradeReport::new(Notion::Ext, IntOrInf::Inf, Witness::None));
    }
    let gens = koszul_gens(a)?;
    let quotient = IdealHandle::new(a.ring(), gens)?.quotient_module();
    let mut res = Resolution::new(&quotient)?;
    // M/aM ≠ 0 forces a nonzero Ext at or below the Koszul length
    let cap = a.ring().nvars() + a.gens().len() + 1;
    for i in 0..=cap {
        let e = res.ext(m, i)?;
        if let Some(w) = e.witness() {
            return Ok(GradeReport::new(Notion::Ext, IntOrInf::Fin(i), Witness::Index { index: i, element: w.to_string() }));
        }
    }
    Err(Error::Invalid("no nonvanishing Ext found below the dimension bound".into()))
}

/// Ext grades of `a, a^2, …, a^{n_max}` and the level from which they are constant.
pub fn hgrade_truncated(a: &IdealHandle, m: &PresentedModule, n_max: usize) -> Result<GradeReport> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let mut values = Vec::new();
    for n in 1..=n_max {
        let an = a.power(n as u32)?;
        values.push(ext_grade(&an, m)?.value);
    }
    let last = *values.last().unwrap();
    let level = values.iter().rposition(|v| *v != last).map_or(1, |p| p + 2);
    // constancy is witnessed only when at least one later power agrees
    let truncated = level == n_max && n_max > 1 || n_max == 1 && last != IntOrInf::Inf;
    let mut r = GradeReport::new(Notion::HgradeTruncated, last, Witness::Stabilization { level, values });
    r.truncated = truncated;
    Ok(r)
}

/// Whether `f` is a nonzerodivisor on `M` (vacuously so when `M = 0`).
pub fn is_weakly_regular(f: &Poly, m: &PresentedModule) -> Result<bool> {
    Ok(koszul_cohomology(std::slice::from_ref(f), m, 0)?.is_zero())
}

/// Whether `xs` is a weak regular sequence on `M`.
pub fn is_weak_regular_sequence(xs: &[Poly], m: &PresentedModule) -> Result<bool> {
    let mut cur = m.clone();
    for x in xs {
        if !is_weakly_regular(x, &cur)? {
            return Ok(false);
        }
        cur = cur.quotient_by_elems(std::slice::from_ref(x));
    }
    Ok(true)
}

/// Generators, then sums and differences of pairs and triples of generators.
pub fn candidate_pool(a: &IdealHandle, limit: usize) -> Result<Vec<Poly>> {
    let gens = koszul_gens(a)?;
    let mut pool = gens.clone();
    let g = gens.len();
    let push = |p: Poly, pool: &mut Vec<Poly>| {
        if !p.is_zero() && !pool.contains(&p) && pool.len() < limit {
            pool.push(p);
        }
    };
    for i in 0..g {
        for j in i + 1..g {
            push(&gens[i] + &gens[j], &mut pool);
            push(&gens[i] - &gens[j], &mut pool);
        }
    }
    for i in 0..g {
        for j in i + 1..g {
            for k in j + 1..g {
                push(&(&gens[i] + &gens[j]) + &gens[k], &mut pool);
                push(&(&gens[i] - &gens[j]) + &gens[k], &mut pool);
            }
        }
    }
    Ok(pool)
}

/// Longest weak regular sequence found in the candidate pool, up to
/// `depth_bound`. A lower bound for the grade.
pub fn classical_grade(a: &IdealHandle, m: &PresentedModule, depth_bound: usize) -> Result<GradeReport> {
    check_ring(a, m)?;
    if m.equals_a_times(a)? {
        return Ok(GradeReport::new(Notion::Classical, IntOrInf::Inf, Witness::None));
    }
    let k = koszul_grade(a, m)?.value.finite().expect("finite when M ≠ aM");
    let target = k.min(depth_bound);
    let pool = candidate_pool(a, 24)?;
    let mut best: Vec<Poly> = Vec::new();
    let mut cur: Vec<Poly> = Vec::new();
    search(&pool, m, target, &mut cur, &mut best)?;
    let value = best.len();
    let mut r = GradeReport::new(
        Notion::Classical,
        IntOrInf::Fin(value),
        Witness::Sequence { elements: best.iter().map(|p| p.to_string()).collect() },
    );
    r.exact = Some(value == k);
    r.truncated = value < k;
    Ok(r)
}

fn search(pool: &[Poly], m: &PresentedModule, target: usize, cur: &mut Vec<Poly>, best: &mut Vec<Poly>) -> Result<bool> {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    if cur.len() == target {
        return Ok(true);
    }
    for f in pool {
        if cur.contains(f) || !is_weakly_regular(f, m)? {
            continue;
        }
        cur.push(f.clone());
        let next = m.quotient_by_elems(std::slice::from_ref(f));
        if search(pool, &next, target, cur, best)? {
            return Ok(true);
        }
        cur.pop();
    }
    Ok(false)
}

/// A weak regular sequence of generic combinations `Σ t_j a_j` on `M[t]`
/// whose length is the Koszul grade.
pub fn polynomial_grade_witness(a: &IdealHandle, m: &PresentedModule) -> Result<GradeReport> {
    let k = koszul_grade(a, m)?;
    let IntOrInf::Fin(l) = k.value else {
        return Ok(GradeReport::new(Notion::PolynomialWitness, IntOrInf::Inf, Witness::None));
    };
    let gens = koszul_gens(a)?;
    let g = gens.len();
    let s = a.ring().ambient();
    let mut names = Vec::new();
    for _ in 0..l * g {
        let taken: Vec<String> = s.vars().iter().cloned().chain(names.iter().cloned()).collect();
        let mut k = 1;
        while taken.contains(&format!("t{k}")) {
            k += 1;
        }
        names.push(format!("t{k}"));
    }
    let big: Ring = a.ring().adjoin(&names)?;
    let t = big.ambient();
    let mut seq = Vec::new();
    for step in 0..l {
        let mut y = Poly::zero(t);
        for (j, gj) in gens.iter().enumerate() {
            let tv = Poly::var(t, s.nvars() + step * g + j);
            y = &y + &(&tv * &gj.transfer(t)?);
        }
        seq.push(y);
    }
    let mt = m.base_change(&big)?;
    if !is_weak_regular_sequence(&seq, &mt)? {
        return Err(Error::WitnessSearchFailed(format!("generic combinations of {gens:?} are not regular")));
    }
    Ok(GradeReport::new(
        Notion::PolynomialWitness,
        IntOrInf::Fin(l),
        Witness::Sequence { elements: seq.iter().map(|p| p.to_string()).collect() },
    ))
}

/// `depth M_p = inf { i : Ann Ext^i_S(S/p, M) ⊆ p }` with `p` taken in the
/// ambient ring; `R_p` itself is never built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthReport {
    pub value: usize,
    /// The prime was only probably prime.
    pub conditional: bool,
}

pub fn depth_at_prime(p: &PrimeWitness, m: &PresentedModule) -> Result<DepthReport> {
    let ring = m.ring();
    let s = ring.ambient();
    let ann = m.annihilator()?;
    let pre = p.ideal.preimage();
    if !ideal_contained(s, &ann.preimage(), &pre)? {
        return Err(Error::OutsideSupport);
    }
    let over = m.over_ambient();
    let sring = over.ring().clone();
    let quotient = IdealHandle::new(&sring, pre.clone())?.quotient_module();
    let mut res = Resolution::new(&quotient)?;
    for i in 0..=s.nvars() {
        let e = res.ext(&over, i)?;
        if e.is_zero() {
            continue;
        }
        if ideal_contained(s, &e.annihilator()?, &pre)? {
            return Ok(DepthReport { value: i, conditional: !p.certified });
        }
    }
    unreachable!("M_p is nonzero, so some Ext is supported at p")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProregularVerdict {
    Holds,
    FailsAtBound,
    HoldsForROnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProregularReport {
    pub verdict: ProregularVerdict,
    /// `(module index, homological degree, first level m that works)`.
    pub levels: Vec<(usize, usize, Option<usize>)>,
}

/// For each test module and `i ≥ 1`, looks for `m ∈ [n, m_max]` with
/// `H_i(K(x^m; M)) → H_i(K(x^n; M))` the zero map. The first test module is
/// taken to be `R`.
pub fn weak_proregular_check(xs: &[Poly], n: usize, m_max: usize, modules: &[PresentedModule]) -> Result<ProregularReport> {
    if n == 0 || m_max < n {
        return Err(Error::Invalid("need 1 <= n <= m_max".into()));
    }
    let pw = |e: usize| -> Vec<Poly> { xs.iter().map(|x| x.pow(e as u32)).collect() };
    let target_seq = pw(n);
    let mut levels = Vec::new();
    let mut ok = Vec::new();
    for (mi, m) in modules.iter().enumerate() {
        let mut all = true;
        for i in 1..=xs.len() {
            let target = koszul_homology(&target_seq, m, i)?;
            let mut found = None;
            for lvl in n..=m_max {
                let source = koszul_homology(&pw(lvl), m, i)?;
                let mut zero = true;
                for g in source.gens() {
                    let img = homology::koszul_transition(xs, i, (lvl - n) as u32, m.rank(), g);
                    if !target.image_contains(&img)? {
                        zero = false;
                        break;
                    }
                }
                if zero {
                    found = Some(lvl);
                    break;
                }
            }
            all &= found.is_some();
            levels.push((mi, i, found));
        }
        ok.push(all);
    }
    let verdict = if ok.iter().all(|&b| b) {
        ProregularVerdict::Holds
    } else if ok.first() == Some(&true) {
        ProregularVerdict::HoldsForROnly
    } else {
        ProregularVerdict::FailsAtBound
    };
    Ok(ProregularReport { verdict, levels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixVerdict {
    pub length: usize,
    pub koszul_grade: IntOrInf,
    pub proregular: ProregularVerdict,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterCertificate {
    pub prefixes: Vec<PrefixVerdict>,
    pub certified: bool,
    pub tag: Option<String>,
}

/// Level bound used when certifying weak proregularity of prefixes.
pub const PROREGULAR_LEVELS: usize = 4;

/// For each prefix `x_1..x_i`: Koszul grade `i` on `R` and weak proregularity.
pub fn strong_parameter_certificate(xs: &[Poly], ring: &Ring) -> Result<ParameterCertificate> {
    let all = IdealHandle::new(ring, xs.to_vec())?;
    if all.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let r = PresentedModule::free(ring, 1);
    let mut prefixes = Vec::new();
    for i in 1..=xs.len() {
        let a = IdealHandle::new(ring, xs[..i].to_vec())?;
        let k = koszul_grade(&a, &r)?.value;
        let pr = weak_proregular_check(&xs[..i], 1, PROREGULAR_LEVELS, std::slice::from_ref(&r))?.verdict;
        let pass = k == IntOrInf::Fin(i) && pr == ProregularVerdict::Holds;
        prefixes.push(PrefixVerdict { length: i, koszul_grade: k, proregular: pr, pass });
    }
    let certified = prefixes.iter().all(|p| p.pass);
    let tag = certified.then(|| "strong parameter sequence (certified via grade criterion)".to_string());
    Ok(ParameterCertificate { prefixes, certified, tag })
}

/// Height of `a` on `R` and its Koszul grade, the pair compared by the senses.
pub fn height_and_grade(a: &IdealHandle) -> Result<(IntOrInf, IntOrInf)> {
    let r = PresentedModule::free(a.ring(), 1);
    Ok((a.height()?, koszul_grade(a, &r)?.value))
}

/// `R/xR` for an element of the ring.
pub fn quotient_ring(ring: &Ring, xs: &[Poly]) -> Result<Ring> {
    let mut gens = ring.defining().to_vec();
    gens.extend(xs.iter().cloned());
    PresentedRing::new(ring.ambient(), &gens)
}
