//! Cohen–Macaulay senses decided over finite test families, weak Bourbaki
//! unmixedness, and an audit of the implications between the senses.
//!
//! A report speaks only about its family; no universal claim is made.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grade::{self, depth_at_prime, is_weak_regular_sequence, koszul_grade, strong_parameter_certificate};
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::ring::{IdealHandle, IntOrInf, PresentedModule, PrimeWitness, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    User,
    GeneratedDegree(u32),
    PrimesOfRing,
    MaximalSample,
}

/// Proper ideals, deduplicated by their reduced Gröbner bases.
#[derive(Clone, Debug)]
pub struct TestFamily {
    ideals: Vec<IdealHandle>,
    provenance: Vec<Provenance>,
}

impl TestFamily {
    pub fn new() -> TestFamily {
        TestFamily { ideals: Vec::new(), provenance: Vec::new() }
    }

    /// Adds `a` unless it is the unit ideal or already present.
    pub fn push(&mut self, a: IdealHandle, tag: Provenance) -> bool {
        if a.is_unit() {
            return false;
        }
        let key = a.preimage();
        if self.ideals.iter().any(|b| b.preimage() == key) {
            return false;
        }
        self.ideals.push(a);
        self.provenance.push(tag);
        true
    }

    pub fn ideals(&self) -> &[IdealHandle] {
        &self.ideals
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn describe(&self) -> Vec<String> {
        self.ideals.iter().map(|a| a.to_string()).collect()
    }
}

impl Default for TestFamily {
    fn default() -> Self {
        TestFamily::new()
    }
}

#[derive(Clone, Debug)]
pub struct FamilyOptions {
    pub degree_bound: u32,
    pub max_gens: usize,
    /// Number of seeded random ideals on top of the structured ones.
    pub random: usize,
    pub seed: u64,
    pub cap: usize,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { degree_bound: 2, max_gens: 3, random: 12, seed: 7, cap: 24 }
    }
}

/// Ideals generated by at most `max_gens` homogeneous elements of degree at
/// most `degree_bound` with coefficients in `{0, ±1}`: a structured part
/// (variables, pairs, squares, products, the irrelevant ideal) followed by a
/// seeded random sample. The exhaustive family is far too large, so the
/// result is capped.
pub fn generated_family(ring: &Ring, opts: &FamilyOptions) -> Result<TestFamily> {
    let s = ring.ambient();
    let n = s.nvars();
    let d = opts.degree_bound.max(1);
    let tag = Provenance::GeneratedDegree(d);
    let mut fam = TestFamily::new();
    let add = |fam: &mut TestFamily, gens: Vec<Poly>| -> Result<()> {
        if fam.len() >= opts.cap {
            return Ok(());
        }
        let gens: Vec<Poly> = gens.into_iter().take(opts.max_gens.max(n)).collect();
        fam.push(IdealHandle::new(ring, gens)?, tag);
        Ok(())
    };
    let x = |i: usize| Poly::var(s, i);
    add(&mut fam, Vec::new())?;
    for i in 0..n {
        add(&mut fam, vec![x(i)])?;
    }
    add(&mut fam, (0..n).map(x).collect())?;
    for i in 0..n {
        for j in i + 1..n {
            add(&mut fam, vec![x(i), x(j)])?;
            add(&mut fam, vec![&x(i) + &x(j)])?;
            if d >= 2 {
                add(&mut fam, vec![&x(i) * &x(j)])?;
                add(&mut fam, vec![x(i).pow(2), x(j).pow(2)])?;
                add(&mut fam, vec![x(i).pow(2), &x(i) * &x(j)])?;
            }
        }
        if d >= 2 {
            add(&mut fam, vec![x(i).pow(2)])?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let by_degree: Vec<Vec<Monomial>> = (1..=d).map(|k| monomials_of_degree(n, k)).collect();
    let field = s.field();
    let mut tries = 0;
    let target = fam.len() + opts.random;
    while n > 0 && fam.len() < target.min(opts.cap) && tries < 20 * opts.random + 20 {
        tries += 1;
        let k = rng.gen_range(1..=opts.max_gens.max(1));
        let mut gens = Vec::new();
        for _ in 0..k {
            let deg = rng.gen_range(1..=d) as usize;
            let mons = &by_degree[deg - 1];
            let t = rng.gen_range(1..=mons.len().min(3));
            let chosen: Vec<&Monomial> = mons.choose_multiple(&mut rng, t).collect();
            let terms = chosen.into_iter().map(|m| {
                let c = if rng.gen_bool(0.5) { field.one() } else { -field.one() };
                (m.clone(), c)
            });
            gens.push(Poly::from_terms(s, terms));
        }
        add(&mut fam, gens)?;
    }
    Ok(fam)
}

/// `Min(0)`, the irrelevant ideal, and the minimal primes of family members.
pub fn primes_family(ring: &Ring, fam: &TestFamily, cap: usize) -> Result<Vec<PrimeWitness>> {
    let mut out: Vec<PrimeWitness> = Vec::new();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut push = |p: PrimeWitness, out: &mut Vec<PrimeWitness>| {
        let key: Vec<String> = p.ideal.preimage().iter().map(|g| g.to_string()).collect();
        if out.len() < cap && seen.insert(key) {
            out.push(p);
        }
    };
    let m = IdealHandle::irrelevant(ring);
    if !m.is_unit() {
        for p in m.minimal_primes()? {
            push(p, &mut out);
        }
    }
    if !ring.is_zero_ring() {
        for p in IdealHandle::zero(ring).minimal_primes()? {
            push(p, &mut out);
        }
    }
    for a in fam.ideals() {
        for p in a.minimal_primes()? {
            push(p, &mut out);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    FgIdeals,
    Primes,
    Max,
    Glaz,
    Wb,
    Wbh,
    HmSurrogate,
}

impl Sense {
    pub fn parse(s: &str) -> Option<Sense> {
        Some(match s {
            "fg" => Sense::FgIdeals,
            "primes" => Sense::Primes,
            "max" => Sense::Max,
            "glaz" => Sense::Glaz,
            "wb" => Sense::Wb,
            "wbh" => Sense::Wbh,
            "hm" => Sense::HmSurrogate,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Passed, but relied on a prime that is only probably prime.
    Conditional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub ideal: String,
    pub height: IntOrInf,
    /// Koszul grade, depth at the prime, or the failing sequence's length.
    pub grade: IntOrInf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CMReport {
    pub sense: Sense,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub family: Vec<String>,
    pub checked: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CMReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

struct Row {
    mismatch: Option<Counterexample>,
    conditional: bool,
    skipped: bool,
}

fn assemble(sense: Sense, family: Vec<String>, rows: Vec<Row>, notes: Vec<String>) -> CMReport {
    let counterexample = rows.iter().find_map(|r| r.mismatch.clone());
    let conditional = rows.iter().any(|r| r.conditional);
    let verdict = match (&counterexample, conditional) {
        (Some(_), _) => Verdict::Fail,
        (None, true) => Verdict::Conditional,
        (None, false) => Verdict::Pass,
    };
    let skipped = rows.iter().filter(|r| r.skipped).count();
    CMReport { sense, verdict, counterexample, family, checked: rows.len() - skipped, skipped, notes }
}

fn ht_vs_grade(a: &IdealHandle, conditional: bool) -> Result<Row> {
    let (h, g) = grade::height_and_grade(a)?;
    let mismatch = (h != g).then(|| Counterexample { ideal: a.to_string(), height: h, grade: g, detail: None });
    Ok(Row { mismatch, conditional, skipped: false })
}

/// `ht(a) = K.grade(a, R)` for every `a` in the family.
pub fn check_sense_fg(ring: &Ring, fam: &TestFamily) -> Result<CMReport> {
    let _ = ring;
    let rows = fam.ideals().par_iter().map(|a| ht_vs_grade(a, false)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(Sense::FgIdeals, fam.describe(), rows, Vec::new()))
}

fn prime_rows(primes: &[PrimeWitness]) -> Result<Vec<Row>> {
    primes.par_iter().map(|p| ht_vs_grade(&p.ideal, !p.certified)).collect()
}

fn describe_primes(primes: &[PrimeWitness]) -> Vec<String> {
    primes.iter().map(|p| p.ideal.to_string()).collect()
}

/// `ht(p) = K.grade(p, R)` for every listed prime.
pub fn check_sense_primes(ring: &Ring, primes: &[PrimeWitness]) -> Result<CMReport> {
    let _ = ring;
    Ok(assemble(Sense::Primes, describe_primes(primes), prime_rows(primes)?, Vec::new()))
}

/// The prime comparison on the irrelevant ideal plus the given maximal ideals.
pub fn check_sense_max(ring: &Ring, extra: &[PrimeWitness]) -> Result<CMReport> {
    let mut maximals: Vec<PrimeWitness> = Vec::new();
    let m = IdealHandle::irrelevant(ring);
    if !m.is_unit() {
        maximals.extend(m.minimal_primes()?);
    }
    maximals.extend(extra.iter().cloned());
    Ok(assemble(Sense::Max, describe_primes(&maximals), prime_rows(&maximals)?, Vec::new()))
}

/// `ht(p) = depth R_p` for every listed prime.
pub fn check_sense_glaz(ring: &Ring, primes: &[PrimeWitness]) -> Result<CMReport> {
    let r = PresentedModule::free(ring, 1);
    let rows = primes
        .par_iter()
        .map(|p| {
            let h = IntOrInf::Fin(p.height()?);
            let d = depth_at_prime(p, &r)?;
            let g = IntOrInf::Fin(d.value);
            let mismatch = (h != g).then(|| Counterexample {
                ideal: p.ideal.to_string(),
                height: h,
                grade: g,
                detail: Some("depth of the localization".into()),
            });
            Ok(Row { mismatch, conditional: d.conditional, skipped: false })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(Sense::Glaz, describe_primes(primes), rows, Vec::new()))
}

fn prime_keys(ps: &[PrimeWitness]) -> BTreeSet<Vec<String>> {
    ps.iter().map(|p| p.ideal.preimage().iter().map(|g| g.to_string()).collect()).collect()
}

/// For `a` with `ht(a) ≥ μ̂(a)`: `Min(a) = Ass(R/a)`, or with `height_variant`
/// all associated primes of `R/a` of one height.
pub fn check_wb_unmixed(ring: &Ring, fam: &TestFamily, height_variant: bool) -> Result<CMReport> {
    let _ = ring;
    let rows = fam
        .ideals()
        .par_iter()
        .map(|a| {
            let h = a.height()?;
            let mu = a.mu_hat()?;
            if h < IntOrInf::Fin(mu) {
                return Ok(Row { mismatch: None, conditional: false, skipped: true });
            }
            let min = a.minimal_primes()?;
            let ass = a.quotient_module().associated_primes()?;
            let conditional = min.iter().chain(&ass).any(|p| !p.certified);
            let ok = if height_variant {
                let hs = ass.iter().map(|p| p.height()).collect::<Result<BTreeSet<_>>>()?;
                hs.len() <= 1
            } else {
                prime_keys(&min) == prime_keys(&ass)
            };
            let mismatch = (!ok).then(|| Counterexample {
                ideal: a.to_string(),
                height: h,
                grade: IntOrInf::Fin(mu),
                detail: Some(format!(
                    "Min = {:?}, Ass = {:?}",
                    min.iter().map(|p| p.ideal.to_string()).collect::<Vec<_>>(),
                    ass.iter().map(|p| p.ideal.to_string()).collect::<Vec<_>>()
                )),
            });
            Ok(Row { mismatch, conditional, skipped: false })
        })
        .collect::<Result<Vec<_>>>()?;
    let notes = vec![
        "generator counts are interreduced counts, an upper bound for the minimal number".into(),
        "weakly associated primes computed as associated primes (Noetherian ring)".into(),
    ];
    Ok(assemble(if height_variant { Sense::Wbh } else { Sense::Wb }, fam.describe(), rows, notes))
}

/// Every sequence certified as a strong parameter sequence is a weak regular sequence.
pub fn check_hm_surrogate(ring: &Ring, sequences: &[Vec<Poly>]) -> Result<CMReport> {
    let r = PresentedModule::free(ring, 1);
    let rows = sequences
        .par_iter()
        .map(|xs| {
            let name = format!("({})", xs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
            if IdealHandle::new(ring, xs.clone())?.is_unit() {
                return Ok(Row { mismatch: None, conditional: false, skipped: true });
            }
            let cert = strong_parameter_certificate(xs, ring)?;
            if !cert.certified {
                return Ok(Row { mismatch: None, conditional: false, skipped: true });
            }
            let regular = is_weak_regular_sequence(xs, &r)?;
            let mismatch = (!regular).then(|| Counterexample {
                ideal: name.clone(),
                height: IntOrInf::Fin(xs.len()),
                grade: IntOrInf::Fin(0),
                detail: Some("certified strong parameter sequence that is not regular".into()),
            });
            Ok(Row { mismatch, conditional: false, skipped: false })
        })
        .collect::<Result<Vec<_>>>()?;
    let family = sequences
        .iter()
        .map(|xs| format!("({})", xs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    Ok(assemble(Sense::HmSurrogate, family, rows, Vec::new()))
}

/// Prefix-closed sequences from the variables and sums of two variables,
/// up to length `max_len`.
pub fn sequence_pool(ring: &Ring, max_len: usize) -> Vec<Vec<Poly>> {
    let s = ring.ambient();
    let n = s.nvars();
    let mut elems: Vec<Poly> = (0..n).map(|i| Poly::var(s, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            elems.push(&Poly::var(s, i) + &Poly::var(s, j));
        }
    }
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<usize>::new()];
    for _ in 0..max_len.min(n) {
        let mut next = Vec::new();
        for seq in &frontier {
            for k in 0..elems.len() {
                if !seq.contains(&k) && seq.last().is_none_or(|&l| k > l) {
                    let mut s2 = seq.clone();
                    s2.push(k);
                    next.push(s2);
                }
            }
        }
        next.truncate(12);
        out.extend(next.iter().map(|ix| ix.iter().map(|&k| elems[k].clone()).collect()));
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub ring: String,
    pub reports: Vec<CMReport>,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn sense(&self, s: Sense) -> Option<&CMReport> {
        self.reports.iter().find(|r| r.sense == s)
    }

    pub fn passes(&self, s: Sense) -> bool {
        self.sense(s).is_some_and(|r| r.passed())
    }
}

/// Evaluates every sense on shared families and checks the proved
/// implications: primes ⇒ Glaz ⇒ f.g. ideals ⇒ HM surrogate, and
/// f.g. ideals + primes ⇒ weak Bourbaki unmixed.
pub fn implication_audit(ring: &Ring, fam: &TestFamily) -> Result<AuditReport> {
    let primes = primes_family(ring, fam, 16)?;
    let reports = vec![
        check_sense_fg(ring, fam)?,
        check_sense_primes(ring, &primes)?,
        check_sense_max(ring, &[])?,
        check_sense_glaz(ring, &primes)?,
        check_wb_unmixed(ring, fam, false)?,
        check_wb_unmixed(ring, fam, true)?,
        check_hm_surrogate(ring, &sequence_pool(ring, 2))?,
    ];
    let mut audit = AuditReport { ring: ring.to_string(), reports, violations: Vec::new() };
    let p = |s| audit.passes(s);
    let mut v = Vec::new();
    if p(Sense::Primes) && !p(Sense::Glaz) {
        v.push("primes pass but Glaz fails".to_string());
    }
    if p(Sense::Glaz) && !p(Sense::FgIdeals) {
        v.push("Glaz passes but f.g. ideals fail".to_string());
    }
    if p(Sense::FgIdeals) && !p(Sense::HmSurrogate) {
        v.push("f.g. ideals pass but the HM surrogate fails".to_string());
    }
    if p(Sense::Primes) && !p(Sense::Max) {
        v.push("primes pass but maximal ideals fail".to_string());
    }
    if p(Sense::FgIdeals) && p(Sense::Primes) && !p(Sense::Wb) {
        v.push("f.g. ideals and primes pass but weak Bourbaki unmixedness fails".to_string());
    }
    audit.violations = v;
    Ok(audit)
}

/// `Ass(R) = Min(0)`, expected for rings passing the f.g. sense.
pub fn ass_equals_min(ring: &Ring) -> Result<bool> {
    let zero = IdealHandle::zero(ring);
    let min = zero.minimal_primes()?;
    let ass = PresentedModule::free(ring, 1).associated_primes()?;
    Ok(prime_keys(&min) == prime_keys(&ass))
}

/// Koszul grade of `a` on `R`, re-run for determinism checks.
pub fn recheck(c: &Counterexample, ring: &Ring) -> Result<bool> {
    let gens = c.ideal.trim_matches(|ch| ch == '(' || ch == ')');
    let gens: Vec<&str> = if gens.trim().is_empty() { Vec::new() } else { gens.split(", ").collect() };
    let a = IdealHandle::parse(ring, &gens)?;
    let r = PresentedModule::free(ring, 1);
    Ok(a.height()? == c.height && koszul_grade(&a, &r)?.value == c.grade)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};
    use crate::ring::PresentedRing;
    use crate::scalars::Field;

    fn ring(vars: &[&str], rels: &[&str]) -> Ring {
        let s = PolyRing::new(Field::Rational, vars.iter().map(|v| v.to_string()).collect(), MonomialOrder::DegRevLex);
        let gens: Vec<Poly> = rels.iter().map(|r| crate::dsl::parse_poly(&s, r).unwrap()).collect();
        PresentedRing::new(&s, &gens).unwrap()
    }

    fn small() -> FamilyOptions {
        FamilyOptions { random: 4, cap: 14, ..FamilyOptions::default() }
    }

    #[test]
    fn polynomial_ring_passes_everything() {
        let r = ring(&["x", "y"], &[]);
        let fam = generated_family(&r, &small()).unwrap();
        let audit = implication_audit(&r, &fam).unwrap();
        for rep in &audit.reports {
            assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep);
        }
        assert!(audit.violations.is_empty());
    }

    #[test]
    fn plane_and_line_fail_consistently() {
        let r = ring(&["x", "y", "z"], &["x*y", "x*z"]);
        let fam = generated_family(&r, &small()).unwrap();
        let audit = implication_audit(&r, &fam).unwrap();
        assert!(!audit.passes(Sense::FgIdeals));
        assert!(!audit.passes(Sense::Primes));
        assert!(!audit.passes(Sense::Glaz));
        assert!(audit.violations.is_empty(), "{:?}", audit.violations);
        let c = audit.sense(Sense::FgIdeals).unwrap().counterexample.clone().unwrap();
        assert!(recheck(&c, &r).unwrap());
        let m = IdealHandle::irrelevant(&r).minimal_primes().unwrap();
        let glaz = check_sense_glaz(&r, &m).unwrap();
        let ce = glaz.counterexample.unwrap();
        assert_eq!((ce.height, ce.grade), (IntOrInf::Fin(2), IntOrInf::Fin(1)));
    }

    #[test]
    fn field_passes_vacuously() {
        let s = PolyRing::new(Field::Rational, Vec::new(), MonomialOrder::DegRevLex);
        let r = PresentedRing::polynomial(&s);
        let fam = generated_family(&r, &small()).unwrap();
        assert_eq!(fam.len(), 1);
        let audit = implication_audit(&r, &fam).unwrap();
        assert!(audit.reports.iter().all(|r| r.passed()));
    }

    #[test]
    fn wb_filter() {
        let r = ring(&["x", "y"], &[]);
        let mut fam = TestFamily::new();
        fam.push(IdealHandle::parse(&r, &["x"]).unwrap(), Provenance::User);
        fam.push(IdealHandle::parse(&r, &["x^2", "x*y"]).unwrap(), Provenance::User);
        let rep = check_wb_unmixed(&r, &fam, false).unwrap();
        assert_eq!((rep.checked, rep.skipped), (1, 1));
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn cone_primes_pass() {
        let r = ring(&["a", "b", "c"], &["b^2 - a*c"]);
        let ps: Vec<PrimeWitness> = [vec!["a", "b", "c"], vec!["a", "b"]]
            .iter()
            .map(|g| PrimeWitness::from_ideal(IdealHandle::parse(&r, g).unwrap()).unwrap())
            .collect();
        assert_eq!(check_sense_primes(&r, &ps).unwrap().verdict, Verdict::Pass);
        let k = ring(&["x"], &[]);
        let p = PrimeWitness::from_ideal(IdealHandle::parse(&k, &["x"]).unwrap()).unwrap();
        assert_eq!(check_sense_primes(&k, &[p]).unwrap().verdict, Verdict::Pass);
    }
}
