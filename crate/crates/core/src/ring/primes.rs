//! Minimal primes of ideals in the ambient ring by splitting.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::Result;
use crate::factor::{is_irreducible, split};
use super::dim::ambient_dim;
use crate::groebner::{colon, ideal_contained, reduced_gens, saturation, Gb};
use crate::poly::{Poly, RingRef};

/// A prime of the ambient ring, as its reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientPrime {
    pub gens: Vec<Poly>,
    /// Primality proven (linear after elimination, or one irreducible element,
    /// or known from the construction). Otherwise only no splitting element
    /// was found.
    pub certified: bool,
    /// Krull dimension of `S / P`.
    pub dim: usize,
}

fn cache() -> &'static Mutex<HashMap<String, Vec<AmbientPrime>>> {
    static C: OnceLock<Mutex<HashMap<String, Vec<AmbientPrime>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn ideal_key(ring: &RingRef, gb: &[Poly]) -> String {
    let mut s = format!("{}|{}|{:?}|", ring.field(), ring.vars().join(","), ring.order());
    for g in gb {
        s.push_str(&g.to_string());
        s.push(';');
    }
    s
}

/// `Min(gens)` in the ambient ring; empty for the unit ideal. `known_prime`
/// certifies the input itself as prime when no split is found.
pub fn ambient_min_primes(ring: &RingRef, gens: &[Poly], known_prime: bool) -> Result<Vec<AmbientPrime>> {
    let j = reduced_gens(ring, gens)?;
    let key = format!("{known_prime}|{}", ideal_key(ring, &j));
    if let Some(v) = cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let mut found = Vec::new();
    if known_prime && !is_unit(&j) {
        found.push(AmbientPrime { gens: j.clone(), certified: true, dim: 0 });
    } else {
        decompose(ring, j, &mut found, 0)?;
    }
    let mut minimal = minimalize(ring, found)?;
    for p in &mut minimal {
        p.dim = ambient_dim(ring, &p.gens)?.expect("prime is proper");
    }
    let mut c = cache().lock().unwrap();
    if c.len() > 50_000 {
        c.clear();
    }
    c.insert(key, minimal.clone());
    Ok(minimal)
}

fn is_unit(j: &[Poly]) -> bool {
    j.iter().any(|g| g.is_constant() && !g.is_zero())
}

fn with(ring: &RingRef, j: &[Poly], f: &Poly) -> Result<Vec<Poly>> {
    let mut g = j.to_vec();
    g.push(f.clone());
    reduced_gens(ring, &g)
}

fn decompose(ring: &RingRef, j: Vec<Poly>, out: &mut Vec<AmbientPrime>, depth: usize) -> Result<()> {
    if is_unit(&j) {
        return Ok(());
    }
    if certify(ring, &j)? {
        out.push(AmbientPrime { gens: j, certified: true, dim: 0 });
        return Ok(());
    }
    // V(J) = V(J + a) ∪ V(J + b) when ab ∈ J
    for g in &j {
        if let Some((a, b)) = split(g) {
            decompose(ring, with(ring, &j, &a)?, out, depth + 1)?;
            decompose(ring, with(ring, &j, &b)?, out, depth + 1)?;
            return Ok(());
        }
    }
    // V(J) = V(J : f^∞) ∪ V(J + f) for any f; useful when f is a zero divisor
    let gb = Gb::ideal(ring, &j)?;
    for f in candidates(ring) {
        if gb.contains_poly(&f)? {
            continue;
        }
        let c = colon(ring, &j, &f)?;
        if c != j {
            let (sat, _) = saturation(ring, &c, &f)?;
            decompose(ring, sat, out, depth + 1)?;
            decompose(ring, with(ring, &j, &f)?, out, depth + 1)?;
            return Ok(());
        }
    }
    out.push(AmbientPrime { gens: j, certified: false, dim: 0 });
    Ok(())
}

/// Variables, then linear forms on at most two variables with unit coefficients.
fn candidates(ring: &RingRef) -> Vec<Poly> {
    let n = ring.nvars();
    let mut out: Vec<Poly> = (0..n).map(|i| Poly::var(ring, i)).collect();
    let one = ring.field().one();
    for i in 0..n {
        for k in i + 1..n {
            let (xi, xk) = (Poly::var(ring, i), Poly::var(ring, k));
            out.push(&xi + &xk);
            if one != -one.clone() {
                out.push(&xi - &xk);
            }
        }
    }
    out
}

/// Proves primality in the cases the corpus needs.
pub fn certify(_ring: &RingRef, j: &[Poly]) -> Result<bool> {
    // elements with lead term a single variable eliminate that variable;
    // reducedness keeps it out of the others
    let rest: Vec<&Poly> = j
        .iter()
        .filter(|g| g.leading_monomial().unwrap().degree() != 1)
        .collect();
    match rest.as_slice() {
        [] => Ok(true),
        [g] => Ok(is_irreducible(g)? == Some(true)),
        _ => Ok(false),
    }
}

/// Removes duplicates and non-minimal members.
pub fn minimalize(ring: &RingRef, mut ps: Vec<AmbientPrime>) -> Result<Vec<AmbientPrime>> {
    ps.sort_by(|a, b| a.gens.len().cmp(&b.gens.len()).then_with(|| key_cmp(&a.gens, &b.gens)));
    ps.dedup_by(|a, b| a.gens == b.gens);
    let mut keep = vec![true; ps.len()];
    for a in 0..ps.len() {
        for b in 0..ps.len() {
            if a != b && keep[b] && ideal_contained(ring, &ps[b].gens, &ps[a].gens)? {
                // ps[b] ⊆ ps[a] and they differ, so ps[a] is not minimal
                keep[a] = false;
                break;
            }
        }
    }
    let mut out: Vec<AmbientPrime> = ps.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    out.sort_by(|a, b| key_cmp(&a.gens, &b.gens));
    Ok(out)
}

fn key_cmp(a: &[Poly], b: &[Poly]) -> std::cmp::Ordering {
    let ka: Vec<String> = a.iter().map(|p| p.to_string()).collect();
    let kb: Vec<String> = b.iter().map(|p| p.to_string()).collect();
    ka.len().cmp(&kb.len()).then(ka.cmp(&kb))
}

/// Whether the lead monomials make `gens` a monomial ideal.
pub fn is_monomial_ideal(gens: &[Poly]) -> bool {
    gens.iter().all(|g| g.nterms() == 1)
}
