use crate::error::Result;
use crate::groebner::Gb;
use crate::poly::{Monomial, Poly, RingRef};

/// Largest set of variables containing the support of no lead monomial.
/// `None` when a lead monomial is `1` (unit ideal).
pub fn dim_from_leads(nvars: usize, leads: &[Monomial]) -> Option<usize> {
    if leads.iter().any(|m| m.is_one()) {
        return None;
    }
    let masks: Vec<u64> = leads
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    assert!(nvars < 64, "too many variables for the independent-set search");
    let mut best = 0;
    // independent sets are closed under subsets, so a depth-first search with
    // pruning on the current bound suffices
    fn go(i: usize, n: usize, set: u64, size: usize, masks: &[u64], best: &mut usize) {
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = set | (1 << i);
        if masks.iter().all(|&m| m & !with != 0) {
            go(i + 1, n, with, size + 1, masks, best);
        }
        go(i + 1, n, set, size, masks, best);
    }
    go(0, nvars, 0, 0, &masks, &mut best);
    Some(best)
}

/// Krull dimension of `S / (gens)`; `None` for the unit ideal.
pub fn ambient_dim(ring: &RingRef, gens: &[Poly]) -> Result<Option<usize>> {
    let gb = Gb::ideal(ring, gens)?;
    Ok(dim_of_gb(&gb))
}

pub fn dim_of_gb(gb: &Gb) -> Option<usize> {
    let leads: Vec<Monomial> = gb.leading().into_iter().map(|(m, _)| m).collect();
    dim_from_leads(gb.ring().nvars(), &leads)
}
