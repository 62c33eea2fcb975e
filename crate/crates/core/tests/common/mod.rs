#![allow(dead_code)]

use cmgrade::dsl::parse_poly;
use cmgrade::poly::{MonomialOrder, Poly, PolyRing, RingRef};
use cmgrade::ring::{IdealHandle, PresentedRing, Ring};
use cmgrade::scalars::Field;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rand = ChaCha8Rng;

const VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly_ring(field: Field, vars: &[&str]) -> RingRef {
    PolyRing::new(field, vars.iter().map(|v| v.to_string()).collect(), MonomialOrder::DegRevLex)
}

pub fn ring(field: Field, vars: &[&str], rels: &[&str]) -> Ring {
    let s = poly_ring(field, vars);
    let gens: Vec<Poly> = rels.iter().map(|r| parse_poly(&s, r).unwrap()).collect();
    PresentedRing::new(&s, &gens).unwrap()
}

fn random_field(r: &mut Rand) -> Field {
    match r.gen_range(0..4) {
        0 | 1 => Field::Rational,
        2 => Field::Prime(2),
        _ => Field::Prime(*[3u32, 5, 7, 32003].choose(r).unwrap()),
    }
}

/// A monomial of degree 1 or 2 in the first `n` variables.
fn random_monomial(r: &mut Rand, n: usize, max_deg: u32) -> String {
    let d = r.gen_range(1..=max_deg);
    let vs: Vec<&str> = (0..d).map(|_| VARS[r.gen_range(0..n)]).collect();
    vs.join("*")
}

/// One or two terms with coefficients in `{±1, ±2}`.
pub fn random_poly(r: &mut Rand, n: usize, max_deg: u32) -> String {
    let mut s = random_monomial(r, n, max_deg);
    if r.gen_bool(0.4) {
        let c = *[1, -1, 2, -2].choose(r).unwrap();
        s = format!("{s} + ({c})*{}", random_monomial(r, n, max_deg));
    }
    s
}

/// `k[vars]/I` with at most three defining generators of degree at most 2.
pub fn random_ring(r: &mut Rand) -> Ring {
    let n = r.gen_range(1..=4);
    let field = random_field(r);
    let k = r.gen_range(0..=3);
    let rels: Vec<String> = (0..k).map(|_| random_poly(r, n, 2)).collect();
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    ring(field, &VARS[..n], &rels)
}

pub fn random_ideal(r: &mut Rand, ring: &Ring) -> IdealHandle {
    let n = ring.nvars();
    let k = r.gen_range(1..=3);
    let gens: Vec<String> = (0..k).map(|_| random_poly(r, n, 2)).collect();
    let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
    IdealHandle::parse(ring, &gens).unwrap()
}

/// Seeded (ring, ideal) pairs; unit ideals are skipped so grades stay finite.
pub fn pairs(seed: u64, count: usize) -> Vec<(Ring, IdealHandle)> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let ring = random_ring(&mut r);
        if ring.is_zero_ring() {
            continue;
        }
        let a = random_ideal(&mut r, &ring);
        if !a.is_unit() {
            out.push((ring, a));
        }
    }
    out
}
