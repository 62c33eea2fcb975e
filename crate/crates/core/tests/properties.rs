mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use cmgrade::cmsense::{ass_equals_min, check_sense_fg, generated_family, FamilyOptions};
use cmgrade::constructors::{invariant_ring, GroupAction};
use cmgrade::dsl::parse_poly;
use cmgrade::grade::{ext_grade, koszul_grade};
use cmgrade::groebner::{Gb, ModuleElem};
use cmgrade::poly::{Monomial, MonomialOrder, Poly, PolyRing, RingRef};
use cmgrade::ring::{IdealHandle, PresentedModule};
use cmgrade::scalars::{Field, FieldElem};
use cmgrade::IntOrInf;

use common::*;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(7)), Just(Field::Prime(32003))]
}

fn elem(f: Field) -> impl Strategy<Value = FieldElem> {
    (-50i64..50, 1i64..9).prop_map(move |(n, d)| {
        let d = if f.characteristic() != 0 && d % f.characteristic() as i64 == 0 { 1 } else { d };
        f.from_i64(n).div(&f.from_i64(d)).unwrap()
    })
}

fn three(f: Field) -> impl Strategy<Value = (FieldElem, FieldElem, FieldElem)> {
    (elem(f), elem(f), elem(f))
}

fn s3(f: Field, order: MonomialOrder) -> RingRef {
    PolyRing::new(f, vec!["x".into(), "y".into(), "z".into()], order)
}

fn terms() -> impl Strategy<Value = Vec<(i64, [u32; 3])>> {
    prop::collection::vec((-4i64..5, [0u32..3, 0u32..3, 0u32..3]), 0..5)
}

fn poly(s: &RingRef, t: &[(i64, [u32; 3])]) -> Poly {
    Poly::from_terms(s, t.iter().map(|(c, e)| (Monomial::new(e.iter().copied()), s.field().from_i64(*c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms((f, (a, b, c)) in field().prop_flat_map(|f| (Just(f), three(f)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        let _ = f;
    }

    #[test]
    fn order_is_total_and_multiplicative(a in [0u32..4, 0u32..4, 0u32..4], b in [0u32..4, 0u32..4, 0u32..4],
                                         c in [0u32..4, 0u32..4, 0u32..4], lex in any::<bool>()) {
        let s = s3(Field::Rational, if lex { MonomialOrder::Lex } else { MonomialOrder::DegRevLex });
        let (a, b, c) = (Monomial::new(a), Monomial::new(b), Monomial::new(c));
        let ab = s.term_cmp(&a, &b);
        prop_assert_eq!(ab, s.term_cmp(&b, &a).reverse());
        prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
        prop_assert_eq!(s.term_cmp(&a.mul(&c), &b.mul(&c)), ab);
        prop_assert_ne!(s.term_cmp(&a.mul(&c), &a), std::cmp::Ordering::Less);
    }

    #[test]
    fn ring_laws(f in field(), p in terms(), q in terms(), r in terms()) {
        let s = s3(f, MonomialOrder::DegRevLex);
        let (p, q, r) = (poly(&s, &p), poly(&s, &q), poly(&s, &r));
        let pq = p.try_mul(&q).unwrap();
        prop_assert_eq!(&pq, &q.try_mul(&p).unwrap());
        prop_assert_eq!(p.try_mul(&q.try_add(&r).unwrap()).unwrap(), pq.try_add(&p.try_mul(&r).unwrap()).unwrap());
        prop_assert!(p.try_sub(&p).unwrap().is_zero());
        if let (Some(dp), Some(dq)) = (p.total_degree(), q.total_degree()) {
            prop_assert_eq!(pq.total_degree(), Some(dp + dq));
        }
    }

    #[test]
    fn substitution_is_a_homomorphism(p in terms(), q in terms(), imgs in prop::collection::vec(terms(), 3)) {
        let s = s3(Field::Prime(7), MonomialOrder::DegRevLex);
        let t = PolyRing::new(Field::Prime(7), vec!["u".into(), "v".into(), "w".into()], MonomialOrder::Lex);
        let map: BTreeMap<usize, Poly> = imgs.iter().enumerate().map(|(i, m)| (i, poly(&t, m))).collect();
        let (p, q) = (poly(&s, &p), poly(&s, &q));
        let sub = |f: &Poly| f.substitute(&map, &t).unwrap();
        prop_assert_eq!(sub(&p.try_mul(&q).unwrap()), sub(&p).try_mul(&sub(&q)).unwrap());
        prop_assert_eq!(sub(&p.try_add(&q).unwrap()), sub(&p).try_add(&sub(&q)).unwrap());
    }

    #[test]
    fn display_round_trip(f in field(), p in terms()) {
        let s = s3(f, MonomialOrder::DegRevLex);
        let p = poly(&s, &p);
        prop_assert_eq!(parse_poly(&s, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn normal_forms(f in field(), gens in prop::collection::vec(terms(), 1..4), g in terms(), h in terms()) {
        let s = s3(f, MonomialOrder::DegRevLex);
        let gens: Vec<Poly> = gens.iter().map(|t| poly(&s, t)).collect();
        let gb = Gb::ideal(&s, &gens).unwrap();
        prop_assert!(gb.s_pairs_reduce_to_zero());
        let (g, h) = (poly(&s, &g), poly(&s, &h));
        let nf = gb.reduce_poly(&g).unwrap();
        prop_assert_eq!(gb.reduce_poly(&nf).unwrap(), nf.clone());
        // g - NF(g) lies in the ideal, and NF is linear modulo the ideal
        prop_assert!(gb.contains_poly(&g.try_sub(&nf).unwrap()).unwrap());
        let lhs = gb.reduce_poly(&g.try_add(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, nf.try_add(&gb.reduce_poly(&h).unwrap()).unwrap());
        for x in &gens {
            prop_assert!(gb.contains_poly(&x.try_mul(&h).unwrap()).unwrap());
        }
        let mut rev = gens.clone();
        rev.reverse();
        prop_assert!(gb.same_span(&Gb::ideal(&s, &rev).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grade_notions_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = random_ring(&mut r);
        prop_assume!(!ring.is_zero_ring());
        let a = random_ideal(&mut r, &ring);
        let m = PresentedModule::free(&ring, 1);
        let k = koszul_grade(&a, &m).unwrap().value;
        prop_assert_eq!(k, ext_grade(&a, &m).unwrap().value);
        prop_assert!(k <= a.height().unwrap());
    }

    #[test]
    fn variables_are_regular(n in 1usize..5, k in 1usize..5) {
        let k = k.min(n);
        let vars = ["a", "b", "c", "d"];
        let r = ring(Field::Rational, &vars[..n], &[]);
        let a = IdealHandle::parse(&r, &vars[..k]).unwrap();
        prop_assert_eq!(koszul_grade(&a, &PresentedModule::free(&r, 1)).unwrap().value, IntOrInf::Fin(k));
        prop_assert_eq!(a.height().unwrap(), IntOrInf::Fin(k));
    }

    #[test]
    fn reynolds_is_a_retraction(t in terms(), w in [0u32..3, 0u32..3, 0u32..3]) {
        let r = ring(Field::Rational, &["x", "y", "z"], &[]);
        let g = invariant_ring(&r, GroupAction::Diagonal { weights: w.to_vec(), modulus: 3 }).unwrap();
        let f = poly(r.ambient(), &t);
        let rf = g.reynolds(&f).unwrap();
        prop_assert!(g.is_invariant(&rf).unwrap());
        prop_assert_eq!(g.reynolds(&rf).unwrap(), rf.clone());
        prop_assert!(g.in_subalgebra(&rf).unwrap());
    }
}

#[test]
fn ass_equals_min_on_cohen_macaulay_rings() {
    let mut r = rng(5);
    let mut checked = 0;
    for _ in 0..25 {
        let ring = random_ring(&mut r);
        if ring.is_zero_ring() {
            continue;
        }
        let fam = generated_family(&ring, &FamilyOptions { cap: 12, random: 3, ..FamilyOptions::default() }).unwrap();
        if check_sense_fg(&ring, &fam).unwrap().passed() {
            assert!(ass_equals_min(&ring).unwrap(), "{ring}");
            checked += 1;
        }
    }
    assert!(checked > 10);
    let embedded = ring(Field::Rational, &["x", "y"], &["x^2", "x*y"]);
    assert!(!ass_equals_min(&embedded).unwrap());
}

#[test]
fn koszul_elements_are_syzygies() {
    let s = s3(Field::Rational, MonomialOrder::DegRevLex);
    let gens: Vec<Poly> = ["x^2 - y", "y*z", "x + z^2"].iter().map(|g| parse_poly(&s, g).unwrap()).collect();
    let syz = cmgrade::groebner::poly_syzygies(&s, &gens).unwrap();
    let span = Gb::new(&s, 3, &syz, cmgrade::poly::ModuleOrder::TermOverPosition).unwrap();
    for i in 0..3 {
        for j in i + 1..3 {
            let mut c = vec![Poly::zero(&s); 3];
            c[i] = gens[j].clone();
            c[j] = -gens[i].clone();
            assert!(span.contains(&ModuleElem::from_polys(&s, &c)).unwrap());
        }
    }
}
