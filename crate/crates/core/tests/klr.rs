mod common;

use common::polyrep::{act_element, composite_action, mono_poly, monomials, same_action, action_rank};
use common::{a1, a2, klr};
use klrtrace_core::cartan::{default_scalars, CartanDatum, ScalarChoice};
use klrtrace_core::klr::{divided_power_class_rep, nilhecke_idempotent, KlrAlgebra};
use klrtrace_core::{Error, Q};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(alg: &KlrAlgebra, rng: &mut ChaCha8Rng, max_deg: i32) -> klrtrace_core::klr::Element {
    let floor = alg.floor_degree();
    loop {
        let d = rng.gen_range(floor..=max_deg);
        let piece = alg.graded_piece(d);
        if piece.is_empty() {
            continue;
        }
        let mut terms = std::collections::BTreeMap::new();
        for _ in 0..rng.gen_range(1..=3) {
            let b = piece[rng.gen_range(0..piece.len())].clone();
            terms.insert(b, Q::int(rng.gen_range(-3..=3)));
        }
        terms.retain(|_, c| !c.is_zero());
        if !terms.is_empty() {
            return alg.element(terms);
        }
    }
}

#[test]
fn idempotents_are_orthogonal() {
    let (d, q) = a2();
    let alg = klr(&d, &q, &[1, 1]);
    let e12 = alg.idempotent(&[0, 1]).unwrap();
    let e21 = alg.idempotent(&[1, 0]).unwrap();
    assert!(alg.multiply(&e12, &e21).unwrap().is_zero());
    assert_eq!(alg.multiply(&e12, &e12).unwrap(), e12);
}

#[test]
fn nilhecke_crossing_squares_to_zero() {
    let (d, q) = a1();
    let alg = klr(&d, &q, &[2]);
    let p = alg.psi(0, &[0, 0]).unwrap();
    assert!(alg.multiply(&p, &p).unwrap().is_zero());
}

#[test]
fn quadratic_relation_on_an_edge() {
    let (d, q) = a2();
    let alg = klr(&d, &q, &[1, 1]);
    for seq in [[0u8, 1], [1, 0]] {
        let p = alg.psi(0, &seq).unwrap();
        let back = alg.psi(0, &[seq[1], seq[0]]).unwrap();
        let sq = alg.multiply(&back, &p).unwrap();
        let (i, j) = (seq[0] as usize, seq[1] as usize);
        let expect = alg.y(0, &seq).unwrap().scale(&q.t(i, j)).add(&alg.y(1, &seq).unwrap().scale(&q.t(j, i))).unwrap();
        assert_eq!(sq, expect);
    }
    // t_12 = -1, t_21 = 1 for the orientation 1 -> 2
    let sq = alg.parse("psi[1,1] e(1,2)").unwrap();
    assert_eq!(alg.to_text(&sq), "y[0,1] e(1,2) - y[1,0] e(1,2)");
}

#[test]
fn nilhecke_dot_slide() {
    let (d, q) = a1();
    let alg = klr(&d, &q, &[2]);
    let s = [0u8, 0];
    let p = alg.psi(0, &s).unwrap();
    let lhs = alg.multiply(&p, &alg.y(0, &s).unwrap()).unwrap().sub(&alg.multiply(&alg.y(1, &s).unwrap(), &p).unwrap()).unwrap();
    assert_eq!(lhs, alg.idempotent(&s).unwrap());
}

#[test]
fn graded_piece_examples() {
    let (d, q) = a1();
    let nh2 = klr(&d, &q, &[2]);
    let piece = nh2.graded_piece(-2);
    assert_eq!(piece.len(), 1);
    assert_eq!(nh2.diagram_text(&piece[0]), "psi[1] e(1,1)");
    assert!(nh2.graded_piece(-3).is_empty());
    assert!(nh2.graded_piece(-40).is_empty());
    assert_eq!(nh2.floor_degree(), -2);

    let (d, q) = a2();
    let r = klr(&d, &q, &[1, 1]);
    let zero: Vec<String> = r.graded_piece(0).iter().map(|b| r.diagram_text(b)).collect();
    assert_eq!(zero, vec!["e(1,2)", "e(2,1)"]);
    assert_eq!(r.graded_piece(1).len(), 2);
}

#[test]
fn text_round_trip() {
    let (d, q) = a2();
    let alg = klr(&d, &q, &[2, 1]);
    let x = alg.parse("3/2 * psi[2,1] y[3,0,1] e(1,2,1) - e(2,1,1) + 2 * y[0,0,1] e(1,1,2)").unwrap();
    let back = alg.parse(&alg.to_text(&x)).unwrap();
    assert_eq!(x, back);
    assert_eq!(alg.parse("0").unwrap(), alg.zero());
    assert!(matches!(alg.parse("psi[1] e(1,1)"), Err(Error::ContextMismatch(_))));
    assert!(matches!(alg.parse("psi[7] e(1,2,1)"), Err(Error::OutOfRange(_))));
    assert!(matches!(alg.parse("psi[1 e(1,2,1)"), Err(Error::Parse(_))));
    assert!(matches!(alg.parse("e(1,2,3)"), Err(Error::Parse(_))));
}

#[test]
fn contexts_do_not_mix() {
    let (d, q) = a1();
    let a = klr(&d, &q, &[2]);
    let b = klr(&d, &q, &[3]);
    let x = a.unit();
    let y = b.unit();
    assert!(matches!(x.add(&y), Err(Error::ContextMismatch(_))));
    assert!(matches!(a.multiply(&x, &y), Err(Error::ContextMismatch(_))));
}

#[test]
fn nilhecke_idempotents() {
    let (d, q) = a1();
    for n in 1..=4u32 {
        let alg = klr(&d, &q, &[n]);
        let e = nilhecke_idempotent(&alg).unwrap();
        assert_eq!(alg.multiply(&e, &e).unwrap(), e, "n = {}", n);
        assert_eq!(alg.element_degree(&e), Some(0));
    }
    let alg = klr(&d, &q, &[1]);
    assert_eq!(nilhecke_idempotent(&alg).unwrap(), alg.unit());
    let alg = klr(&d, &q, &[2]);
    let y1psi = alg.multiply(&alg.y(0, &[0, 0]).unwrap(), &alg.psi(0, &[0, 0]).unwrap()).unwrap();
    assert_eq!(nilhecke_idempotent(&alg).unwrap(), y1psi);
    let dp = divided_power_class_rep(&alg, 1).unwrap();
    let expect = alg.multiply(&alg.parse("y[1,1] e(1,1)").unwrap(), &nilhecke_idempotent(&alg).unwrap()).unwrap();
    assert_eq!(dp, expect);
    let (d2, q2) = a2();
    let mixed = klr(&d2, &q2, &[1, 1]);
    assert!(nilhecke_idempotent(&mixed).is_err());
}

#[test]
fn defining_relations_hold() {
    let (d1, q1) = a1();
    let (d2, q2) = a2();
    for (d, q, nu) in [(&d1, &q1, vec![3u32]), (&d1, &q1, vec![4]), (&d2, &q2, vec![2, 1]), (&d2, &q2, vec![1, 2]), (&d2, &q2, vec![1, 1])] {
        let alg = klr(d, q, &nu);
        let rep = alg.relation_check();
        assert!(rep.passed(), "{:?}: {:?}", nu, rep.failures);
    }
}

#[test]
fn critical_pairs_small() {
    let (d, q) = a2();
    let alg = klr(&d, &q, &[2, 1]);
    let rep = alg.critical_pair_check();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.checked > 0);
}

/// Products agree with composition of operators in the polynomial
/// representation.
fn check_against_polyrep(alg: &KlrAlgebra, seed: u64, trials: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = sample(alg, &mut rng, 6);
        let y = sample(alg, &mut rng, 6);
        let xy = alg.multiply(&x, &y).unwrap();
        for s in alg.sequences() {
            for m in monomials(alg.strands(), 2) {
                let f = mono_poly(&m);
                assert_eq!(act_element(alg, &xy, &f, s), composite_action(alg, &x, &y, &f, s), "x = {} y = {}", alg.to_text(&x), alg.to_text(&y));
            }
        }
    }
}

#[test]
fn products_match_polynomial_representation() {
    let (d1, q1) = a1();
    let (d2, q2) = a2();
    check_against_polyrep(&klr(&d1, &q1, &[3]), 1, 30);
    check_against_polyrep(&klr(&d2, &q2, &[1, 1]), 2, 30);
    check_against_polyrep(&klr(&d2, &q2, &[2, 1]), 3, 30);
    check_against_polyrep(&klr(&d2, &q2, &[1, 2]), 4, 30);
    let rev = CartanDatum::type_a(2).reversed();
    let qr = default_scalars(&rev);
    check_against_polyrep(&klr(&rev, &qr, &[2, 1]), 5, 20);
}

#[test]
fn general_scalars_match_polynomial_representation() {
    let d = CartanDatum::type_a(2);
    let mut q = ScalarChoice::trivial(&d);
    q.set(0, 1, Q::new(2, 3)).unwrap();
    q.set(1, 0, Q::int(5)).unwrap();
    check_against_polyrep(&klr(&d, &q, &[2, 1]), 6, 20);
    check_against_polyrep(&klr(&d, &q, &[1, 2]), 7, 20);
    let d3 = CartanDatum::type_a(3);
    let q3 = default_scalars(&d3);
    check_against_polyrep(&klr(&d3, &q3, &[1, 1, 1]), 8, 20);
}

#[test]
fn basis_is_independent_in_polynomial_representation() {
    let (d1, q1) = a1();
    let (d2, q2) = a2();
    for (d, q, nu) in [(&d1, &q1, vec![2u32]), (&d1, &q1, vec![3]), (&d2, &q2, vec![1, 1]), (&d2, &q2, vec![2, 1])] {
        let alg = klr(d, q, &nu);
        for deg in alg.floor_degree()..=4 {
            let piece = alg.graded_piece(deg);
            let probe = (deg - alg.floor_degree()) as u32 / 2 + 3;
            assert_eq!(action_rank(&alg, &piece, probe), piece.len(), "nu {:?} degree {}", nu, deg);
        }
    }
}

#[test]
fn generated_dims_match_enumeration() {
    let (d1, q1) = a1();
    let alg = klr(&d1, &q1, &[3]);
    assert_eq!(alg.generated_dims(6), alg.enumerated_dims(6));
    let (d2, q2) = a2();
    let alg = klr(&d2, &q2, &[1, 1]);
    assert_eq!(alg.generated_dims(6), alg.enumerated_dims(6));
}

#[test]
fn divided_power_rep_squares_in_nilhecke() {
    let (d, q) = a1();
    let alg = klr(&d, &q, &[2]);
    let x = divided_power_class_rep(&alg, 0).unwrap();
    assert_eq!(x, nilhecke_idempotent(&alg).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn associativity(seed in any::<u64>(), which in 0usize..4) {
        let (d1, q1) = a1();
        let (d2, q2) = a2();
        let alg = match which {
            0 => klr(&d1, &q1, &[3]),
            1 => klr(&d1, &q1, &[2]),
            2 => klr(&d2, &q2, &[2, 1]),
            _ => klr(&d2, &q2, &[1, 1]),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&alg, &mut rng, 8);
        let y = sample(&alg, &mut rng, 8);
        let z = sample(&alg, &mut rng, 8);
        let l = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let r = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn degree_is_additive(seed in any::<u64>()) {
        let (d2, q2) = a2();
        let alg = klr(&d2, &q2, &[2, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&alg, &mut rng, 5);
        let y = sample(&alg, &mut rng, 5);
        prop_assume!(alg.element_degree(&x).is_some() && alg.element_degree(&y).is_some());
        let xy = alg.multiply(&x, &y).unwrap();
        if !xy.is_zero() {
            let expect = alg.element_degree(&x).unwrap() + alg.element_degree(&y).unwrap();
            prop_assert_eq!(alg.element_degree(&xy), Some(expect));
        }
    }

    #[test]
    fn parse_print_round_trip(seed in any::<u64>()) {
        let (d2, q2) = a2();
        let alg = klr(&d2, &q2, &[2, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&alg, &mut rng, 6);
        prop_assert_eq!(alg.parse(&alg.to_text(&x)).unwrap(), x);
    }

    #[test]
    fn unit_is_neutral(seed in any::<u64>()) {
        let (d1, q1) = a1();
        let alg = klr(&d1, &q1, &[3]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&alg, &mut rng, 6);
        prop_assert_eq!(alg.multiply(&alg.unit(), &x).unwrap(), x.clone());
        prop_assert_eq!(alg.multiply(&x, &alg.unit()).unwrap(), x);
    }
}

#[test]
fn same_action_detects_difference() {
    let (d, q) = a1();
    let alg = klr(&d, &q, &[2]);
    let a = alg.y(0, &[0, 0]).unwrap();
    let b = alg.y(1, &[0, 0]).unwrap();
    assert!(!same_action(&alg, &a, &b, 2));
    assert!(same_action(&alg, &a, &a, 2));
}
