mod common;

use std::collections::BTreeMap;

use common::{a1, a2};
use klrtrace_core::cartan::CartanDatum;
use klrtrace_core::current::*;
use klrtrace_core::linalg::Matrix;
use klrtrace_core::{Error, Q};
use proptest::prelude::*;

fn ev(d: &CartanDatum, chi: i64, m: u32, max: u32) -> OperatorRep {
    evaluation_module(d, &Q::int(chi), &FiniteModule::sl2_irrep(d, m).unwrap(), max).unwrap()
}

/// sl₂ ⊗ k[t]/t² acting on itself; basis e⊗1, h⊗1, f⊗1, e⊗t, h⊗t, f⊗t.
fn truncated_adjoint(d: &CartanDatum, max: u32) -> OperatorRep {
    // structure constants of sl₂ in the basis e, h, f
    let bracket = |x: usize, y: usize| -> Option<(usize, i64)> {
        match (x, y) {
            (0, 1) => Some((0, -2)),
            (1, 0) => Some((0, 2)),
            (0, 2) => Some((1, 1)),
            (2, 0) => Some((1, -1)),
            (1, 2) => Some((2, -2)),
            (2, 1) => Some((2, 2)),
            _ => None,
        }
    };
    let mut ops = BTreeMap::new();
    for r in 0..=max {
        for (x, g) in [(0, Gen::Plus(0, r)), (1, Gen::Xi(0, r)), (2, Gen::Minus(0, r))] {
            let mut m = Matrix::zeros(6, 6);
            for s in 0..2u32 {
                for y in 0..3 {
                    if r + s < 2 {
                        if let Some((z, c)) = bracket(x, y) {
                            m.set(3 * (r + s) as usize + z, 3 * s as usize + y, Q::int(c));
                        }
                    }
                }
            }
            ops.insert(g, m);
        }
    }
    let weights = [2, 0, -2, 2, 0, -2].iter().map(|&w| d.weight(vec![w], vec![0])).collect();
    let degrees = Some(vec![0, 0, 0, 2, 2, 2]);
    OperatorRep::new(d, weights, degrees, max, ops).unwrap()
}

#[test]
fn truncated_adjoint_satisfies_all_relations() {
    let (d, _) = a1();
    let rep = truncated_adjoint(&d, 4);
    let report = relation_suite(&rep, 2).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    for rel in ["C1", "C2", "C3", "C3'", "C4", "C5", "weight", "grading"] {
        assert!(report.count(rel) > 0, "{} has instances", rel);
    }
    assert!(report.c3_prime_and_c2_imply_c3);
}

#[test]
fn evaluation_modules() {
    let (d, _) = a1();
    for chi in [-2, 0, 1, 3] {
        for m in 1..=3 {
            let rep = ev(&d, chi, m, 4);
            let report = relation_suite(&rep, 2).unwrap();
            assert!(report.passed(), "chi={} m={}: {:?}", chi, m, report.failures());
        }
    }
    let zero = ev(&d, 0, 2, 3);
    for r in 1..=3 {
        assert!(zero.op(&Gen::Plus(0, r)).unwrap().is_zero());
        assert!(zero.op(&Gen::Minus(0, r)).unwrap().is_zero());
    }
    let one = ev(&d, 1, 2, 3);
    for r in 1..=3 {
        assert_eq!(one.op(&Gen::Plus(0, r)).unwrap(), one.op(&Gen::Plus(0, 0)).unwrap());
    }
    let three = ev(&d, 3, 1, 2);
    assert_eq!(three.op(&Gen::Plus(0, 2)).unwrap(), &three.op(&Gen::Plus(0, 0)).unwrap().scale(&Q::int(9)));
}

#[test]
fn corrupted_operator_fails_c5() {
    let (d, _) = a1();
    let rep = ev(&d, 2, 1, 4);
    let mut ops = rep.ops().clone();
    let bad = ops[&Gen::Xi(0, 1)].scale(&Q::int(3));
    ops.insert(Gen::Xi(0, 1), bad);
    let broken = OperatorRep::new(&d, rep.weights.clone(), None, 4, ops).unwrap();
    let report = relation_suite(&broken, 2).unwrap();
    assert!(!report.passed_relation("C5"));
    let fail = report.failures().into_iter().find(|r| r.relation == "C5").unwrap();
    assert!(!fail.witness.as_ref().unwrap().is_empty());
}

#[test]
fn missing_operators_are_reported() {
    let (d, _) = a1();
    let rep = ev(&d, 1, 1, 2);
    assert!(matches!(relation_suite(&rep, 2), Err(Error::MissingOperator(_))));
    assert!(relation_suite(&rep, 1).is_ok());
}

#[test]
fn tensor_products_of_evaluations() {
    let (d, _) = a1();
    let v = FiniteModule::sl2_irrep(&d, 1).unwrap();
    let rep = tensor_evaluations(&d, &[(v.clone(), Q::int(0)), (v.clone(), Q::int(1))], 4).unwrap();
    assert_eq!(rep.dim(), 4);
    assert!(relation_suite(&rep, 2).unwrap().passed());
    assert!(matches!(tensor_evaluations(&d, &[(v.clone(), Q::int(2)), (v, Q::int(2))], 2), Err(Error::InvalidModule(_))));

    let (d2, _) = a2();
    let v1 = FiniteModule::fundamental(&d2, 0).unwrap();
    let v2 = FiniteModule::fundamental(&d2, 1).unwrap();
    let rep = tensor_evaluations(&d2, &[(v1, Q::int(0)), (v2, Q::int(1))], 4).unwrap();
    assert_eq!(rep.dim(), 9);
    let report = relation_suite(&rep, 2).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    assert!(report.count("C6b") > 0);
}

#[test]
fn finite_modules_validate() {
    let d3 = CartanDatum::type_a(3);
    for k in 1..=3 {
        let v = FiniteModule::exterior_power(&d3, k).unwrap();
        assert_eq!(v.dim(), [4, 6, 4][k - 1]);
    }
    let (d, _) = a1();
    let mut v = FiniteModule::sl2_irrep(&d, 2).unwrap();
    v.e[0] = v.e[0].scale(&Q::int(2));
    assert!(matches!(v.validate(&d), Err(Error::InvalidModule(_))));
    let (d2, _) = a2();
    assert!(FiniteModule::sl2_irrep(&d2, 1).is_err());
}

#[test]
fn weyl_oracle_examples() {
    let (d, _) = a1();
    let expect = [1, 2, 4, 8, 16];
    for m in 0..=4u32 {
        let (rep, o) = weyl_oracle_sl2(&d, m).unwrap();
        assert_eq!(o.dim, expect[m as usize]);
        assert_eq!(o.generated_dim, o.dim, "m={}", m);
        assert!(o.highest_vector_ok);
        // weight multiplicities are binomial coefficients
        for (k, c) in rep.weight_dims() {
            let down = ((m as i64 - k[0]) / 2) as u64;
            assert_eq!(c as i64, klrtrace_core::scalar::binomial(m as u64, down).to_i64().unwrap());
        }
    }
    let (_, o) = weyl_oracle_sl2_at(&d, &[Q::int(0), Q::int(1)]).unwrap();
    assert_eq!((o.dim, o.generated_dim), (4, 4));
    assert!(weyl_oracle_sl2_at(&d, &[Q::int(5), Q::int(5)]).is_err());
    assert!(weyl_oracle_sl2(&d, 5).is_err());
}

#[test]
fn equal_points_do_not_generate() {
    // at equal points only the symmetric square is reached
    let (d, _) = a1();
    let a = ev(&d, 3, 1, 3);
    let rep = tensor(&a, &a).unwrap();
    let mut hv = vec![Q::zero(); 4];
    hv[0] = Q::one();
    assert_eq!(lowering_orbit_dim(&rep, &hv).unwrap(), 3);
}

#[test]
fn shifts() {
    let (d, _) = a1();
    let rep = ev(&d, 2, 2, 4);
    let same = shift_rep(&rep, &Q::zero()).unwrap();
    assert_eq!(same.ops(), rep.ops());
    let shifted = shift_rep(&rep, &Q::int(3)).unwrap();
    assert_eq!(shifted.ops(), ev(&d, 5, 2, 4).ops());
    let back = shift_rep(&shifted, &Q::int(-3)).unwrap();
    assert_eq!(back.ops(), rep.ops());
    assert!(relation_suite(&shift_rep(&truncated_adjoint(&d, 4), &Q::new(1, 2)).unwrap(), 2).unwrap().passed());
}

#[test]
fn words_track_weights() {
    let (d, _) = a1();
    let rep = ev(&d, 1, 2, 2);
    let top = d.weight(vec![2], vec![0]);
    let f = CurrentWord::new(&top, vec![Letter::Gen(Gen::Minus(0, 1))]);
    let mid = f.target(&d);
    assert_eq!(mid.pairing(0), 0);
    let ff = CurrentWord::new(&mid, vec![Letter::Gen(Gen::Minus(0, 0))]).compose(&f, &d).unwrap();
    assert_eq!(ff.target(&d).pairing(0), -2);
    assert_eq!(ff.degree(), 2);
    assert!(matches!(f.compose(&f, &d), Err(Error::ContextMismatch(_))));
    let mut hv = vec![Q::zero(); 3];
    hv[0] = Q::one();
    let out = ff.act(&rep, &hv).unwrap();
    assert_eq!(out, vec![Q::zero(), Q::zero(), Q::one()]);
    let div = CurrentWord::new(&top, vec![Letter::Divided(Gen::Minus(0, 0), 2)]);
    assert_eq!(div.act(&rep, &hv).unwrap(), vec![Q::zero(), Q::zero(), Q::new(1, 2)]);
    assert!(div.act(&rep, &[Q::zero(), Q::one(), Q::zero()]).is_err());
}

#[test]
fn triangular_products_span() {
    let (d, _) = a1();
    let (rep, _) = weyl_oracle_sl2(&d, 2).unwrap();
    assert!(triangular_span_check(&rep, 1, 3).unwrap());
}

#[test]
fn rep_data_is_sparse_and_exact() {
    let (d, _) = a1();
    let rep = ev(&d, 1, 1, 0);
    let json = serde_json::to_string(&rep.to_data()).unwrap();
    assert_eq!(json, r#"{"weights":[[1],[-1]],"degrees":null,"ops":{"x+[1,0]":[[0,1,"1"]],"x-[1,0]":[[1,0,"1"]],"xi[1,0]":[[0,0,"1"],[1,1,"-1"]]}}"#);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distinct_points_pass(a in -5i64..5, b in -5i64..5, m in 1u32..3) {
        prop_assume!(a != b);
        let (d, _) = a1();
        let rep = tensor(&ev(&d, a, m, 4), &ev(&d, b, 1, 4)).unwrap();
        prop_assert!(relation_suite(&rep, 2).unwrap().passed());
    }

    #[test]
    fn shifts_compose(a in -4i64..4, b in -4i64..4, chi in -3i64..3) {
        let (d, _) = a1();
        let rep = ev(&d, chi, 1, 3);
        let two = shift_rep(&shift_rep(&rep, &Q::int(a)).unwrap(), &Q::int(b)).unwrap();
        let one = shift_rep(&rep, &Q::int(a + b)).unwrap();
        prop_assert_eq!(two.ops(), one.ops());
    }
}
