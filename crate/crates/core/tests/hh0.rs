mod common;

use common::nilhecke::gaussian_binomial_q2;
use common::{a1, a2, klr};
use klrtrace_core::cyclo::{apply_columns, induction_embedding, CyclotomicFamily};
use klrtrace_core::graded::{GradedAlgebra, Vector};
use klrtrace_core::hh0::{bimodule_trace_map, center_space, chern_classes, report, trace_space, DualBasis, FreeTrace, LeftModule};
use klrtrace_core::linalg::axpy;
use klrtrace_core::{Error, Q};
use proptest::prelude::*;

fn nh(n: u32, m: i64) -> std::sync::Arc<klrtrace_core::cyclo::CyclotomicQuotient> {
    let (d, q) = a1();
    CyclotomicFamily::new(&d, &q, &d.dominant(&[m]), 40).unwrap().get(&[n]).unwrap()
}

fn v(entries: &[(usize, i64)]) -> Vector {
    entries.iter().map(|&(k, c)| (k, Q::int(c))).collect()
}

#[test]
fn commutative_and_matrix_traces() {
    for m in 1..5 {
        let a = GradedAlgebra::truncated_polynomial(m);
        assert_eq!(trace_space(&a).dim(), m);
        assert_eq!(center_space(&a).dim(), m);
    }
    for n in 1..4 {
        let a = GradedAlgebra::matrix_algebra(n);
        assert_eq!(trace_space(&a).dim(), 1);
        assert_eq!(center_space(&a).dim(), 1);
    }
}

#[test]
fn nilhecke_traces_sum_to_powers_of_two() {
    for m in 1..=3i64 {
        let total: usize = (0..=m as u32).map(|n| trace_space(nh(n, m).algebra()).dim()).sum();
        assert_eq!(total, 1 << m);
    }
    assert_eq!(trace_space(nh(2, 2).algebra()).dim(), 1);
}

#[test]
fn nilhecke_trace_is_gaussian_binomial_and_dual_to_center() {
    for (n, m) in [(1u32, 1i64), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)] {
        let a = nh(n, m);
        let tr = trace_space(a.algebra()).graded_dims();
        assert_eq!(tr, gaussian_binomial_q2(m as usize, n as usize), "HH0 of NH_{}^{}", n, m);
        let z = center_space(a.algebra()).graded_dims();
        assert_eq!(z.values().sum::<usize>(), tr.values().sum::<usize>());
        let top = *tr.keys().last().unwrap();
        for (d, c) in &z {
            assert_eq!(tr.get(&(top - d)), Some(c), "mirror at degree {}", d);
        }
    }
}

#[test]
fn center_elements_commute() {
    let a = nh(2, 3);
    let alg = a.algebra();
    for z in &center_space(alg).basis {
        for i in 0..alg.dim() {
            assert!(alg.commutator(z, &alg.basis_vector(i)).is_empty());
        }
    }
}

#[test]
fn chern_examples() {
    let m2 = GradedAlgebra::matrix_algebra(2);
    let tr = trace_space(&m2);
    let e11 = v(&[(0, 1)]);
    let e22 = v(&[(3, 1)]);
    let ch = chern_classes(&m2, &tr, &[e11.clone(), e22]).unwrap();
    assert_eq!(ch.rank, 1);
    assert_eq!(ch.classes[0], ch.classes[1]);
    assert_eq!(ch.semisimple_dims, vec![1, 1]);
    let zero = chern_classes(&m2, &tr, &[Vector::new()]).unwrap();
    assert!(zero.classes[0].is_empty() && zero.rank == 0);
    assert!(matches!(chern_classes(&m2, &tr, &[v(&[(1, 1)])]), Err(Error::NotIdempotent(_))));

    let a = nh(2, 2);
    let tr = trace_space(a.algebra());
    let (d, q) = a1();
    let free = klr(&d, &q, &[2]);
    let e2 = a.reduce(&klrtrace_core::klr::nilhecke_idempotent(&free).unwrap().into_terms());
    let ch = chern_classes(a.algebra(), &tr, &[e2]).unwrap();
    assert_eq!(ch.rank, 1);
    assert!(!ch.classes[0].is_empty());
    assert_eq!(ch.semisimple_dims, vec![1]);
}

#[test]
fn division_dims_are_reported() {
    // e(ii) in NH_2^2 is a sum of two isomorphic primitives: eAe ≅ M_2(k)
    let a = nh(2, 2);
    let tr = trace_space(a.algebra());
    let e = a.dotted_idempotent(&[0, 0], &[0, 0]).unwrap();
    let ch = chern_classes(a.algebra(), &tr, &[e]).unwrap();
    assert_eq!(ch.semisimple_dims, vec![4]);
}

#[test]
fn regular_bimodule_gives_identity() {
    for a in [nh(2, 2), nh(1, 3), nh(2, 3)] {
        let alg = a.algebra();
        let tr = trace_space(alg);
        let p = LeftModule::regular(alg);
        let map = bimodule_trace_map(alg, &tr, &tr, &p, |i, x| alg.mul(x, &alg.basis_vector(i))).unwrap();
        assert_eq!(map, klrtrace_core::linalg::Matrix::identity(tr.dim()));
    }
}

#[test]
fn morita_trace() {
    // P = k^2 as row vectors: left k-module, right M_2-module
    let k = GradedAlgebra::matrix_algebra(1);
    let m2 = GradedAlgebra::matrix_algebra(2);
    let trk = trace_space(&k);
    let trm = trace_space(&m2);
    let p = LeftModule { degrees: vec![0, 0], action: vec![vec![v(&[(0, 1)]), v(&[(1, 1)])]] };
    // e_r E_ij = δ_ri e_j, with E_ij at index 2i + j
    let right = |idx: usize, x: &Vector| -> Vector {
        let (i, j) = (idx / 2, idx % 2);
        x.get(&i).map(|c| [(j, c.clone())].into_iter().collect()).unwrap_or_default()
    };
    let map = bimodule_trace_map(&k, &trm, &trk, &p, right).unwrap();
    assert_eq!(map.rows, 1);
    assert_eq!(map.cols, 1);
    let e11_class = trm.project(&v(&[(0, 1)]));
    let dense: Vec<Q> = (0..trm.dim()).map(|k| e11_class.get(&k).cloned().unwrap_or_else(Q::zero)).collect();
    let image = map.apply(&dense);
    assert_eq!(image, vec![Q::one()]);

    // the reverse bimodule: columns, projective over M_2
    let col_action: Vec<Vec<Vector>> = (0..4).map(|idx| {
        let (i, j) = (idx / 2, idx % 2);
        (0..2).map(|r| if r == j { v(&[(i, 1)]) } else { Vector::new() }).collect()
    }).collect();
    let q = LeftModule { degrees: vec![0, 0], action: col_action };
    let back = bimodule_trace_map(&m2, &trk, &trm, &q, |_, x| x.clone()).unwrap();
    let round = map.mul(&back);
    assert_eq!(round.rank(), 1);
}

#[test]
fn dual_basis_choice_does_not_matter() {
    let a = nh(2, 3);
    let alg = a.algebra();
    let tr = trace_space(alg);
    let p = LeftModule::regular(alg);
    // permuting the module basis changes the generators picked
    let dim = alg.dim();
    let perm: Vec<usize> = (0..dim).rev().collect();
    let mut inv = vec![0; dim];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    let relabel = |x: &Vector| -> Vector { x.iter().map(|(k, c)| (inv[*k], c.clone())).collect() };
    let unlabel = |x: &Vector| -> Vector { x.iter().map(|(k, c)| (perm[*k], c.clone())).collect() };
    let q = LeftModule {
        degrees: perm.iter().map(|&j| alg.degree(j)).collect(),
        action: (0..dim).map(|b| perm.iter().map(|&j| relabel(&p.action[b][j])).collect()).collect(),
    };
    let d1 = DualBasis::compute(alg, &p).unwrap();
    let d2 = DualBasis::compute(alg, &q).unwrap();
    assert_ne!(d1.gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>(), d2.gens.iter().map(|g| unlabel(&g.0)).collect::<Vec<_>>());
    for i in 0..dim {
        let x = alg.basis_vector(i);
        let t1 = d1.trace_of(&tr, |m| alg.mul(m, &x));
        let t2 = d2.trace_of(&tr, |m| relabel(&alg.mul(&unlabel(m), &x)));
        assert_eq!(t1, t2);
    }
}

#[test]
fn report_shape() {
    let r = report("NH_2^2", nh(2, 2).algebra()).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(json, r#"{"algebra":"NH_2^2","hh0_graded_dims":{"0":1},"center_graded_dims":{"0":1},"chern_rank":1}"#);
}

#[test]
fn free_traces() {
    let (d, q) = a1();
    let one = klr(&d, &q, &[1]);
    let t = FreeTrace::new(&one, 8);
    for deg in 0..=8 {
        assert_eq!(t.dim(deg), if deg % 2 == 0 { 1 } else { 0 });
    }
    let (d2, q2) = a2();
    let r = klr(&d2, &q2, &[1, 1]);
    let t = FreeTrace::new(&r, 6);
    // e(12) and e(21) are conjugate through the crossings only up to dots
    assert!(t.dim(0) >= 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn trace_is_functorial_under_induction(i in 0usize..12, j in 0usize..12) {
        let small = nh(2, 3);
        let big = nh(3, 3);
        let iota = induction_embedding(&small, &big, 0).unwrap();
        let a = small.algebra();
        let b = big.algebra();
        let (i, j) = (i % a.dim(), j % a.dim());
        let x = apply_columns(&iota, &a.basis_vector(i));
        let y = apply_columns(&iota, &a.basis_vector(j));
        let tr = trace_space(b);
        let mut c = b.mul(&x, &y);
        axpy(&mut c, &Q::int(-1), &b.mul(&y, &x));
        prop_assert!(tr.project(&c).is_empty());
    }
}
