#![allow(dead_code)]

pub mod polyrep;
pub mod nilhecke;
pub mod symeval;

use std::collections::BTreeMap;

use klrtrace_core::cartan::{default_scalars, CartanDatum, ScalarChoice};
use klrtrace_core::current::{tensor_evaluations, FiniteModule, Gen};
use klrtrace_core::klr::KlrAlgebra;
use klrtrace_core::linalg::{Echelon, SparseVec};
use klrtrace_core::Q;

pub fn a1() -> (CartanDatum, ScalarChoice) {
    let d = CartanDatum::type_a(1);
    let q = default_scalars(&d);
    (d, q)
}

pub fn a2() -> (CartanDatum, ScalarChoice) {
    let d = CartanDatum::type_a(2);
    let q = default_scalars(&d);
    (d, q)
}

pub fn klr(d: &CartanDatum, q: &ScalarChoice, nu: &[u32]) -> KlrAlgebra {
    KlrAlgebra::new(d, q, nu).unwrap()
}

/// Weight multiplicities of the irreducible g-module: the orbit of the
/// highest vector of a tensor product under the x⁻_{i,0}.
pub fn irreducible_weight_dims(d: &CartanDatum, lambda: &[i64]) -> BTreeMap<Vec<i64>, usize> {
    let mut factors = Vec::new();
    for (i, &m) in lambda.iter().enumerate() {
        for _ in 0..m {
            factors.push((FiniteModule::fundamental(d, i).unwrap(), Q::int(factors.len() as i64)));
        }
    }
    let rep = tensor_evaluations(d, &factors, 0).unwrap();
    let mut span: Echelon<usize, Q> = Echelon::new();
    let mut hv = vec![Q::zero(); rep.dim()];
    hv[0] = Q::one();
    let sparse = |x: &[Q]| -> SparseVec<usize, Q> { x.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect() };
    let mut queue = vec![hv.clone()];
    let mut found = vec![hv];
    span.insert(sparse(&found[0]));
    while let Some(x) = queue.pop() {
        for i in 0..d.rank() {
            let y = rep.op(&Gen::Minus(i, 0)).unwrap().apply(&x);
            if span.insert(sparse(&y)).is_some() {
                queue.push(y.clone());
                found.push(y);
            }
        }
    }
    // the orbit vectors found this way are weight vectors
    let mut dims = BTreeMap::new();
    for v in &found {
        let k = v.iter().position(|c| !c.is_zero()).unwrap();
        *dims.entry(rep.weights[k].pairings().to_vec()).or_insert(0) += 1;
    }
    dims
}
