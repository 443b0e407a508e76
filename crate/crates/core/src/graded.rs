//! Finite-dimensional graded algebras given by structure constants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, Matrix, SparseVec};
use crate::scalar::Q;

pub type Vector = SparseVec<usize, Q>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedAlgebra {
    labels: Vec<String>,
    degrees: Vec<i32>,
    /// table[i * dim + j] = b_i b_j
    table: Vec<Vector>,
    unit: Vector,
    idempotents: Vec<(String, Vector)>,
}

impl GradedAlgebra {
    /// Builds an algebra and checks that products respect the grading.
    pub fn new(labels: Vec<String>, degrees: Vec<i32>, table: Vec<Vector>, unit: Vector, idempotents: Vec<(String, Vector)>) -> Result<GradedAlgebra> {
        let dim = labels.len();
        if degrees.len() != dim || table.len() != dim * dim {
            return Err(Error::InvalidModule("structure constant table has the wrong shape".into()));
        }
        for i in 0..dim {
            for j in 0..dim {
                for &k in table[i * dim + j].keys() {
                    if k >= dim || degrees[k] != degrees[i] + degrees[j] {
                        return Err(Error::InvalidModule(format!("product {} * {} leaves its degree", labels[i], labels[j])));
                    }
                }
            }
        }
        Ok(GradedAlgebra { labels, degrees, table, unit, idempotents })
    }

    /// Full n×n matrix algebra with unit matrices E_ij in degree 0.
    pub fn matrix_algebra(n: usize) -> GradedAlgebra {
        let idx = |i: usize, j: usize| i * n + j;
        let dim = n * n;
        let mut table = vec![Vector::new(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[idx(i, j) * dim + idx(j, l)].insert(idx(i, l), Q::one());
                }
            }
        }
        let labels = (0..dim).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
        let unit: Vector = (0..n).map(|i| (idx(i, i), Q::one())).collect();
        let idem = (0..n).map(|i| (format!("E{}{}", i + 1, i + 1), [(idx(i, i), Q::one())].into_iter().collect())).collect();
        GradedAlgebra::new(labels, vec![0; dim], table, unit, idem).unwrap()
    }

    /// k[y]/(y^m) with deg y = 2.
    pub fn truncated_polynomial(m: usize) -> GradedAlgebra {
        let mut table = vec![Vector::new(); m * m];
        for i in 0..m {
            for j in 0..m {
                if i + j < m {
                    table[i * m + j].insert(i + j, Q::one());
                }
            }
        }
        let labels = (0..m).map(|i| format!("y^{}", i)).collect();
        let degrees = (0..m).map(|i| 2 * i as i32).collect();
        let unit: Vector = if m > 0 { [(0, Q::one())].into_iter().collect() } else { Vector::new() };
        let idem = vec![("1".to_string(), unit.clone())];
        GradedAlgebra::new(labels, degrees, table, unit, idem).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn idempotents(&self) -> &[(String, Vector)] {
        &self.idempotents
    }

    pub fn basis_mul(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        [(i, Q::one())].into_iter().collect()
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, x) in a {
            for (j, y) in b {
                let p = self.basis_mul(*i, *j);
                if !p.is_empty() {
                    axpy(&mut out, &(x * y), p);
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = self.mul(a, b);
        axpy(&mut out, &Q::int(-1), &self.mul(b, a));
        out
    }

    pub fn is_idempotent(&self, e: &Vector) -> bool {
        self.mul(e, e) == *e
    }

    /// Basis indices of degree d.
    pub fn piece(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// Checks associativity on all basis triples, or on every `stride`-th
    /// triple when the algebra is large.
    pub fn check_associativity(&self, exhaustive_limit: usize) -> bool {
        let dim = self.dim();
        let stride = if dim <= exhaustive_limit { 1 } else { dim / exhaustive_limit + 1 };
        for i in (0..dim).step_by(stride) {
            for j in 0..dim {
                let ij = self.basis_mul(i, j).clone();
                for k in (j % stride..dim).step_by(stride) {
                    let l = self.mul(&ij, &self.basis_vector(k));
                    let r = self.mul(&self.basis_vector(i), self.basis_mul(j, k));
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn check_unit(&self) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vector(i);
            self.mul(&self.unit, &b) == b && self.mul(&b, &self.unit) == b
        })
    }

    /// Matrix of left multiplication by a.
    pub fn left_matrix(&self, a: &Vector) -> Matrix<Q> {
        let dim = self.dim();
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim {
            for (i, c) in self.mul(a, &self.basis_vector(j)) {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn to_dense(&self, v: &Vector) -> Vec<Q> {
        let mut d = vec![Q::zero(); self.dim()];
        for (i, c) in v {
            d[*i] = c.clone();
        }
        d
    }

    pub fn from_dense(v: &[Q]) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v.iter().enumerate() {
            add_entry(&mut out, i, c.clone());
        }
        out
    }
}
