//! Independent model of the cyclotomic nilHecke algebra NH_n^m: the algebra
//! of operators generated by multiplication by x_k and divided differences on
//! Pol_n / (h_{m-n+1}, ..., h_m), where h_j is the complete symmetric
//! polynomial in x_1..x_n.

use std::collections::BTreeMap;

use klrtrace_core::linalg::{Echelon, Matrix};
use klrtrace_core::Q;

use super::polyrep::{monomials, Mono, Poly};

fn monos_of_degree(n: usize, d: u32) -> Vec<Mono> {
    monomials(n, d).into_iter().filter(|m| m.iter().sum::<u32>() == d).collect()
}

fn mul_mono(p: &Poly, m: &Mono) -> Poly {
    p.iter().map(|(k, c)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone())).collect()
}

fn complete(n: usize, j: u32) -> Poly {
    monos_of_degree(n, j).into_iter().map(|m| (m, Q::one())).collect()
}

pub struct QuotientModule {
    pub n: usize,
    /// basis monomials of the quotient
    pub basis: Vec<Mono>,
    ideal: BTreeMap<u32, Echelon<Mono, Q>>,
    top: u32,
}

impl QuotientModule {
    pub fn new(n: usize, m: usize) -> QuotientModule {
        assert!(n >= 1 && n <= m);
        let top = (n * (m - n) + n * (n - 1) / 2) as u32;
        let mut ideal = BTreeMap::new();
        let mut basis = Vec::new();
        for d in 0..=top + 1 {
            let mut ech = Echelon::new();
            for j in (m - n + 1) as u32..=m as u32 {
                if j > d {
                    continue;
                }
                let h = complete(n, j);
                for mono in monos_of_degree(n, d - j) {
                    ech.insert(mul_mono(&h, &mono));
                }
            }
            for mono in monos_of_degree(n, d) {
                if !ech.is_pivot(&mono) {
                    basis.push(mono);
                }
            }
            ideal.insert(d, ech);
        }
        assert!(basis.iter().all(|b| b.iter().sum::<u32>() <= top), "quotient must vanish above the top degree");
        QuotientModule { n, basis, ideal, top }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, p: &Poly) -> Vec<Q> {
        let mut by_deg: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in p {
            by_deg.entry(m.iter().sum()).or_default().insert(m.clone(), c.clone());
        }
        let mut out = vec![Q::zero(); self.basis.len()];
        for (d, q) in by_deg {
            if d > self.top {
                continue;
            }
            let r = self.ideal[&d].reduce(&q);
            for (m, c) in r {
                let i = self.basis.iter().position(|b| *b == m).expect("reduced monomial is a basis monomial");
                out[i] = c;
            }
        }
        out
    }

    fn operator(&self, f: impl Fn(&Poly) -> Poly) -> Matrix<Q> {
        let dim = self.dim();
        let mut mat = Matrix::zeros(dim, dim);
        for (j, b) in self.basis.iter().enumerate() {
            let mut p = Poly::new();
            p.insert(b.clone(), Q::one());
            for (i, c) in self.reduce(&f(&p)).into_iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        mat
    }

    pub fn generators(&self) -> Vec<Matrix<Q>> {
        let n = self.n;
        let mut gens = Vec::new();
        for k in 0..n {
            gens.push(self.operator(|p| {
                let mut e = vec![0; n];
                e[k] = 1;
                mul_mono(p, &e)
            }));
        }
        for k in 0..n - 1 {
            gens.push(self.operator(|p| divided_difference(p, k)));
        }
        gens
    }

    /// Dimension of the operator algebra generated by the x_k and ∂_k.
    pub fn operator_algebra_dim(&self) -> usize {
        let gens = self.generators();
        let dim = self.dim();
        let flat = |m: &Matrix<Q>| -> BTreeMap<usize, Q> { m.data.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect() };
        let mut ech: Echelon<usize, Q> = Echelon::new();
        let id = Matrix::identity(dim);
        ech.insert(flat(&id));
        let mut frontier = vec![id];
        while let Some(a) = frontier.pop() {
            for g in &gens {
                let b = g.mul(&a);
                if ech.insert(flat(&b)).is_some() {
                    frontier.push(b);
                }
            }
        }
        ech.rank()
    }
}

fn divided_difference(f: &Poly, k: usize) -> Poly {
    let mut out = Poly::new();
    let mut add = |m: Mono, c: Q| {
        let e = out.entry(m.clone()).or_insert_with(Q::zero);
        *e += &c;
        if e.is_zero() {
            out.remove(&m);
        }
    };
    for (m, c) in f {
        let (a, b) = (m[k], m[k + 1]);
        if a > b {
            for j in 0..a - b {
                let mut t = m.clone();
                t[k] = a - 1 - j;
                t[k + 1] = b + j;
                add(t, c.clone());
            }
        } else if a < b {
            for j in 0..b - a {
                let mut t = m.clone();
                t[k] = a + j;
                t[k + 1] = b - 1 - j;
                add(t, -c);
            }
        }
    }
    out
}

/// Coefficients of the Gaussian binomial [m choose n] in the variable q²,
/// keyed by q-degree.
pub fn gaussian_binomial_q2(m: usize, n: usize) -> BTreeMap<i32, usize> {
    // partitions in an n × (m - n) box, counted by size
    let cols = m - n;
    fn count(parts: usize, max_part: usize, size: usize, memo: &mut BTreeMap<(usize, usize, usize), usize>) -> usize {
        if size == 0 {
            return 1;
        }
        if parts == 0 || max_part == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&(parts, max_part, size)) {
            return v;
        }
        // largest part p, then the rest has ≤ parts-1 parts each ≤ p
        let mut total = 0;
        for p in 1..=max_part.min(size) {
            total += count(parts - 1, p, size - p, memo);
        }
        memo.insert((parts, max_part, size), total);
        total
    }
    let mut memo = BTreeMap::new();
    let mut out = BTreeMap::new();
    for s in 0..=n * cols {
        out.insert(2 * s as i32, count(n, cols, s, &mut memo));
    }
    out
}
