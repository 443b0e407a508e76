//! Self-checks of the normal form: overlap (critical pair) consistency,
//! the defining relations, and the basis count from generator closure.

use std::collections::BTreeMap;

use super::{Diagram, Gen, KlrAlgebra, Lin};
use crate::linalg::Echelon;
use crate::scalar::Q;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn gen_name(g: Gen) -> String {
    match g {
        Gen::Y(k) => format!("y{}", k + 1),
        Gen::Psi(k) => format!("psi{}", k + 1),
    }
}

fn gen_lin(alg: &KlrAlgebra, g: Gen, seq: &[u8]) -> Lin {
    let e = alg.idempotent(seq).unwrap().terms;
    alg.left_gen(g, &e)
}

impl KlrAlgebra {
    /// For every triple of generators and every idempotent, compares
    /// `(g1 g2) g3` with `g1 (g2 g3)` and with the generator-by-generator
    /// left action. Overlapping triples are exactly where rewriting orders
    /// can disagree.
    pub fn critical_pair_check(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        let gens = self.generators();
        for s in self.sequences() {
            for &g3 in &gens {
                let x3 = gen_lin(self, g3, s);
                if x3.is_empty() {
                    continue;
                }
                for &g2 in &gens {
                    let x23 = self.left_gen(g2, &x3);
                    for &g1 in &gens {
                        let via_left = self.left_gen(g1, &x23);
                        let mid = self.seq(self.target(x3.keys().next().unwrap())).to_vec();
                        let x2 = gen_lin(self, g2, &mid);
                        let mid2 = if x2.is_empty() { mid.clone() } else { self.seq(self.target(x2.keys().next().unwrap())).to_vec() };
                        let x1 = gen_lin(self, g1, &mid2);
                        let a = self.mul_lin(&self.mul_lin(&x1, &x2), &x3);
                        let b = self.mul_lin(&x1, &self.mul_lin(&x2, &x3));
                        rep.record(a == b && b == via_left, || format!("{} {} {} on {:?}", gen_name(g1), gen_name(g2), gen_name(g3), s));
                    }
                }
            }
        }
        rep
    }

    /// Checks each defining relation on every idempotent.
    pub fn relation_check(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        let n = self.strands();
        let word = |w: &[u8], s: &[u8]| -> Lin {
            let mut acc = self.idempotent(s).unwrap().terms;
            for &k in w.iter().rev() {
                acc = self.left_psi(k, &acc);
            }
            acc
        };
        let dot = |k: usize, x: &Lin| self.left_y(k as u8, x);
        for s in self.sequences() {
            let e = self.idempotent(s).unwrap().terms;
            // dots commute
            for k in 0..n {
                for l in 0..n {
                    rep.record(dot(k, &dot(l, &e)) == dot(l, &dot(k, &e)), || format!("y{} y{} on {:?}", k + 1, l + 1, s));
                }
            }
            for k in 0..n.saturating_sub(1) {
                let (a, b) = (s[k] as usize, s[k + 1] as usize);
                let p = word(&[k as u8], s);
                // quadratic relation
                let sq = word(&[k as u8, k as u8], s);
                let mut expect = Lin::new();
                if a != b {
                    if self.datum.a(a, b) == 0 {
                        super::lin_axpy(&mut expect, &self.scalars.t(a, b), &e);
                    } else {
                        super::lin_axpy(&mut expect, &self.scalars.t(a, b), &dot(k, &e));
                        super::lin_axpy(&mut expect, &self.scalars.t(b, a), &dot(k + 1, &e));
                    }
                }
                rep.record(sq == expect, || format!("psi{0} psi{0} on {1:?}", k + 1, s));
                // dot slides: ψ_k y_l vs y_{s_k(l)} ψ_k
                for l in 0..n {
                    let sl = if l == k {
                        k + 1
                    } else if l == k + 1 {
                        k
                    } else {
                        l
                    };
                    let lhs = self.left_psi(k as u8, &dot(l, &e));
                    let rhs = dot(sl, &p);
                    let mut diff = lhs.clone();
                    super::lin_axpy(&mut diff, &Q::int(-1), &rhs);
                    let mut expect = Lin::new();
                    if a == b && l == k {
                        expect = e.clone();
                    } else if a == b && l == k + 1 {
                        super::lin_axpy(&mut expect, &Q::int(-1), &e);
                    }
                    rep.record(diff == expect, || format!("psi{} y{} on {:?}", k + 1, l + 1, s));
                }
                // distant crossings commute
                for l in k + 2..n.saturating_sub(1) {
                    rep.record(word(&[k as u8, l as u8], s) == word(&[l as u8, k as u8], s), || format!("psi{} psi{} on {:?}", k + 1, l + 1, s));
                }
                // braid relation
                if k + 2 < n {
                    let k8 = k as u8;
                    let mut diff = word(&[k8, k8 + 1, k8], s);
                    super::lin_axpy(&mut diff, &Q::int(-1), &word(&[k8 + 1, k8, k8 + 1], s));
                    let mut expect = Lin::new();
                    let c = self.braid_coeff(k, s);
                    super::lin_axpy(&mut expect, &c, &e);
                    rep.record(diff == expect, || format!("braid at {} on {:?}", k + 1, s));
                }
            }
        }
        rep
    }

    /// Dimensions of the degree pieces spanned by products of generators,
    /// for degrees up to `dmax`. Products are accumulated by left
    /// multiplication starting from the idempotents; intermediate degrees
    /// are allowed to exceed `dmax` by the largest possible crossing drop.
    pub fn generated_dims(&self, dmax: i32) -> BTreeMap<i32, usize> {
        let n = self.strands() as i32;
        let ceiling = dmax + n * (n - 1);
        let mut spans: BTreeMap<i32, Echelon<Diagram, Q>> = BTreeMap::new();
        let mut frontier: Vec<(i32, Lin)> = Vec::new();
        for s in self.sequences() {
            let e = self.idempotent(s).unwrap().terms;
            if spans.entry(0).or_default().insert(e.clone()).is_some() {
                frontier.push((0, e));
            }
        }
        let gens = self.generators();
        while let Some((d, x)) = frontier.pop() {
            for &g in &gens {
                let y = self.left_gen(g, &x);
                let Some(first) = y.keys().next() else { continue };
                let dy = self.degree(first);
                if dy > ceiling {
                    continue;
                }
                debug_assert!(y.keys().all(|k| self.degree(k) == dy) && (dy - d).abs() <= 2);
                let ech = spans.entry(dy).or_default();
                let r = ech.reduce(&y);
                if !r.is_empty() {
                    ech.insert_reduced(r.clone());
                    frontier.push((dy, r));
                }
            }
        }
        let floor = self.floor_degree();
        (floor..=dmax).map(|d| (d, spans.get(&d).map(|e| e.rank()).unwrap_or(0))).collect()
    }

    pub fn enumerated_dims(&self, dmax: i32) -> BTreeMap<i32, usize> {
        (self.floor_degree()..=dmax).map(|d| (d, self.graded_piece(d).len())).collect()
    }
}
