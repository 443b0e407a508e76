//! Evaluates symmetric functions at explicit points, independently of the
//! library's basis changes.

use klrtrace_core::symfunc::Partition;
use klrtrace_core::Q;

/// m_μ(x): sum over distinct rearrangements of μ padded with zeros.
pub fn eval_m(mu: &Partition, x: &[Q]) -> Q {
    let mut exps: Vec<u32> = mu.parts().to_vec();
    if exps.len() > x.len() {
        return Q::zero();
    }
    exps.resize(x.len(), 0);
    exps.sort();
    let mut total = Q::zero();
    loop {
        let mut term = Q::one();
        for (xi, &e) in x.iter().zip(&exps) {
            term = &term * &xi.pow(e);
        }
        total += &term;
        if !next_permutation(&mut exps) {
            break;
        }
    }
    total
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn eval_h(r: u32, x: &[Q]) -> Q {
    // h_r(x_1..x_n) = Σ_k x_n^k h_{r-k}(x_1..x_{n-1})
    let mut h = vec![Q::zero(); r as usize + 1];
    h[0] = Q::one();
    for xi in x {
        for d in 1..=r as usize {
            let prev = h[d - 1].clone();
            h[d] += &(xi * &prev);
        }
    }
    h[r as usize].clone()
}

pub fn eval_e(r: u32, x: &[Q]) -> Q {
    let mut e = vec![Q::zero(); r as usize + 1];
    e[0] = Q::one();
    for xi in x {
        for d in (1..=r as usize).rev() {
            let prev = e[d - 1].clone();
            e[d] += &(xi * &prev);
        }
    }
    e[r as usize].clone()
}

pub fn eval_p(r: u32, x: &[Q]) -> Q {
    let mut t = Q::zero();
    for xi in x {
        t += &xi.pow(r);
    }
    t
}

/// Test points: enough variables to separate symmetric functions of
/// degree ≤ n.
pub fn points(n: usize) -> Vec<Vec<Q>> {
    (0..3)
        .map(|s| (0..n).map(|k| Q::new(((k * 7 + s * 3) % 11) as i64 - 4, (k % 3 + 1) as i64 + s as i64)).collect())
        .collect()
}
