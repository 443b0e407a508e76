//! The polynomial representation of R(ν) on ⊕_i k[x_1..x_n] e(i).
//!
//! Same colours: ψ_k acts by the divided difference (f - s_k f)/(x_k - x_{k+1}).
//! Different colours a = i_k, b = i_{k+1}: ψ_k (f e(i)) = P_ab(x_k, x_{k+1}) s_k f e(s_k i)
//! with P_ab = 1 when a < b and P_ab(u, v) = t_ba u + t_ab v (or the constant
//! t_ab for non-adjacent nodes) when a > b. This is faithful, so two elements
//! agree iff their actions agree.

use std::collections::BTreeMap;

use klrtrace_core::klr::{Diagram, Element, KlrAlgebra};
use klrtrace_core::Q;

pub type Mono = Vec<u32>;
pub type Poly = BTreeMap<Mono, Q>;

fn add(p: &mut Poly, m: Mono, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = p.entry(m.clone()).or_insert_with(Q::zero);
    *e += &c;
    if e.is_zero() {
        p.remove(&m);
    }
}

fn swap(f: &Poly, k: usize) -> Poly {
    let mut out = Poly::new();
    for (m, c) in f {
        let mut m = m.clone();
        m.swap(k, k + 1);
        add(&mut out, m, c.clone());
    }
    out
}

fn times_var(f: &Poly, k: usize, c: &Q) -> Poly {
    let mut out = Poly::new();
    for (m, x) in f {
        let mut m = m.clone();
        m[k] += 1;
        add(&mut out, m, x * c);
    }
    out
}

fn divided_difference(f: &Poly, k: usize) -> Poly {
    let mut out = Poly::new();
    for (m, c) in f {
        let (a, b) = (m[k], m[k + 1]);
        if a > b {
            for j in 0..a - b {
                let mut t = m.clone();
                t[k] = a - 1 - j;
                t[k + 1] = b + j;
                add(&mut out, t, c.clone());
            }
        } else if a < b {
            for j in 0..b - a {
                let mut t = m.clone();
                t[k] = a + j;
                t[k + 1] = b - 1 - j;
                add(&mut out, t, -c);
            }
        }
    }
    out
}

/// ψ_k on f e(seq); returns the new sequence.
pub fn act_psi(alg: &KlrAlgebra, k: usize, f: &Poly, seq: &[u8]) -> (Poly, Vec<u8>) {
    let (a, b) = (seq[k] as usize, seq[k + 1] as usize);
    let mut t = seq.to_vec();
    t.swap(k, k + 1);
    if a == b {
        return (divided_difference(f, k), t);
    }
    let g = swap(f, k);
    if a < b {
        return (g, t);
    }
    let (d, q) = (alg.datum(), alg.scalars());
    if d.a(a, b) == 0 {
        let mut out = Poly::new();
        for (m, c) in &g {
            add(&mut out, m.clone(), c * &q.t(a, b));
        }
        return (out, t);
    }
    let mut out = times_var(&g, k, &q.t(b, a));
    for (m, c) in times_var(&g, k + 1, &q.t(a, b)) {
        add(&mut out, m, c);
    }
    (out, t)
}

/// Action of a basis diagram on f e(seq); zero unless seq is its source.
pub fn act_diagram(alg: &KlrAlgebra, d: &Diagram, f: &Poly, seq: &[u8]) -> Option<(Poly, Vec<u8>)> {
    if alg.seq(d.src()) != seq {
        return None;
    }
    let mut g = f.clone();
    for (k, &a) in d.dots().iter().enumerate() {
        for _ in 0..a {
            g = times_var(&g, k, &Q::one());
        }
    }
    let mut s = seq.to_vec();
    for &k in alg.perms().canonical_word(d.perm()).iter().rev() {
        let (h, t) = act_psi(alg, k as usize, &g, &s);
        g = h;
        s = t;
    }
    Some((g, s))
}

pub type Vector = BTreeMap<Vec<u8>, Poly>;

pub fn act_element(alg: &KlrAlgebra, x: &Element, f: &Poly, seq: &[u8]) -> Vector {
    let mut out = Vector::new();
    for (d, c) in x.terms() {
        if let Some((g, t)) = act_diagram(alg, d, f, seq) {
            let slot = out.entry(t).or_default();
            for (m, x) in g {
                add(slot, m, &x * c);
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// Monomials of total degree at most `deg` in n variables.
pub fn monomials(n: usize, deg: u32) -> Vec<Mono> {
    fn rec(n: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

pub fn mono_poly(m: &Mono) -> Poly {
    let mut p = Poly::new();
    p.insert(m.clone(), Q::one());
    p
}

/// Compares the actions of x and y on all monomials of degree ≤ deg in every
/// idempotent summand.
pub fn same_action(alg: &KlrAlgebra, x: &Element, y: &Element, deg: u32) -> bool {
    for s in alg.sequences() {
        for m in monomials(alg.strands(), deg) {
            let f = mono_poly(&m);
            if act_element(alg, x, &f, s) != act_element(alg, y, &f, s) {
                return false;
            }
        }
    }
    true
}

/// Action of `x ∘ y` computed by applying y then x.
pub fn composite_action(alg: &KlrAlgebra, x: &Element, y: &Element, f: &Poly, seq: &[u8]) -> Vector {
    let mut out = Vector::new();
    for (t, g) in act_element(alg, y, f, seq) {
        for (t2, h) in act_element(alg, x, &g, &t) {
            let slot = out.entry(t2).or_default();
            for (m, c) in h {
                add(slot, m, c);
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// Rank of the span of the actions of the given diagrams on monomials of
/// degree ≤ deg, flattened into coordinate vectors.
pub fn action_rank(alg: &KlrAlgebra, ds: &[Diagram], deg: u32) -> usize {
    use klrtrace_core::linalg::Echelon;
    let mut ech: Echelon<(usize, Vec<u8>, Vec<u8>, Mono), Q> = Echelon::new();
    let inputs: Vec<(Vec<u8>, Mono)> =
        alg.sequences().iter().flat_map(|s| monomials(alg.strands(), deg).into_iter().map(move |m| (s.clone(), m))).collect();
    for d in ds {
        let mut v = BTreeMap::new();
        for (idx, (s, m)) in inputs.iter().enumerate() {
            if let Some((g, t)) = act_diagram(alg, d, &mono_poly(m), s) {
                for (mm, c) in g {
                    v.insert((idx, s.clone(), t.clone(), mm), c);
                }
            }
        }
        ech.insert(v);
    }
    ech.rank()
}
