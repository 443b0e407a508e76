//! The current algebra U(g[t]) in idempotent form, studied through explicit
//! operator representations: relation checking, evaluation modules, tensor
//! products, shifts and Weyl-module oracles.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::scalar::{binomial, factorial, Q};

/// A generator x⁺_{i,r}, x⁻_{i,r} or ξ_{i,r}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Gen {
    Plus(usize, u32),
    Minus(usize, u32),
    Xi(usize, u32),
}

impl Gen {
    pub fn node(&self) -> usize {
        match *self {
            Gen::Plus(i, _) | Gen::Minus(i, _) | Gen::Xi(i, _) => i,
        }
    }

    pub fn param(&self) -> u32 {
        match *self {
            Gen::Plus(_, r) | Gen::Minus(_, r) | Gen::Xi(_, r) => r,
        }
    }

    fn with_param(&self, r: u32) -> Gen {
        match *self {
            Gen::Plus(i, _) => Gen::Plus(i, r),
            Gen::Minus(i, _) => Gen::Minus(i, r),
            Gen::Xi(i, _) => Gen::Xi(i, r),
        }
    }

    /// Weight change: ±α_i or 0.
    pub fn sign(&self) -> i64 {
        match self {
            Gen::Plus(..) => 1,
            Gen::Minus(..) => -1,
            Gen::Xi(..) => 0,
        }
    }

    pub fn degree(&self) -> i32 {
        2 * self.param() as i32
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Plus(i, r) => write!(f, "x+[{},{}]", i + 1, r),
            Gen::Minus(i, r) => write!(f, "x-[{},{}]", i + 1, r),
            Gen::Xi(i, r) => write!(f, "xi[{},{}]", i + 1, r),
        }
    }
}

/// A letter of a word; divided powers (x^±_{i,r})^{(n)} are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Gen(Gen),
    Divided(Gen, u32),
}

impl Letter {
    fn weight_steps(&self) -> (usize, i64) {
        match self {
            Letter::Gen(g) => (g.node(), g.sign()),
            Letter::Divided(g, n) => (g.node(), g.sign() * *n as i64),
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Letter::Gen(g) => g.degree(),
            Letter::Divided(g, n) => g.degree() * *n as i32,
        }
    }
}

/// x_1 ⋯ x_k 1_λ; letters act right to left.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentWord {
    pub source: Weight,
    pub letters: Vec<Letter>,
}

impl CurrentWord {
    pub fn idempotent(source: &Weight) -> CurrentWord {
        CurrentWord { source: source.clone(), letters: Vec::new() }
    }

    pub fn new(source: &Weight, letters: Vec<Letter>) -> CurrentWord {
        CurrentWord { source: source.clone(), letters }
    }

    pub fn target(&self, datum: &CartanDatum) -> Weight {
        let mut w = self.source.clone();
        for l in &self.letters {
            let (i, c) = l.weight_steps();
            w = w.shift_root(datum, i, c);
        }
        w
    }

    pub fn degree(&self) -> i32 {
        self.letters.iter().map(|l| l.degree()).sum()
    }

    /// self · other, defined only when other ends where self starts.
    pub fn compose(&self, other: &CurrentWord, datum: &CartanDatum) -> Result<CurrentWord> {
        if other.target(datum) != self.source {
            return Err(Error::ContextMismatch(format!("cannot compose: {} is not {}", other.target(datum).label(), self.source.label())));
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().copied());
        Ok(CurrentWord { source: other.source.clone(), letters })
    }

    /// The operator of the word restricted to the source weight space.
    pub fn act(&self, rep: &OperatorRep, v: &[Q]) -> Result<Vec<Q>> {
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() && rep.weights[k] != self.source {
                return Err(Error::ContextMismatch(format!("vector has a component outside weight {}", self.source.label())));
            }
        }
        let mut out = v.to_vec();
        for l in self.letters.iter().rev() {
            let m = match l {
                Letter::Gen(g) => rep.op(g)?.clone(),
                Letter::Divided(g, n) => rep.divided_power(g, *n)?,
            };
            out = m.apply(&out);
        }
        Ok(out)
    }
}

/// A finite-dimensional g-module given by Chevalley generators.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub weights: Vec<Weight>,
    pub e: Vec<Matrix<Q>>,
    pub f: Vec<Matrix<Q>>,
    pub h: Vec<Matrix<Q>>,
}

impl FiniteModule {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The irreducible sl₂-module of highest weight m.
    pub fn sl2_irrep(datum: &CartanDatum, m: u32) -> Result<FiniteModule> {
        if datum.rank() != 1 {
            return Err(Error::InvalidModule("sl2 irreducibles need a rank one datum".into()));
        }
        let n = m as usize + 1;
        let mut e = Matrix::zeros(n, n);
        let mut f = Matrix::zeros(n, n);
        let mut h = Matrix::zeros(n, n);
        let mut weights = Vec::new();
        for k in 0..n {
            let wt = m as i64 - 2 * k as i64;
            h.set(k, k, Q::int(wt));
            weights.push(datum.weight(vec![wt], vec![0]));
            if k + 1 < n {
                f.set(k + 1, k, Q::one());
                e.set(k, k + 1, Q::int((k as i64 + 1) * (m as i64 - k as i64)));
            }
        }
        let v = FiniteModule { weights, e: vec![e], f: vec![f], h: vec![h] };
        v.validate(datum)?;
        Ok(v)
    }

    /// Λ^k of the natural module of sl_{n+1}; k = 1 is the natural module.
    pub fn exterior_power(datum: &CartanDatum, k: usize) -> Result<FiniteModule> {
        let n = datum.rank();
        let subsets: Vec<Vec<usize>> = subsets(n + 1, k);
        let index: BTreeMap<&Vec<usize>, usize> = subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let d = subsets.len();
        let mut e = vec![Matrix::zeros(d, d); n];
        let mut f = vec![Matrix::zeros(d, d); n];
        let mut h = vec![Matrix::zeros(d, d); n];
        let mut weights = Vec::new();
        for (col, s) in subsets.iter().enumerate() {
            let mut pair = vec![0i64; n];
            for i in 0..n {
                pair[i] = s.contains(&i) as i64 - s.contains(&(i + 1)) as i64;
                h[i].set(col, col, Q::int(pair[i]));
                // E_{i,i+1} replaces i+1 by i; adjacent labels keep their order
                if s.contains(&(i + 1)) && !s.contains(&i) {
                    let t: Vec<usize> = s.iter().map(|&a| if a == i + 1 { i } else { a }).collect();
                    e[i].set(index[&t], col, Q::one());
                }
                if s.contains(&i) && !s.contains(&(i + 1)) {
                    let t: Vec<usize> = s.iter().map(|&a| if a == i { i + 1 } else { a }).collect();
                    f[i].set(index[&t], col, Q::one());
                }
            }
            weights.push(datum.weight(pair, vec![0; n]));
        }
        let v = FiniteModule { weights, e, f, h };
        v.validate(datum)?;
        Ok(v)
    }

    /// The fundamental module V(Λ_k) of sl_{n+1}, k = 1..n (0-based node k-1).
    pub fn fundamental(datum: &CartanDatum, node: usize) -> Result<FiniteModule> {
        FiniteModule::exterior_power(datum, node + 1)
    }

    pub fn tensor(&self, o: &FiniteModule) -> FiniteModule {
        let (a, b) = (Matrix::identity(self.dim()), Matrix::identity(o.dim()));
        let lift = |x: &Matrix<Q>, y: &Matrix<Q>| x.kron(&b).add(&a.kron(y));
        let mut weights = Vec::new();
        for w in &self.weights {
            for u in &o.weights {
                weights.push(w.plus(u));
            }
        }
        FiniteModule {
            weights,
            e: self.e.iter().zip(&o.e).map(|(x, y)| lift(x, y)).collect(),
            f: self.f.iter().zip(&o.f).map(|(x, y)| lift(x, y)).collect(),
            h: self.h.iter().zip(&o.h).map(|(x, y)| lift(x, y)).collect(),
        }
    }

    /// Chevalley and Serre relations, and h acting by the weights.
    pub fn validate(&self, datum: &CartanDatum) -> Result<()> {
        let n = datum.rank();
        let d = self.dim();
        let bad = |what: String| Err(Error::InvalidModule(what));
        if self.e.len() != n || self.f.len() != n || self.h.len() != n {
            return bad("one e, f, h per node is required".into());
        }
        for i in 0..n {
            for m in [&self.e[i], &self.f[i], &self.h[i]] {
                if m.rows != d || m.cols != d {
                    return bad(format!("operator for node {} has the wrong size", i + 1));
                }
            }
            for k in 0..d {
                for l in 0..d {
                    let want = if k == l { Q::int(self.weights[k].pairing(i)) } else { Q::zero() };
                    if *self.h[i].get(k, l) != want {
                        return bad(format!("h{} is not the weight operator", i + 1));
                    }
                }
            }
            for j in 0..n {
                let ef = self.e[i].commutator(&self.f[j]);
                let want = if i == j { self.h[i].clone() } else { Matrix::zeros(d, d) };
                if ef != want {
                    return bad(format!("[e{}, f{}] is wrong", i + 1, j + 1));
                }
                let a = Q::int(datum.a(i, j));
                if self.h[i].commutator(&self.e[j]) != self.e[j].scale(&a) || self.h[i].commutator(&self.f[j]) != self.f[j].scale(&-a) {
                    return bad(format!("h{} does not grade node {}", i + 1, j + 1));
                }
                if i != j {
                    let k = (1 - datum.a(i, j)) as usize;
                    for x in [&self.e, &self.f] {
                        let mut m = x[j].clone();
                        for _ in 0..k {
                            m = x[i].commutator(&m);
                        }
                        if !m.is_zero() {
                            return bad(format!("Serre relation fails for nodes {},{}", i + 1, j + 1));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            go(a + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Operators for every generator with parameter up to `max_param` on a
/// space whose basis vectors carry weights and, optionally, degrees.
#[derive(Clone, Debug)]
pub struct OperatorRep {
    pub datum: CartanDatum,
    pub weights: Vec<Weight>,
    pub degrees: Option<Vec<i32>>,
    pub max_param: u32,
    ops: BTreeMap<Gen, Matrix<Q>>,
}

impl OperatorRep {
    pub fn new(datum: &CartanDatum, weights: Vec<Weight>, degrees: Option<Vec<i32>>, max_param: u32, ops: BTreeMap<Gen, Matrix<Q>>) -> Result<OperatorRep> {
        let d = weights.len();
        for (g, m) in &ops {
            if m.rows != d || m.cols != d {
                return Err(Error::InvalidModule(format!("operator {} has the wrong size", g)));
            }
        }
        Ok(OperatorRep { datum: datum.clone(), weights, degrees, max_param, ops })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn op(&self, g: &Gen) -> Result<&Matrix<Q>> {
        self.ops.get(g).ok_or_else(|| Error::MissingOperator(format!("no operator for {}", g)))
    }

    pub fn ops(&self) -> &BTreeMap<Gen, Matrix<Q>> {
        &self.ops
    }

    /// x^n / n!.
    pub fn divided_power(&self, g: &Gen, n: u32) -> Result<Matrix<Q>> {
        let m = self.op(g)?;
        let mut p = Matrix::identity(self.dim());
        for _ in 0..n {
            p = p.mul(m);
        }
        Ok(p.scale(&factorial(n as u64).inv().expect("nonzero factorial")))
    }

    /// Dimensions of the weight spaces, keyed by pairing vector.
    pub fn weight_dims(&self) -> BTreeMap<Vec<i64>, usize> {
        let mut m = BTreeMap::new();
        for w in &self.weights {
            *m.entry(w.pairings().to_vec()).or_insert(0) += 1;
        }
        m
    }

    /// Basis indices of weight μ.
    pub fn weight_space(&self, mu: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weights[k] == *mu).collect()
    }

    pub fn to_data(&self) -> RepData {
        let ops = self
            .ops
            .iter()
            .map(|(g, m)| {
                let mut entries = Vec::new();
                for r in 0..m.rows {
                    for c in 0..m.cols {
                        let x = m.get(r, c);
                        if !x.is_zero() {
                            entries.push((r, c, x.clone()));
                        }
                    }
                }
                (g.to_string(), entries)
            })
            .collect();
        RepData { weights: self.weights.iter().map(|w| w.pairings().to_vec()).collect(), degrees: self.degrees.clone(), ops }
    }
}

/// Serializable form of a representation: weights, optional degrees and
/// sparse matrices with exact entries.
#[derive(Clone, Debug, Serialize)]
pub struct RepData {
    pub weights: Vec<Vec<i64>>,
    pub degrees: Option<Vec<i32>>,
    pub ops: BTreeMap<String, Vec<(usize, usize, Q)>>,
}

/// ev_χ pulled back along g[t] → g: the parameter-r generator acts as χ^r
/// times the underlying operator. Only exact scalar χ is supported.
pub fn evaluation_module(datum: &CartanDatum, chi: &Q, v: &FiniteModule, max_param: u32) -> Result<OperatorRep> {
    v.validate(datum)?;
    let mut ops = BTreeMap::new();
    for r in 0..=max_param {
        let c = chi.pow(r);
        for i in 0..datum.rank() {
            ops.insert(Gen::Plus(i, r), v.e[i].scale(&c));
            ops.insert(Gen::Minus(i, r), v.f[i].scale(&c));
            ops.insert(Gen::Xi(i, r), v.h[i].scale(&c));
        }
    }
    OperatorRep::new(datum, v.weights.clone(), None, max_param, ops)
}

/// Tensor product through the coproduct X ↦ X ⊗ 1 + 1 ⊗ X.
pub fn tensor(a: &OperatorRep, b: &OperatorRep) -> Result<OperatorRep> {
    let max_param = a.max_param.min(b.max_param);
    let (ia, ib) = (Matrix::identity(a.dim()), Matrix::identity(b.dim()));
    let mut ops = BTreeMap::new();
    for (g, m) in &a.ops {
        if g.param() > max_param {
            continue;
        }
        let n = b.op(g)?;
        ops.insert(*g, m.kron(&ib).add(&ia.kron(n)));
    }
    let mut weights = Vec::new();
    for w in &a.weights {
        for u in &b.weights {
            weights.push(w.plus(u));
        }
    }
    OperatorRep::new(&a.datum, weights, None, max_param, ops)
}

/// ⊗_k V_{χ_k}(V_k); the χ_k must be pairwise distinct.
pub fn tensor_evaluations(datum: &CartanDatum, factors: &[(FiniteModule, Q)], max_param: u32) -> Result<OperatorRep> {
    for (k, (_, x)) in factors.iter().enumerate() {
        if factors[..k].iter().any(|(_, y)| y == x) {
            return Err(Error::InvalidModule(format!("repeated evaluation parameter {}", x)));
        }
    }
    let mut ops = BTreeMap::new();
    for r in 0..=max_param {
        for i in 0..datum.rank() {
            for g in [Gen::Plus(i, r), Gen::Minus(i, r), Gen::Xi(i, r)] {
                ops.insert(g, Matrix::zeros(1, 1));
            }
        }
    }
    let mut acc = OperatorRep::new(datum, vec![datum.zero_weight()], None, max_param, ops)?;
    for (v, chi) in factors {
        acc = tensor(&acc, &evaluation_module(datum, chi, v, max_param)?)?;
    }
    Ok(acc)
}

/// The shift of a module by ξ: precomposition with t ↦ t + ξ, so the
/// parameter-m generator becomes Σ_k C(m,k) ξ^{m-k} (parameter k).
pub fn shift_rep(rep: &OperatorRep, xi: &Q) -> Result<OperatorRep> {
    let mut ops = BTreeMap::new();
    for g in rep.ops.keys() {
        let m = g.param();
        let mut acc = Matrix::zeros(rep.dim(), rep.dim());
        for k in 0..=m {
            let c = &binomial(m as u64, k as u64) * &xi.pow(m - k);
            if !c.is_zero() {
                acc = acc.add(&rep.op(&g.with_param(k))?.scale(&c));
            }
        }
        ops.insert(*g, acc);
    }
    OperatorRep::new(&rep.datum, rep.weights.clone(), None, rep.max_param, ops)
}

/// Span of the orbit of v under the lowering operators x⁻_{i,r}, r ≤ max_param.
pub fn lowering_orbit_dim(rep: &OperatorRep, v: &[Q]) -> Result<usize> {
    let mut ech: Echelon<usize, Q> = Echelon::new();
    let to_sparse = |x: &[Q]| -> SparseVec<usize, Q> { x.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect() };
    let mut queue = vec![v.to_vec()];
    ech.insert(to_sparse(v));
    while let Some(x) = queue.pop() {
        for i in 0..rep.datum.rank() {
            for r in 0..=rep.max_param {
                let y = rep.op(&Gen::Minus(i, r))?.apply(&x);
                let s = to_sparse(&y);
                if !s.is_empty() && !ech.contains(&s) {
                    ech.insert(s);
                    queue.push(y);
                }
            }
        }
    }
    Ok(ech.rank())
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylOracle {
    pub dim: usize,
    pub generated_dim: usize,
    pub weight_dims: BTreeMap<String, usize>,
    pub highest_vector_ok: bool,
}

/// ⊗_{k=1..m} V_{χ_k}(Λ) for sl₂ at χ_k = k - 1.
pub fn weyl_oracle_sl2(datum: &CartanDatum, m: u32) -> Result<(OperatorRep, WeylOracle)> {
    let chis: Vec<Q> = (0..m as i64).map(Q::int).collect();
    weyl_oracle_sl2_at(datum, &chis)
}

pub fn weyl_oracle_sl2_at(datum: &CartanDatum, chis: &[Q]) -> Result<(OperatorRep, WeylOracle)> {
    if chis.len() > 4 {
        return Err(Error::OutOfRange("the sl2 Weyl oracle is limited to four factors".into()));
    }
    let v = FiniteModule::sl2_irrep(datum, 1)?;
    let factors: Vec<(FiniteModule, Q)> = chis.iter().map(|c| (v.clone(), c.clone())).collect();
    weyl_oracle(datum, &factors)
}

/// The tensor product of evaluation modules at distinct points, with the
/// tensor of highest vectors checked against the local Weyl relations and
/// its lowering orbit.
pub fn weyl_oracle(datum: &CartanDatum, factors: &[(FiniteModule, Q)]) -> Result<(OperatorRep, WeylOracle)> {
    let max_param = factors.len().max(1) as u32;
    let rep = tensor_evaluations(datum, factors, max_param)?;
    // basis vector 0 is the tensor of the first basis vectors, the highest ones
    let mut hv = vec![Q::zero(); rep.dim()];
    hv[0] = Q::one();
    let lambda = rep.weights[0].clone();
    let mut ok = true;
    for i in 0..datum.rank() {
        for r in 0..=max_param {
            ok &= rep.op(&Gen::Plus(i, r))?.apply(&hv).iter().all(|x| x.is_zero());
        }
        ok &= rep.op(&Gen::Xi(i, 0))?.apply(&hv) == hv.iter().map(|x| x * &Q::int(lambda.pairing(i))).collect::<Vec<_>>();
    }
    let generated = lowering_orbit_dim(&rep, &hv)?;
    let weight_dims = rep.weight_dims().into_iter().map(|(k, c)| (format!("{:?}", k), c)).collect();
    let oracle = WeylOracle { dim: rep.dim(), generated_dim: generated, weight_dims, highest_vector_ok: ok };
    Ok((rep, oracle))
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResult {
    pub relation: String,
    pub instance: String,
    pub passed: bool,
    /// nonzero entries of the defect matrix on failure
    pub witness: Option<Vec<(usize, usize, Q)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub results: Vec<RelationResult>,
    /// (C3′) and (C2) passing on this representation, together with (C3)
    pub c3_prime_and_c2_imply_c3: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&RelationResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }

    pub fn passed_relation(&self, name: &str) -> bool {
        self.results.iter().filter(|r| r.relation == name).all(|r| r.passed)
    }

    pub fn count(&self, name: &str) -> usize {
        self.results.iter().filter(|r| r.relation == name).count()
    }
}

fn witness(m: &Matrix<Q>) -> Vec<(usize, usize, Q)> {
    let mut out = Vec::new();
    for r in 0..m.rows {
        for c in 0..m.cols {
            if !m.get(r, c).is_zero() {
                out.push((r, c, m.get(r, c).clone()));
            }
        }
    }
    out
}

/// Every relation instance with parameters ≤ R, plus weight and grading
/// bookkeeping. Needs operators up to parameter 2R.
pub fn relation_suite(rep: &OperatorRep, r_max: u32) -> Result<RelationReport> {
    let datum = &rep.datum;
    let n = datum.rank();
    let d = rep.dim();
    let need = 2 * r_max;
    for i in 0..n {
        for r in 0..=need {
            for g in [Gen::Plus(i, r), Gen::Minus(i, r), Gen::Xi(i, r)] {
                rep.op(&g)?;
            }
        }
    }
    let op = |g: Gen| rep.ops[&g].clone();
    let zero = Matrix::zeros(d, d);
    let mut results = Vec::new();
    let mut check = |relation: &str, instance: String, lhs: Matrix<Q>, rhs: Matrix<Q>| {
        let diff = lhs.sub(&rhs);
        let passed = diff.is_zero();
        results.push(RelationResult { relation: relation.into(), instance, passed, witness: if passed { None } else { Some(witness(&diff)) } });
    };
    let signed: [(i64, fn(usize, u32) -> Gen); 2] = [(1, Gen::Plus), (-1, Gen::Minus)];
    for i in 0..n {
        for j in 0..n {
            let a = datum.a(i, j);
            for r in 0..=r_max {
                for s in 0..=r_max {
                    check("C1", format!("i={} j={} r={} s={}", i + 1, j + 1, r, s), op(Gen::Xi(i, r)).commutator(&op(Gen::Xi(j, s))), zero.clone());
                }
            }
            for (sg, x) in signed {
                let name = if sg > 0 { "+" } else { "-" };
                for r in 0..=r_max {
                    check("C2", format!("{} i={} j={} r={}", name, i + 1, j + 1, r), op(Gen::Xi(i, 0)).commutator(&op(x(j, r))), op(x(j, r)).scale(&Q::int(sg * a)));
                }
                for r in 1..=r_max {
                    for s in 0..=r_max {
                        check("C3", format!("{} i={} j={} r={} s={}", name, i + 1, j + 1, r, s), op(Gen::Xi(i, r)).commutator(&op(x(j, s))), op(x(j, r + s)).scale(&Q::int(sg * a)));
                    }
                }
                for r in 0..r_max {
                    for s in 0..r_max {
                        check(
                            "C3'",
                            format!("{} i={} j={} r={} s={}", name, i + 1, j + 1, r, s),
                            op(Gen::Xi(i, r + 1)).commutator(&op(x(j, s))),
                            op(Gen::Xi(i, r)).commutator(&op(x(j, s + 1))),
                        );
                        check("C4", format!("{} i={} j={} r={} s={}", name, i + 1, j + 1, r, s), op(x(i, r + 1)).commutator(&op(x(j, s))), op(x(i, r)).commutator(&op(x(j, s + 1))));
                    }
                }
                if i != j && a == 0 {
                    for r in 0..=r_max {
                        for s in 0..=r_max {
                            check("C6a", format!("{} i={} j={} r={} s={}", name, i + 1, j + 1, r, s), op(x(i, r)).commutator(&op(x(j, s))), zero.clone());
                        }
                    }
                }
                if i != j && a == -1 {
                    for r1 in 0..=r_max {
                        for r2 in 0..=r_max {
                            for s in 0..=r_max {
                                let inner = op(x(i, r2)).commutator(&op(x(j, s)));
                                check("C6b", format!("{} i={} j={} r1={} r2={} s={}", name, i + 1, j + 1, r1, r2, s), op(x(i, r1)).commutator(&inner), zero.clone());
                            }
                        }
                    }
                }
            }
            for r in 0..=r_max {
                for s in 0..=r_max {
                    let rhs = if i == j { op(Gen::Xi(i, r + s)) } else { zero.clone() };
                    check("C5", format!("i={} j={} r={} s={}", i + 1, j + 1, r, s), op(Gen::Plus(i, r)).commutator(&op(Gen::Minus(j, s))), rhs);
                }
            }
        }
        // ξ_{i,0} is ⟨i,μ⟩ on the μ-space
        let mut diag = Matrix::zeros(d, d);
        for k in 0..d {
            diag.set(k, k, Q::int(rep.weights[k].pairing(i)));
        }
        check("weight", format!("xi[{},0]", i + 1), op(Gen::Xi(i, 0)), diag);
    }
    // generators move weights by ±α_i
    let mut weight_ok = Vec::new();
    for (g, m) in rep.ops.iter().filter(|(g, _)| g.param() <= need) {
        let mut ok = true;
        for r in 0..d {
            for c in 0..d {
                if !m.get(r, c).is_zero() && rep.weights[r] != rep.weights[c].shift_root(datum, g.node(), g.sign()) {
                    ok = false;
                }
            }
        }
        weight_ok.push((g.to_string(), ok));
    }
    for (g, ok) in weight_ok {
        results.push(RelationResult { relation: "weight".into(), instance: format!("{} moves weights", g), passed: ok, witness: None });
    }
    if let Some(deg) = &rep.degrees {
        for (g, ok) in grading_check(rep, deg, need) {
            results.push(RelationResult { relation: "grading".into(), instance: format!("{} is homogeneous", g), passed: ok, witness: None });
        }
    }
    let mut report = RelationReport { results, c3_prime_and_c2_imply_c3: false };
    report.c3_prime_and_c2_imply_c3 = !(report.passed_relation("C3'") && report.passed_relation("C2")) || report.passed_relation("C3");
    Ok(report)
}

/// Each generator with parameter r raises degree by 2r plus a shift that
/// depends only on the generator type, node and source weight.
fn grading_check(rep: &OperatorRep, deg: &[i32], need: u32) -> Vec<(String, bool)> {
    let mut shifts: BTreeMap<(i64, usize, Vec<i64>), i32> = BTreeMap::new();
    let mut out = Vec::new();
    for (g, m) in rep.ops.iter().filter(|(g, _)| g.param() <= need) {
        let mut ok = true;
        for c in 0..m.cols {
            for r in 0..m.rows {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let shift = deg[r] - deg[c] - g.degree();
                let key = (g.sign(), g.node(), rep.weights[c].pairings().to_vec());
                match shifts.get(&key) {
                    Some(&s) if s != shift => ok = false,
                    Some(_) => {}
                    None => {
                        shifts.insert(key, shift);
                    }
                }
            }
        }
        out.push((g.to_string(), ok));
    }
    out
}

/// Whether products f⁺ f⁰ f⁻ of length ≤ L span all words of length ≤ L
/// in the generators with parameter ≤ R, as operators.
pub fn triangular_span_check(rep: &OperatorRep, r_max: u32, len: usize) -> Result<bool> {
    let n = rep.datum.rank();
    let d = rep.dim();
    let flat = |m: &Matrix<Q>| -> SparseVec<usize, Q> { m.data.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect() };
    let gens = |f: fn(usize, u32) -> Gen| -> Vec<Matrix<Q>> {
        let mut v = Vec::new();
        for i in 0..n {
            for r in 0..=r_max {
                v.push(rep.ops[&f(i, r)].clone());
            }
        }
        v
    };
    for i in 0..n {
        for r in 0..=r_max {
            for g in [Gen::Plus(i, r), Gen::Minus(i, r), Gen::Xi(i, r)] {
                rep.op(&g)?;
            }
        }
    }
    let (plus, zero, minus) = (gens(Gen::Plus), gens(Gen::Xi), gens(Gen::Minus));
    let words = |alphabet: &[Matrix<Q>], max: usize| -> Vec<(usize, Matrix<Q>)> {
        let mut out = vec![(0, Matrix::identity(d))];
        let mut frontier = vec![Matrix::identity(d)];
        for l in 1..=max {
            let mut next = Vec::new();
            for w in &frontier {
                for g in alphabet {
                    next.push(w.mul(g));
                }
            }
            for w in &next {
                out.push((l, w.clone()));
            }
            frontier = next;
        }
        out
    };
    let mut span: Echelon<usize, Q> = Echelon::new();
    let wp = words(&plus, len);
    let w0 = words(&zero, len);
    let wm = words(&minus, len);
    for (lp, a) in &wp {
        for (l0, b) in &w0 {
            if lp + l0 > len {
                continue;
            }
            let ab = a.mul(b);
            for (lm, c) in &wm {
                if lp + l0 + lm > len {
                    continue;
                }
                let v = flat(&ab.mul(c));
                if !v.is_empty() {
                    span.insert(v);
                }
            }
        }
    }
    let all: Vec<Matrix<Q>> = plus.iter().chain(&zero).chain(&minus).cloned().collect();
    for (_, w) in words(&all, len) {
        if !span.contains(&flat(&w)) {
            return Ok(false);
        }
    }
    Ok(true)
}
