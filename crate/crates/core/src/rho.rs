//! The trace representation: operators E_{i,r}, F_{i,r}, H_{i,r} on
//! ⊕_ν HH₀(R^λ_ν) and the comparison with the local Weyl module.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::current::{lowering_orbit_dim, relation_suite, weyl_oracle, FiniteModule, Gen, OperatorRep, RelationReport};
use crate::cyclo::{apply_columns, induction_embedding, CyclotomicFamily, CyclotomicQuotient};
use crate::error::{Error, Result};
use crate::graded::Vector;
use crate::hh0::{chern_classes, trace_space, DualBasis, FreeTrace, LeftModule, TraceSpace};
use crate::klr::{compositions, KlrAlgebra, Lin};
use crate::linalg::Matrix;
use crate::scalar::Q;

/// Strand count past which the window search gives up.
pub const MAX_STRANDS: u32 = 12;

/// One weight space of the trace module.
pub struct TraceBlock {
    pub nu: Vec<u32>,
    pub weight: Weight,
    pub quotient: Arc<CyclotomicQuotient>,
    pub trace: TraceSpace,
    pub offset: usize,
}

pub struct TraceRep {
    lambda: Weight,
    signed: bool,
    blocks: Vec<TraceBlock>,
    index: HashMap<Vec<u32>, usize>,
    rep: OperatorRep,
}

impl TraceRep {
    /// Builds the window of nonzero R^λ_ν and all operators with parameter
    /// up to `max_param`.
    pub fn build(family: &CyclotomicFamily, max_param: u32) -> Result<TraceRep> {
        let datum = family.datum().clone();
        let lambda = family.lambda().clone();
        let n = datum.rank();
        let mut nus = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([vec![0u32; n]]);
        seen.insert(vec![0u32; n]);
        while let Some(nu) = queue.pop_front() {
            if nu.iter().sum::<u32>() > MAX_STRANDS {
                return Err(Error::InconsistentWindow(format!("no vanishing weight space within {} strands", MAX_STRANDS)));
            }
            let q = family.get(&nu)?;
            if q.dim() == 0 {
                continue;
            }
            for i in 0..n {
                let mut next = nu.clone();
                next[i] += 1;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            nus.push((nu, q));
        }
        nus.sort_by(|a, b| (a.0.iter().sum::<u32>(), &a.0).cmp(&(b.0.iter().sum::<u32>(), &b.0)));

        let mut blocks = Vec::new();
        let mut index = HashMap::new();
        let mut offset = 0;
        for (nu, quotient) in nus {
            let root: Vec<i64> = nu.iter().map(|&c| -(c as i64)).collect();
            let weight = datum.weight(lambda.fund_coords().to_vec(), root);
            let trace = trace_space(quotient.algebra());
            index.insert(nu.clone(), blocks.len());
            let dim = trace.dim();
            blocks.push(TraceBlock { nu, weight, quotient, trace, offset });
            offset += dim;
        }
        let total = offset;

        let mut ops = BTreeMap::new();
        for i in 0..n {
            let mut f: Vec<Matrix<Q>> = (0..=max_param).map(|_| Matrix::zeros(total, total)).collect();
            let mut e = f.clone();
            for small in &blocks {
                let mut nu = small.nu.clone();
                nu[i] += 1;
                let Some(&k) = index.get(&nu) else { continue };
                let big = &blocks[k];
                let iota = induction_embedding(&small.quotient, &big.quotient, i)?;
                lower_blocks(small, big, i, &iota, &mut f)?;
                raise_blocks(small, big, i, &iota, &mut e)?;
            }
            for (r, (fr, er)) in f.into_iter().zip(e).enumerate() {
                ops.insert(Gen::Minus(i, r as u32), fr);
                ops.insert(Gen::Plus(i, r as u32), er);
            }
        }
        for i in 0..n {
            let f0 = ops[&Gen::Minus(i, 0)].clone();
            for r in 0..=max_param {
                let h = ops[&Gen::Plus(i, r)].commutator(&f0);
                ops.insert(Gen::Xi(i, r), h);
            }
        }

        let mut weights = Vec::with_capacity(total);
        let mut degrees = Vec::with_capacity(total);
        for b in &blocks {
            for k in 0..b.trace.dim() {
                weights.push(b.weight.clone());
                degrees.push(b.trace.degree(k));
            }
        }
        let rep = OperatorRep::new(&datum, weights, Some(degrees), max_param, ops)?;
        let signed = family.scalars().is_signed(&datum);
        Ok(TraceRep { lambda, signed, blocks, index, rep })
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    /// Whether the scalars satisfy v_ij = -1 on every edge. The current
    /// algebra relations between adjacent nodes are only expected then.
    pub fn signed(&self) -> bool {
        self.signed
    }

    pub fn blocks(&self) -> &[TraceBlock] {
        &self.blocks
    }

    pub fn block(&self, nu: &[u32]) -> Option<&TraceBlock> {
        self.index.get(nu).map(|&k| &self.blocks[k])
    }

    pub fn operators(&self) -> &OperatorRep {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// The class [1_λ] of the empty diagram.
    pub fn highest_class(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[0] = Q::one();
        v
    }
}

/// F_{i,r}: [a] ↦ [ι(a)·y_last^r].
fn lower_blocks(small: &TraceBlock, big: &TraceBlock, i: usize, iota: &[Vector], f: &mut [Matrix<Q>]) -> Result<()> {
    let alg = big.quotient.algebra();
    for (r, m) in f.iter_mut().enumerate() {
        let dot = big.quotient.appended_dot(i, r as u8);
        for t in 0..small.trace.dim() {
            let a = apply_columns(iota, &small.trace.lift(t));
            for (row, c) in big.trace.project(&alg.mul(&a, &dot)) {
                m.set(big.offset + row, small.offset + t, c);
            }
        }
    }
    Ok(())
}

/// E_{i,r}: the trace of p ↦ y_last^r·p·a on P = (1⊗e(i))·R^λ_{ν}, a left
/// module over R^λ_{ν-α_i} through ι.
fn raise_blocks(small: &TraceBlock, big: &TraceBlock, i: usize, iota: &[Vector], e: &mut [Matrix<Q>]) -> Result<()> {
    let alg = big.quotient.algebra();
    let corner = big.quotient.corner_idempotent(i);
    let mut basis = Vec::new();
    for j in 0..alg.dim() {
        let x = alg.basis_vector(j);
        let y = alg.mul(&corner, &x);
        if y == x {
            basis.push(j);
        } else if !y.is_empty() {
            return Err(Error::ContextMismatch("quotient basis is not compatible with the idempotents".into()));
        }
    }
    let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(u, &j)| (j, u)).collect();
    let to_p = |x: &Vector| -> Vector { x.iter().map(|(j, c)| (pos[j], c.clone())).collect() };
    let from_p = |x: &Vector| -> Vector { x.iter().map(|(u, c)| (basis[*u], c.clone())).collect() };
    let action = iota.iter().map(|b| basis.iter().map(|&j| to_p(&alg.mul(b, &alg.basis_vector(j)))).collect()).collect();
    let p = LeftModule { degrees: basis.iter().map(|&j| alg.degree(j)).collect(), action };
    let db = DualBasis::compute(small.quotient.algebra(), &p)?;
    db.verify(small.quotient.algebra(), &p)?;
    for (r, m) in e.iter_mut().enumerate() {
        let dot = big.quotient.appended_dot(i, r as u8);
        for t in 0..big.trace.dim() {
            let a = big.trace.lift(t);
            let img = db.trace_of(&small.trace, |x| to_p(&alg.mul(&alg.mul(&dot, &from_p(x)), &a)));
            for (row, c) in img {
                m.set(small.offset + row, big.offset + t, c);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightRow {
    pub nu: Vec<u32>,
    pub weight: Vec<i64>,
    pub trace_graded_dims: BTreeMap<String, usize>,
    pub trace_dim: usize,
    pub oracle_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationTally {
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceActionReport {
    pub lambda: Vec<i64>,
    pub signed_scalars: bool,
    pub total_dim: usize,
    pub oracle_dim: usize,
    pub generated_dim: usize,
    pub weights: Vec<WeightRow>,
    pub relations: BTreeMap<String, RelationTally>,
    pub highest_class_ok: bool,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// The tensor product of fundamental evaluation modules at 0, 1, 2, …
/// with highest weight λ.
pub fn weyl_factors(datum: &CartanDatum, lambda: &Weight) -> Result<Vec<(FiniteModule, Q)>> {
    let mut out = Vec::new();
    for i in 0..datum.rank() {
        let v = FiniteModule::fundamental(datum, i)?;
        for _ in 0..lambda.pairing(i) {
            let chi = Q::int(out.len() as i64);
            out.push((v.clone(), chi));
        }
    }
    Ok(out)
}

/// Relations with parameters ≤ `r_max`, local Weyl relations at [1_λ],
/// dimension against the Weyl oracle, and generation from [1_λ].
pub fn verify_trace_action(tr: &TraceRep, r_max: u32) -> Result<(TraceActionReport, RelationReport)> {
    let rep = tr.operators();
    let datum = &rep.datum;
    let suite = relation_suite(rep, r_max)?;
    let mut failures: Vec<String> = suite.failures().iter().map(|r| format!("{} {}", r.relation, r.instance)).collect();
    let mut relations: BTreeMap<String, RelationTally> = BTreeMap::new();
    for r in &suite.results {
        let t = relations.entry(r.relation.clone()).or_insert(RelationTally { instances: 0, failures: 0 });
        t.instances += 1;
        t.failures += usize::from(!r.passed);
    }

    let hv = tr.highest_class();
    let mut highest_ok = true;
    for i in 0..datum.rank() {
        for r in 0..=rep.max_param {
            if rep.op(&Gen::Plus(i, r))?.apply(&hv).iter().any(|x| !x.is_zero()) {
                highest_ok = false;
                failures.push(format!("E[{},{}] kills the highest class", i + 1, r));
            }
            let h = rep.op(&Gen::Xi(i, r))?.apply(&hv);
            let expect: Vec<Q> = if r == 0 { hv.iter().map(|x| x * &Q::int(tr.lambda.pairing(i))).collect() } else { vec![Q::zero(); hv.len()] };
            if h != expect {
                highest_ok = false;
                failures.push(format!("H[{},{}] on the highest class", i + 1, r));
            }
        }
    }

    let (oracle_rep, oracle) = weyl_oracle(datum, &weyl_factors(datum, &tr.lambda)?)?;
    let oracle_dims = oracle_rep.weight_dims();
    let mut weights = Vec::new();
    for b in &tr.blocks {
        let oracle_dim = oracle_dims.get(b.weight.pairings()).copied().unwrap_or(0);
        if oracle_dim != b.trace.dim() {
            failures.push(format!("weight {} has trace dim {} against {}", b.weight.label(), b.trace.dim(), oracle_dim));
        }
        weights.push(WeightRow {
            nu: b.nu.clone(),
            weight: b.weight.pairings().to_vec(),
            trace_graded_dims: b.trace.graded_dims().into_iter().map(|(d, c)| (d.to_string(), c)).collect(),
            trace_dim: b.trace.dim(),
            oracle_dim,
        });
    }
    for (w, c) in &oracle_dims {
        if !tr.blocks.iter().any(|b| b.weight.pairings() == w.as_slice()) {
            failures.push(format!("oracle weight {:?} (dim {}) missing from the window", w, c));
        }
    }
    if oracle.dim != tr.dim() {
        failures.push(format!("total dim {} against oracle {}", tr.dim(), oracle.dim));
    }
    let generated = lowering_orbit_dim(rep, &hv)?;
    if generated != tr.dim() {
        failures.push(format!("the highest class generates {} of {}", generated, tr.dim()));
    }
    let report = TraceActionReport {
        lambda: tr.lambda.fund_coords().to_vec(),
        signed_scalars: tr.signed,
        total_dim: tr.dim(),
        oracle_dim: oracle.dim,
        generated_dim: generated,
        weights,
        relations,
        highest_class_ok: highest_ok,
        passed: failures.is_empty(),
        failures,
    };
    Ok((report, suite))
}

/// 1_ν ⊗ y^{δ+r}ψ_{w0}: the divided power idempotent with r extra dots on
/// each of the last n strands of colour i.
fn divided_tail(klr: &KlrAlgebra, i: u8, n: usize, r: u8) -> Result<Lin> {
    let total = klr.strands();
    let m = total - n;
    let mut images: Vec<u8> = (0..m as u8).collect();
    images.extend((m..total).rev().map(|k| k as u8));
    let w0 = klr.perms().id_of(&images).ok_or_else(|| Error::OutOfRange("permutation".into()))?;
    let word = klr.perms().canonical_word(w0).to_vec();
    let mut out = Lin::new();
    for seq in klr.sequences() {
        if seq[m..].iter().any(|&c| c != i) {
            continue;
        }
        let mut dots = vec![0u8; total];
        for k in 0..n {
            dots[m + k] = (n - 1 - k) as u8 + r;
        }
        let y = klr.from_word(&[], &dots, seq)?;
        let psi = klr.from_word(&word, &vec![0; total], seq)?;
        for (d, c) in klr.multiply(&y, &psi)?.into_terms() {
            crate::linalg::add_entry(&mut out, d, c);
        }
    }
    Ok(out)
}

/// Checks (F_{i,r})ⁿ = n!·F_{i,r}^{(n)} on every weight space, where the
/// divided power multiplies ιⁿ(a) by the dotted nilHecke idempotent on the
/// last n strands.
pub fn divided_power_check(tr: &TraceRep, i: usize, r: u32, n: usize) -> Result<bool> {
    let rep = tr.operators();
    let f = rep.op(&Gen::Minus(i, r))?;
    let mut power = Matrix::identity(tr.dim());
    for _ in 0..n {
        power = f.mul(&power);
    }
    let mut divided = Matrix::zeros(tr.dim(), tr.dim());
    for small in &tr.blocks {
        let mut chain = vec![small];
        let mut nu = small.nu.clone();
        for _ in 0..n {
            nu[i] += 1;
            match tr.block(&nu) {
                Some(b) => chain.push(b),
                None => break,
            }
        }
        if chain.len() != n + 1 {
            continue;
        }
        let big = chain[n];
        let tail = big.quotient.reduce(&divided_tail(big.quotient.klr(), i as u8, n, r as u8)?);
        for t in 0..small.trace.dim() {
            let mut a = small.trace.lift(t);
            for w in chain.windows(2) {
                a = apply_columns(&induction_embedding(&w[0].quotient, &w[1].quotient, i)?, &a);
            }
            for (row, c) in big.trace.project(&big.quotient.algebra().mul(&a, &tail)) {
                divided.set(big.offset + row, small.offset + t, c);
            }
        }
    }
    let mut fact = Q::one();
    for k in 2..=n as i64 {
        fact = &fact * &Q::int(k);
    }
    Ok(power == divided.scale(&fact))
}

/// Ranks of the Chern classes of the idempotents e(i) per weight space,
/// with the trace dimension.
pub fn chern_ranks(tr: &TraceRep) -> Result<Vec<(Vec<u32>, usize, usize)>> {
    let mut out = Vec::new();
    for b in &tr.blocks {
        let alg = b.quotient.algebra();
        let idem: Vec<Vector> = alg.idempotents().iter().map(|(_, e)| e.clone()).collect();
        let ch = chern_classes(alg, &b.trace, &idem)?;
        out.push((b.nu.clone(), ch.rank, b.trace.dim()));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub nu: Vec<u32>,
    /// degree ↦ (dim HH₀ piece, rank of dotted idempotent classes)
    pub degrees: BTreeMap<i32, (usize, usize)>,
    pub idempotent_classes_rank: usize,
    pub passed: bool,
}

/// Whether the classes [y^a e(i)] span each graded piece of HH₀(R_ν) up to
/// degree `dmax`, and whether the idempotent classes are a basis in
/// degree 0.
pub fn span_check_free(klr: &KlrAlgebra, dmax: i32) -> SpanReport {
    let tr = FreeTrace::new(klr, dmax);
    let id = klr.perms().identity();
    let n = klr.strands();
    let mut degrees = BTreeMap::new();
    let mut passed = true;
    for d in klr.floor_degree()..=dmax {
        let mut dotted = Vec::new();
        if d >= 0 && d % 2 == 0 {
            for s in 0..klr.sequences().len() {
                for a in compositions((d / 2) as u32, n) {
                    dotted.push([(klr.diagram(id, s as u32, &a), Q::one())].into_iter().collect::<Lin>());
                }
            }
        }
        let dim = tr.dim(d);
        let rank = tr.class_rank(d, &dotted);
        passed &= dim == rank;
        degrees.insert(d, (dim, rank));
    }
    let idem: Vec<Lin> = klr.sequences().iter().map(|s| klr.idempotent(s).unwrap().into_terms()).collect();
    let idempotent_classes_rank = tr.class_rank(0, &idem);
    passed &= idempotent_classes_rank == tr.dim(0);
    SpanReport { nu: klr.nu().to_vec(), degrees, idempotent_classes_rank, passed }
}
