//! Zeroth Hochschild homology A/[A,A], the center, Chern classes of
//! idempotents, and trace maps induced by projective bimodules.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{GradedAlgebra, Vector};
use crate::klr::{Diagram, KlrAlgebra, Lin};
use crate::linalg::{add_entry, axpy, kernel_of_columns, solve_sparse, Echelon, Matrix, SparseVec};
use crate::scalar::Q;

/// A/[A,A] with a basis of representative basis elements.
#[derive(Clone, Debug)]
pub struct TraceSpace {
    commutators: Echelon<usize, Q>,
    reps: Vec<usize>,
    degrees: Vec<i32>,
    rep_index: HashMap<usize, usize>,
}

impl TraceSpace {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Algebra basis indices whose classes form the trace basis.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn degree(&self, k: usize) -> i32 {
        self.degrees[k]
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// Coordinates of the class [v].
    pub fn project(&self, v: &Vector) -> Vector {
        let r = self.commutators.reduce(v);
        r.into_iter().map(|(i, c)| (self.rep_index[&i], c)).collect()
    }

    /// The algebra element representing trace basis vector k.
    pub fn lift(&self, k: usize) -> Vector {
        [(self.reps[k], Q::one())].into_iter().collect()
    }
}

/// Trace space from commutators of basis pairs.
pub fn trace_space(a: &GradedAlgebra) -> TraceSpace {
    let dim = a.dim();
    let mut ech = Echelon::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut c = a.basis_mul(i, j).clone();
            axpy(&mut c, &Q::int(-1), a.basis_mul(j, i));
            if !c.is_empty() {
                ech.insert(c);
            }
        }
    }
    let reps: Vec<usize> = (0..dim).filter(|i| !ech.is_pivot(i)).collect();
    let degrees = reps.iter().map(|&i| a.degree(i)).collect();
    let rep_index = reps.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    TraceSpace { commutators: ech, reps, degrees, rep_index }
}

/// Z(A) with a homogeneous basis.
#[derive(Clone, Debug)]
pub struct CenterSpace {
    pub basis: Vec<Vector>,
    pub degrees: Vec<i32>,
}

impl CenterSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }
}

pub fn center_space(a: &GradedAlgebra) -> CenterSpace {
    let dim = a.dim();
    let mut by_deg: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        by_deg.entry(a.degree(i)).or_default().push(i);
    }
    let mut basis = Vec::new();
    let mut degrees = Vec::new();
    for (d, idx) in by_deg {
        let cols: Vec<SparseVec<(usize, usize), Q>> = idx
            .iter()
            .map(|&i| {
                let mut col = SparseVec::new();
                for j in 0..dim {
                    let mut c = a.basis_mul(i, j).clone();
                    axpy(&mut c, &Q::int(-1), a.basis_mul(j, i));
                    for (k, x) in c {
                        col.insert((j, k), x);
                    }
                }
                col
            })
            .collect();
        for kv in kernel_of_columns(&cols) {
            basis.push(kv.into_iter().map(|(t, x)| (idx[t], x)).collect());
            degrees.push(d);
        }
    }
    CenterSpace { basis, degrees }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernReport {
    /// trace coordinates of each class, as (index, value) pairs
    pub classes: Vec<Vec<(usize, Q)>>,
    pub rank: usize,
    /// dim eAe/rad(eAe) for each idempotent; 1 for primitive idempotents
    /// over a split field
    pub semisimple_dims: Vec<usize>,
}

/// Classes [e] of the given idempotents and their rank.
pub fn chern_classes(a: &GradedAlgebra, tr: &TraceSpace, idempotents: &[Vector]) -> Result<ChernReport> {
    let mut classes = Vec::new();
    let mut ech: Echelon<usize, Q> = Echelon::new();
    let mut semisimple = Vec::new();
    for (n, e) in idempotents.iter().enumerate() {
        if !a.is_idempotent(e) {
            return Err(Error::NotIdempotent(format!("input {} is not idempotent", n)));
        }
        let c = tr.project(e);
        ech.insert(c.clone());
        classes.push(c.into_iter().collect());
        semisimple.push(semisimple_quotient_dim(a, e));
    }
    Ok(ChernReport { classes, rank: ech.rank(), semisimple_dims: semisimple })
}

/// dim eAe / J(eAe), computed as the rank of the trace form
/// (x, y) ↦ tr(L_{xy}) of the regular representation of eAe.
pub fn semisimple_quotient_dim(a: &GradedAlgebra, e: &Vector) -> usize {
    // basis of eAe
    let mut ech: Echelon<usize, Q> = Echelon::new();
    let mut basis: Vec<Vector> = Vec::new();
    for i in 0..a.dim() {
        let v = a.mul(&a.mul(e, &a.basis_vector(i)), e);
        if !v.is_empty() && ech.insert(v.clone()).is_some() {
            basis.push(v);
        }
    }
    let n = basis.len();
    if n == 0 {
        return 0;
    }
    // coordinates in `basis`: invert the square submatrix on the pivot keys
    let keys: Vec<usize> = ech.pivots().copied().collect();
    let mut sub = Matrix::zeros(n, n);
    for (j, v) in basis.iter().enumerate() {
        for (r, k) in keys.iter().enumerate() {
            if let Some(x) = v.get(k) {
                sub.set(r, j, x.clone());
            }
        }
    }
    let inv = invert(&sub).expect("pivot submatrix is invertible");
    let coords = |v: &Vector| -> Vec<Q> {
        let restricted: Vec<Q> = keys.iter().map(|k| v.get(k).cloned().unwrap_or_else(Q::zero)).collect();
        inv.apply(&restricted)
    };
    // tr(L_z) is linear in z
    let traces: Vec<Q> = basis
        .iter()
        .map(|z| {
            let mut t = Q::zero();
            for (j, b) in basis.iter().enumerate() {
                t += &coords(&a.mul(z, b))[j];
            }
            t
        })
        .collect();
    let mut form = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = coords(&a.mul(&basis[i], &basis[j]));
            let mut t = Q::zero();
            for (x, y) in c.iter().zip(&traces) {
                if !x.is_zero() {
                    t += &(x * y);
                }
            }
            form.set(i, j, t);
        }
    }
    form.rank()
}

fn invert(m: &Matrix<Q>) -> Option<Matrix<Q>> {
    let n = m.rows;
    let cols = m.sparse_columns();
    let mut rows: Vec<SparseVec<usize, Q>> = vec![SparseVec::new(); n];
    for (j, c) in cols.iter().enumerate() {
        for (r, x) in c {
            rows[*r].insert(j, x.clone());
        }
    }
    let mut inv = Matrix::zeros(n, n);
    for u in 0..n {
        let eqs: Vec<(SparseVec<usize, Q>, Q)> = rows.iter().enumerate().map(|(r, row)| (row.clone(), if r == u { Q::one() } else { Q::zero() })).collect();
        let x = solve_sparse(&eqs, n)?;
        for (j, c) in x.into_iter().enumerate() {
            inv.set(j, u, c);
        }
    }
    Some(inv)
}

/// A finite-dimensional left module over a graded algebra B, given by the
/// action of each basis element of B on a homogeneous basis.
#[derive(Clone, Debug)]
pub struct LeftModule {
    pub degrees: Vec<i32>,
    /// action[b][u] = b_b · m_u
    pub action: Vec<Vec<Vector>>,
}

impl LeftModule {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn act(&self, b: &Vector, m: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, x) in b {
            for (u, y) in m {
                axpy(&mut out, &(x * y), &self.action[*i][*u]);
            }
        }
        out
    }

    /// A as a left module over itself.
    pub fn regular(a: &GradedAlgebra) -> LeftModule {
        let action = (0..a.dim()).map(|i| (0..a.dim()).map(|j| a.basis_mul(i, j).clone()).collect()).collect();
        LeftModule { degrees: a.degrees().to_vec(), action }
    }
}

/// Dual basis {p_k, f_k} of a finitely generated projective left module,
/// with homogeneous p_k = e_k p_k.
#[derive(Clone, Debug)]
pub struct DualBasis {
    /// generators with the index of their idempotent in `B.idempotents()`
    pub gens: Vec<(Vector, usize)>,
    /// sigma[u][k] = f_k(m_u) ∈ B e_k
    sigma: Vec<Vec<Vector>>,
}

impl DualBasis {
    pub fn compute(b: &GradedAlgebra, p: &LeftModule) -> Result<DualBasis> {
        let idem = b.idempotents();
        // greedy homogeneous generators
        let mut order: Vec<usize> = (0..p.dim()).collect();
        order.sort_by_key(|&u| (p.degrees[u], u));
        let mut span: Echelon<usize, Q> = Echelon::new();
        let mut gens: Vec<(Vector, usize)> = Vec::new();
        for &u in &order {
            for (t, (_, e)) in idem.iter().enumerate() {
                let c = p.act(e, &[(u, Q::one())].into_iter().collect());
                if c.is_empty() || span.contains(&c) {
                    continue;
                }
                for i in 0..b.dim() {
                    let v = p.act(&b.basis_vector(i), &c);
                    if !v.is_empty() {
                        span.insert(v);
                    }
                }
                gens.push((c, t));
            }
        }
        if span.rank() != p.dim() {
            return Err(Error::DualBasis("module is not generated by its idempotent pieces".into()));
        }
        let m = gens.len();
        let gen_deg: Vec<i32> = gens.iter().map(|(v, _)| p.degrees[*v.keys().next().unwrap()]).collect();
        // bases of B e_k, and of e_l B e_k in a fixed degree
        let be: Vec<Vec<Vector>> = gens.iter().map(|(_, t)| independent((0..b.dim()).map(|i| b.mul(&b.basis_vector(i), &idem[*t].1)))).collect();
        let ebe = |l: usize, k: usize| -> Vec<Vector> {
            let d = gen_deg[l] - gen_deg[k];
            let (el, ek) = (&idem[gens[l].1].1, &idem[gens[k].1].1);
            independent(b.piece(d).into_iter().map(|i| b.mul(&b.mul(el, &b.basis_vector(i)), ek)))
        };
        // domain of π: pairs (k, s) ↦ be[k][s] · p_k
        let mut dom: Vec<(usize, usize)> = Vec::new();
        for k in 0..m {
            for s in 0..be[k].len() {
                dom.push((k, s));
            }
        }
        let pi_cols: Vec<Vector> = dom.iter().map(|&(k, s)| p.act(&be[k][s], &gens[k].0)).collect();
        let kernel = kernel_of_columns(&pi_cols);
        // unknowns x_{l,k} = Σ_s c_{lks} γ_{lks}
        let mut gamma: Vec<Vec<Vec<Vector>>> = vec![vec![Vec::new(); m]; m];
        let mut var: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for l in 0..m {
            for k in 0..m {
                gamma[l][k] = ebe(l, k);
                for s in 0..gamma[l][k].len() {
                    let n = var.len();
                    var.insert((l, k, s), n);
                }
            }
        }
        let nvars = var.len();
        let mut eqs: Vec<(SparseVec<usize, Q>, Q)> = Vec::new();
        // π(x_l) = p_l
        for l in 0..m {
            let mut rows: BTreeMap<usize, SparseVec<usize, Q>> = BTreeMap::new();
            for k in 0..m {
                for (s, g) in gamma[l][k].iter().enumerate() {
                    for (u, c) in p.act(g, &gens[k].0) {
                        add_entry(rows.entry(u).or_default(), var[&(l, k, s)], c);
                    }
                }
            }
            let mut keys: Vec<usize> = rows.keys().copied().collect();
            keys.extend(gens[l].0.keys().copied());
            keys.sort();
            keys.dedup();
            for u in keys {
                eqs.push((rows.remove(&u).unwrap_or_default(), gens[l].0.get(&u).cloned().unwrap_or_else(Q::zero)));
            }
        }
        // Σ_l b_l x_l = 0 for each kernel vector (b_l)
        for z in &kernel {
            let mut bl: Vec<Vector> = vec![Vector::new(); m];
            for (idx, c) in z {
                let (l, s) = dom[*idx];
                axpy(&mut bl[l], c, &be[l][s]);
            }
            for k in 0..m {
                let mut rows: BTreeMap<usize, SparseVec<usize, Q>> = BTreeMap::new();
                for l in 0..m {
                    if bl[l].is_empty() {
                        continue;
                    }
                    for (s, g) in gamma[l][k].iter().enumerate() {
                        for (i, c) in b.mul(&bl[l], g) {
                            add_entry(rows.entry(i).or_default(), var[&(l, k, s)], c);
                        }
                    }
                }
                for (_, row) in rows {
                    eqs.push((row, Q::zero()));
                }
            }
        }
        let sol = solve_sparse(&eqs, nvars).ok_or_else(|| Error::DualBasis("no B-linear splitting of the generator map".into()))?;
        let x: Vec<Vec<Vector>> = (0..m)
            .map(|l| {
                (0..m)
                    .map(|k| {
                        let mut v = Vector::new();
                        for (s, g) in gamma[l][k].iter().enumerate() {
                            axpy(&mut v, &sol[var[&(l, k, s)]], g);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        // preimages of module basis vectors under π, then σ
        let mut rows: Vec<SparseVec<usize, Q>> = vec![SparseVec::new(); p.dim()];
        for (j, col) in pi_cols.iter().enumerate() {
            for (w, c) in col {
                rows[*w].insert(j, c.clone());
            }
        }
        let mut sigma = Vec::with_capacity(p.dim());
        for u in 0..p.dim() {
            let eq: Vec<(SparseVec<usize, Q>, Q)> = rows.iter().enumerate().map(|(w, r)| (r.clone(), if w == u { Q::one() } else { Q::zero() })).collect();
            let pre = solve_sparse(&eq, dom.len()).ok_or_else(|| Error::DualBasis("generators do not span the module".into()))?;
            let mut comps = vec![Vector::new(); m];
            for (j, c) in pre.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (l, s) = dom[j];
                for k in 0..m {
                    let prod = b.mul(&be[l][s], &x[l][k]);
                    axpy(&mut comps[k], c, &prod);
                }
            }
            sigma.push(comps);
        }
        let db = DualBasis { gens, sigma };
        db.verify(b, p)?;
        Ok(db)
    }

    /// f_k(m) for every k.
    pub fn coordinates(&self, m: &Vector) -> Vec<Vector> {
        let k = self.gens.len();
        let mut out = vec![Vector::new(); k];
        for (u, c) in m {
            for j in 0..k {
                axpy(&mut out[j], c, &self.sigma[*u][j]);
            }
        }
        out
    }

    /// Σ_k f_k(m) p_k = m on every basis vector.
    pub fn verify(&self, _b: &GradedAlgebra, p: &LeftModule) -> Result<()> {
        for u in 0..p.dim() {
            let m: Vector = [(u, Q::one())].into_iter().collect();
            let mut back = Vector::new();
            for (k, f) in self.coordinates(&m).iter().enumerate() {
                axpy(&mut back, &Q::one(), &p.act(f, &self.gens[k].0));
            }
            if back != m {
                return Err(Error::DualBasis(format!("dual basis fails to reconstruct module vector {}", u)));
            }
        }
        Ok(())
    }

    /// Hattori–Stallings trace Σ_k [f_k(φ(p_k))] of a module endomorphism.
    pub fn trace_of(&self, tr_b: &TraceSpace, phi: impl Fn(&Vector) -> Vector) -> Vector {
        let mut out = Vector::new();
        for (k, (pk, _)) in self.gens.iter().enumerate() {
            let img = phi(pk);
            let f = &self.coordinates(&img)[k];
            axpy(&mut out, &Q::one(), &tr_b.project(f));
        }
        out
    }
}

fn independent(vs: impl Iterator<Item = Vector>) -> Vec<Vector> {
    let mut ech: Echelon<usize, Q> = Echelon::new();
    let mut out = Vec::new();
    for v in vs {
        if !v.is_empty() && ech.insert(v.clone()).is_some() {
            out.push(v);
        }
    }
    out
}

/// The map Tr(A) → Tr(B), [a] ↦ Σ_k [f_k(p_k · a)], for a (B, A)-bimodule P
/// projective over B. `right` gives the right action of an A-basis element
/// on a module vector. Returns the matrix in trace bases.
pub fn bimodule_trace_map(
    b: &GradedAlgebra,
    tr_a: &TraceSpace,
    tr_b: &TraceSpace,
    p: &LeftModule,
    right: impl Fn(usize, &Vector) -> Vector,
) -> Result<Matrix<Q>> {
    let db = DualBasis::compute(b, p)?;
    let mut m = Matrix::zeros(tr_b.dim(), tr_a.dim());
    for (col, &a) in tr_a.representatives().iter().enumerate() {
        for (row, c) in db.trace_of(tr_b, |v| right(a, v)) {
            m.set(row, col, c);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct Hh0Report {
    pub algebra: String,
    pub hh0_graded_dims: BTreeMap<String, usize>,
    pub center_graded_dims: BTreeMap<String, usize>,
    pub chern_rank: usize,
}

pub fn report(name: &str, a: &GradedAlgebra) -> Result<Hh0Report> {
    let tr = trace_space(a);
    let z = center_space(a);
    let idem: Vec<Vector> = a.idempotents().iter().map(|(_, e)| e.clone()).collect();
    let ch = chern_classes(a, &tr, &idem)?;
    let key = |m: BTreeMap<i32, usize>| m.into_iter().map(|(d, c)| (d.to_string(), c)).collect();
    Ok(Hh0Report { algebra: name.to_string(), hh0_graded_dims: key(tr.graded_dims()), center_graded_dims: key(z.graded_dims()), chern_rank: ch.rank })
}

/// Degreewise trace of the free KLR algebra R_ν up to degree `dmax`.
/// [R,R] is spanned by commutators [g, x] with g a generator (including the
/// idempotents) and x a basis element, by the identity
/// [ab, c] = [a, bc] + [b, ca].
pub struct FreeTrace {
    pieces: BTreeMap<i32, (Echelon<Diagram, Q>, Vec<Diagram>)>,
}

impl FreeTrace {
    pub fn new(alg: &KlrAlgebra, dmax: i32) -> FreeTrace {
        let floor = alg.floor_degree();
        let mut gens: Vec<(Lin, i32)> = Vec::new();
        for s in alg.sequences() {
            let e = alg.idempotent(s).unwrap().into_terms();
            gens.push((e.clone(), 0));
            for g in alg.generators() {
                let x = alg.left_gen(g, &e);
                let d = alg.degree(x.keys().next().unwrap());
                gens.push((x, d));
            }
        }
        let mut pieces = BTreeMap::new();
        for d in floor..=dmax {
            let mut ech = Echelon::new();
            for (g, dg) in &gens {
                for b in alg.graded_piece(d - dg) {
                    let x: Lin = [(b, Q::one())].into_iter().collect();
                    let mut c = alg.mul_lin(g, &x);
                    for (k, v) in alg.mul_lin(&x, g) {
                        add_entry(&mut c, k, -v);
                    }
                    if !c.is_empty() {
                        ech.insert(c);
                    }
                }
            }
            let reps: Vec<Diagram> = alg.graded_piece(d).into_iter().filter(|b| !ech.is_pivot(b)).collect();
            pieces.insert(d, (ech, reps));
        }
        FreeTrace { pieces }
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        self.pieces.iter().map(|(d, (_, r))| (*d, r.len())).collect()
    }

    pub fn representatives(&self, d: i32) -> &[Diagram] {
        self.pieces.get(&d).map(|(_, r)| r.as_slice()).unwrap_or(&[])
    }

    /// Reduced form of the class of a homogeneous element of degree d.
    pub fn reduce(&self, d: i32, x: &Lin) -> Lin {
        match self.pieces.get(&d) {
            Some((e, _)) => e.reduce(x),
            None => x.clone(),
        }
    }

    /// Rank of the classes of the given degree-d elements.
    pub fn class_rank(&self, d: i32, xs: &[Lin]) -> usize {
        let mut ech: Echelon<Diagram, Q> = Echelon::new();
        for x in xs {
            ech.insert(self.reduce(d, x));
        }
        ech.rank()
    }

    pub fn dim(&self, d: i32) -> usize {
        self.representatives(d).len()
    }
}
