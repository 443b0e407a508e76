//! Exact sparse and dense linear algebra over a [`Field`].

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Field;

pub type SparseVec<K, F> = BTreeMap<K, F>;

/// `v += c * w`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone, F: Field>(v: &mut SparseVec<K, F>, c: &F, w: &SparseVec<K, F>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let t = c.mul(x);
        match v.get_mut(k) {
            Some(e) => {
                *e = e.add(&t);
                if e.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    v.insert(k.clone(), t);
                }
            }
        }
    }
}

pub fn scale<K: Ord + Clone, F: Field>(v: &SparseVec<K, F>, c: &F) -> SparseVec<K, F> {
    if c.is_zero() {
        return BTreeMap::new();
    }
    v.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect()
}

pub fn add_entry<K: Ord, F: Field>(v: &mut SparseVec<K, F>, k: K, c: F) {
    if c.is_zero() {
        return;
    }
    match v.entry(k) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

/// Row echelon form with the pivot of each row at its largest key.
/// Rows are normalized so the pivot coefficient is one.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone, F: Field> {
    rows: BTreeMap<K, SparseVec<K, F>>,
}

impl<K: Ord + Clone, F: Field> Default for Echelon<K, F> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, F: Field> Echelon<K, F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&K, &SparseVec<K, F>)> {
        self.rows.iter()
    }

    pub fn reduce_in_place(&mut self, v: &mut SparseVec<K, F>) {
        reduce_with(&self.rows, v)
    }

    pub fn reduce(&self, v: &SparseVec<K, F>) -> SparseVec<K, F> {
        let mut w = v.clone();
        reduce_with(&self.rows, &mut w);
        w
    }

    pub fn contains(&self, v: &SparseVec<K, F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns the new pivot if `v` was independent.
    pub fn insert(&mut self, v: SparseVec<K, F>) -> Option<K> {
        let mut w = v;
        reduce_with(&self.rows, &mut w);
        self.insert_reduced(w)
    }

    /// Inserts a vector already reduced against this echelon.
    pub fn insert_reduced(&mut self, w: SparseVec<K, F>) -> Option<K> {
        let (k, lead) = match w.iter().next_back() {
            Some((k, c)) => (k.clone(), c.clone()),
            None => return None,
        };
        let w = if lead.is_one() { w } else { scale(&w, &lead.inv().unwrap()) };
        self.rows.insert(k.clone(), w);
        Some(k)
    }
}

fn reduce_with<K: Ord + Clone, F: Field>(rows: &BTreeMap<K, SparseVec<K, F>>, v: &mut SparseVec<K, F>) {
    if rows.is_empty() {
        return;
    }
    let mut upper: Option<K> = None;
    loop {
        let next = match &upper {
            None => v.keys().next_back().cloned(),
            Some(u) => v.range(..u.clone()).next_back().map(|(k, _)| k.clone()),
        };
        let k = match next {
            Some(k) => k,
            None => break,
        };
        if let Some(row) = rows.get(&k) {
            let c = v[&k].neg();
            axpy(v, &c, row);
        }
        upper = Some(k);
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum AugKey<K> {
    Tag(usize),
    Main(K),
}

/// Basis of `{x : sum_j x_j cols[j] = 0}`.
pub fn kernel_of_columns<K: Ord + Clone + fmt::Debug, F: Field>(cols: &[SparseVec<K, F>]) -> Vec<SparseVec<usize, F>> {
    let mut ech: Echelon<AugKey<K>, F> = Echelon::new();
    let mut kernel = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut v: SparseVec<AugKey<K>, F> = c.iter().map(|(k, x)| (AugKey::Main(k.clone()), x.clone())).collect();
        v.insert(AugKey::Tag(j), F::one());
        ech.reduce_in_place(&mut v);
        match v.keys().next_back() {
            Some(AugKey::Main(_)) => {
                ech.insert_reduced(v);
            }
            Some(AugKey::Tag(_)) => {
                let kv: SparseVec<usize, F> = v
                    .into_iter()
                    .map(|(k, x)| match k {
                        AugKey::Tag(t) => (t, x),
                        AugKey::Main(_) => unreachable!(),
                    })
                    .collect();
                kernel.push(kv.clone());
                // keep tag-only rows so later kernel vectors stay independent
                let back: SparseVec<AugKey<K>, F> = kv.into_iter().map(|(t, x)| (AugKey::Tag(t), x)).collect();
                ech.insert_reduced(back);
            }
            None => unreachable!("tag entry cannot cancel"),
        }
    }
    kernel
}

/// Solves a sparse linear system. Each equation is `(coeffs, rhs)` meaning
/// `sum coeffs[j] x_j = rhs`. Free variables are set to zero.
pub fn solve_sparse<F: Field>(equations: &[(SparseVec<usize, F>, F)], n: usize) -> Option<Vec<F>> {
    // key 0 is the constant column, unknown j has key j + 1
    let mut ech: Echelon<usize, F> = Echelon::new();
    for (coeffs, rhs) in equations {
        let mut v: SparseVec<usize, F> = coeffs.iter().map(|(j, c)| (j + 1, c.clone())).collect();
        add_entry(&mut v, 0, rhs.neg());
        if let Some(p) = ech.insert(v) {
            if p == 0 {
                return None;
            }
        }
    }
    let mut x = vec![F::zero(); n + 1];
    x[0] = F::one();
    for (p, row) in ech.rows() {
        let mut s = F::zero();
        for (k, c) in row.range(..*p) {
            s = s.add(&c.mul(&x[*k]));
        }
        x[*p] = s.neg();
    }
    x.remove(0);
    Some(x)
}

/// Dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }

    pub fn add_to(&mut self, r: usize, c: usize, x: &F) {
        let i = r * self.cols + c;
        self.data[i] = self.data[i].add(x);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn commutator(&self, o: &Matrix<F>) -> Matrix<F> {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut s = F::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        s = s.add(&a.mul(&v[c]));
                    }
                }
                s
            })
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn kron(&self, o: &Matrix<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.set(i * o.rows + k, j * o.cols + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn sparse_columns(&self) -> Vec<SparseVec<usize, F>> {
        (0..self.cols)
            .map(|c| (0..self.rows).filter(|&r| !self.get(r, c).is_zero()).map(|r| (r, self.get(r, c).clone())).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut e: Echelon<usize, F> = Echelon::new();
        for c in self.sparse_columns() {
            e.insert(c);
        }
        e.rank()
    }

    /// Null space as column vectors.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        kernel_of_columns(&self.sparse_columns())
            .into_iter()
            .map(|v| {
                let mut d = vec![F::zero(); self.cols];
                for (k, x) in v {
                    d[k] = x;
                }
                d
            })
            .collect()
    }
}
