//! Cyclotomic quotients R^λ_ν = R_ν / ⟨y_1^{⟨i_1,λ⟩} e(i)⟩.
//!
//! Every strand k of a sequence i gets a dot bound N: the last-strand bound
//! of the prefix quotient on i_1..i_k, which transfers to R^λ_ν through the
//! map appending strands on the right. The left ideal L spanned by basis
//! diagrams with some a_k ≥ N is contained in the two-sided ideal I, and
//! I = L + T where T is the closure of {y_k^N e(i) ψ_l} under left and right
//! multiplication by generators, computed in R/L. Once every bound is finite,
//! R/L is finite-dimensional and the closure is exact. The last-strand bound
//! of ν itself is found by running the closure in a growing degree window
//! until y_n^p e(i) falls into the ideal.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cartan::{CartanDatum, ScalarChoice, Weight};
use crate::error::{Error, Result};
use crate::graded::{GradedAlgebra, Vector};
use crate::klr::{Diagram, Gen, KlrAlgebra, Lin, SeqId};
use crate::linalg::{add_entry, Echelon};
use crate::scalar::Q;

pub const CACHE_VERSION: u32 = 1;

type Block = (SeqId, SeqId, i32);
const UNBOUNDED: u8 = u8::MAX;

pub struct CyclotomicQuotient {
    klr: Arc<KlrAlgebra>,
    lambda: Weight,
    /// per source sequence, dot bound per strand
    bounds: Vec<Vec<u8>>,
    ideal: HashMap<Block, Echelon<Diagram, Q>>,
    basis: Vec<Diagram>,
    index: HashMap<Diagram, usize>,
    algebra: GradedAlgebra,
}

impl std::fmt::Debug for CyclotomicQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CyclotomicQuotient(lambda = {}, nu = {:?}, dim = {})", self.lambda.label(), self.klr.nu(), self.basis.len())
    }
}

struct Closure<'a> {
    alg: &'a KlrAlgebra,
    bounds: &'a [Vec<u8>],
    ech: HashMap<Block, Echelon<Diagram, Q>>,
    queue: Vec<Lin>,
    deferred: Vec<Lin>,
    cap: Option<i32>,
}

impl<'a> Closure<'a> {
    fn in_l(&self, d: &Diagram) -> bool {
        let b = &self.bounds[d.src() as usize];
        d.dots().iter().zip(b).any(|(&a, &n)| n != UNBOUNDED && a >= n)
    }

    fn block(&self, d: &Diagram) -> Block {
        (d.src(), self.alg.target(d), self.alg.degree(d))
    }

    /// Drops L, splits into homogeneous idempotent blocks.
    fn split(&self, v: &Lin) -> BTreeMap<Block, Lin> {
        let mut out: BTreeMap<Block, Lin> = BTreeMap::new();
        for (d, c) in v {
            if self.in_l(d) {
                continue;
            }
            out.entry(self.block(d)).or_default().insert(d.clone(), c.clone());
        }
        out
    }

    fn offer(&mut self, v: &Lin) {
        for (b, part) in self.split(v) {
            if let Some(cap) = self.cap {
                if b.2 > cap {
                    self.deferred.push(part);
                    continue;
                }
            }
            let ech = self.ech.entry(b).or_default();
            let r = ech.reduce(&part);
            if !r.is_empty() {
                ech.insert_reduced(r.clone());
                self.queue.push(r);
            }
        }
    }

    fn run(&mut self) {
        let gens = self.alg.generators();
        while let Some(v) = self.queue.pop() {
            for &g in &gens {
                let l = self.alg.left_gen(g, &v);
                self.offer(&l);
                let r = self.alg.right_gen(&v, g);
                self.offer(&r);
            }
        }
    }

    fn raise_cap(&mut self, cap: i32) {
        self.cap = Some(cap);
        let pending = std::mem::take(&mut self.deferred);
        for v in pending {
            self.offer(&v);
        }
        self.run();
    }

    fn contains(&self, v: &Lin) -> bool {
        for (b, part) in self.split(v) {
            match self.ech.get(&b) {
                Some(e) if e.contains(&part) => {}
                _ => return false,
            }
        }
        true
    }

    fn seed(&mut self) {
        let n = self.alg.strands();
        for (s, b) in self.bounds.iter().enumerate() {
            for k in 0..n {
                if b[k] == UNBOUNDED {
                    continue;
                }
                let mut dots = vec![0u8; n];
                dots[k] = b[k];
                let g: Lin = [(self.alg.diagram(self.alg.perms().identity(), s as SeqId, &dots), Q::one())].into_iter().collect();
                for l in 0..n.saturating_sub(1) {
                    let v = self.alg.right_gen(&g, Gen::Psi(l as u8));
                    self.offer(&v);
                }
            }
        }
    }
}

impl CyclotomicQuotient {
    /// Builds the quotient given the dot bounds on all but the last strand
    /// (`prefix_bounds[s][k]` for k < n-1). The last-strand bounds are
    /// discovered; the search gives up past degree `dmax`.
    fn build(klr: Arc<KlrAlgebra>, lambda: &Weight, prefix_bounds: Vec<Vec<u8>>, dmax: i32) -> Result<CyclotomicQuotient> {
        let n = klr.strands();
        let mut bounds = prefix_bounds;
        if n > 0 {
            let unknown: Vec<usize> = (0..bounds.len()).filter(|&s| bounds[s][n - 1] == UNBOUNDED).collect();
            if !unknown.is_empty() {
                let found = discover_last_bounds(&klr, &bounds, &unknown, dmax)?;
                for (s, p) in found {
                    bounds[s][n - 1] = p;
                }
            }
        }
        let mut cl = Closure { alg: &klr, bounds: &bounds, ech: HashMap::new(), queue: Vec::new(), deferred: Vec::new(), cap: None };
        cl.seed();
        cl.run();
        let ideal = cl.ech;
        let mut basis = Vec::new();
        for (s, b) in bounds.iter().enumerate() {
            if b.contains(&0) {
                continue;
            }
            let ranges: Vec<u8> = b.clone();
            for w in 0..klr.perms().count() as u16 {
                for dots in boxed_dots(&ranges) {
                    let d = klr.diagram(w, s as SeqId, &dots);
                    let blk = (d.src(), klr.target(&d), klr.degree(&d));
                    if !ideal.get(&blk).map(|e| e.is_pivot(&d)).unwrap_or(false) {
                        basis.push(d);
                    }
                }
            }
        }
        basis.sort_by_key(|d| (klr.degree(d), d.clone()));
        let index: HashMap<Diagram, usize> = basis.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        let mut q = CyclotomicQuotient {
            klr: klr.clone(),
            lambda: lambda.clone(),
            bounds,
            ideal,
            basis,
            index,
            algebra: GradedAlgebra::new(vec![], vec![], vec![], Vector::new(), vec![]).unwrap(),
        };
        q.algebra = q.structure()?;
        Ok(q)
    }

    fn structure(&self) -> Result<GradedAlgebra> {
        let dim = self.basis.len();
        let klr = &self.klr;
        let mut table = vec![Vector::new(); dim * dim];
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                if a.src() != klr.target(b) {
                    continue;
                }
                table[i * dim + j] = self.reduce(&klr.mul_basis(a, b));
            }
        }
        let labels = self.basis.iter().map(|d| klr.diagram_text(d)).collect();
        let degrees = self.basis.iter().map(|d| klr.degree(d)).collect();
        let mut unit = Vector::new();
        let mut idem = Vec::new();
        for (s, seq) in klr.sequences().iter().enumerate() {
            let e = self.reduce(&klr.idempotent(seq)?.into_terms());
            if !e.is_empty() {
                for (k, c) in &e {
                    add_entry(&mut unit, *k, c.clone());
                }
                idem.push((klr.diagram_text(&klr.diagram(klr.perms().identity(), s as SeqId, &vec![0; klr.strands()])), e));
            }
        }
        GradedAlgebra::new(labels, degrees, table, unit, idem)
    }

    pub fn klr(&self) -> &Arc<KlrAlgebra> {
        &self.klr
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn nu(&self) -> &[u32] {
        self.klr.nu()
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_diagrams(&self) -> &[Diagram] {
        &self.basis
    }

    /// Dot bounds per source sequence and strand.
    pub fn dot_bounds(&self) -> &[Vec<u8>] {
        &self.bounds
    }

    fn in_l(&self, d: &Diagram) -> bool {
        let b = &self.bounds[d.src() as usize];
        d.dots().iter().zip(b).any(|(&a, &n)| a >= n)
    }

    /// Image in the quotient basis of a free element.
    pub fn reduce(&self, v: &Lin) -> Vector {
        let mut blocks: BTreeMap<Block, Lin> = BTreeMap::new();
        for (d, c) in v {
            if self.in_l(d) {
                continue;
            }
            blocks.entry((d.src(), self.klr.target(d), self.klr.degree(d))).or_default().insert(d.clone(), c.clone());
        }
        let mut out = Vector::new();
        for (b, part) in blocks {
            let r = match self.ideal.get(&b) {
                Some(e) => e.reduce(&part),
                None => part,
            };
            for (d, c) in r {
                let i = *self.index.get(&d).expect("reduced diagram lies in the quotient basis");
                add_entry(&mut out, i, c);
            }
        }
        out
    }

    /// Lifts a quotient vector to the free algebra.
    pub fn lift(&self, v: &Vector) -> Lin {
        v.iter().map(|(i, c)| (self.basis[*i].clone(), c.clone())).collect()
    }

    /// The idempotent 1 ⊗ e(i) (sum over sequences ending in i).
    pub fn corner_idempotent(&self, i: usize) -> Vector {
        self.appended_dot(i, 0)
    }

    /// y_n^r (1 ⊗ e(i)) in the quotient basis.
    pub fn appended_dot(&self, i: usize, r: u8) -> Vector {
        let n = self.klr.strands();
        let mut v = Lin::new();
        if n == 0 {
            return Vector::new();
        }
        let mut dots = vec![0u8; n];
        dots[n - 1] = r;
        for (s, seq) in self.klr.sequences().iter().enumerate() {
            if seq[n - 1] as usize == i {
                v.insert(self.klr.diagram(self.klr.perms().identity(), s as SeqId, &dots), Q::one());
            }
        }
        self.reduce(&v)
    }

    /// Image of a free element's idempotent-wise dots: y^a e(seq).
    pub fn dotted_idempotent(&self, seq: &[u8], dots: &[u8]) -> Result<Vector> {
        let s = self.klr.seq_id(seq).ok_or_else(|| Error::ContextMismatch(format!("sequence {:?}", seq)))?;
        let d = self.klr.diagram(self.klr.perms().identity(), s, dots);
        Ok(self.reduce(&[(d, Q::one())].into_iter().collect()))
    }

    pub fn cache_key(&self) -> String {
        cache_key(self.klr.datum(), self.klr.scalars(), &self.lambda, self.klr.nu())
    }

    pub fn to_cache(&self) -> CacheFile {
        let ideal: Vec<Vec<((u16, u32, Vec<u8>), Q)>> = {
            let mut keys: Vec<&Block> = self.ideal.keys().collect();
            keys.sort();
            keys.iter().flat_map(|k| self.ideal[k].rows().map(|(_, r)| r.iter().map(|(d, c)| (diag_key(d), c.clone())).collect::<Vec<_>>()).collect::<Vec<_>>()).collect()
        };
        CacheFile {
            version: CACHE_VERSION,
            checksum: checksum(&self.cache_key()),
            bounds: self.bounds.clone(),
            basis: self.basis.iter().map(diag_key).collect(),
            ideal,
            algebra: self.algebra.clone(),
        }
    }

    /// Restores a quotient from a cache file, checking version and input
    /// checksum.
    pub fn from_cache(klr: Arc<KlrAlgebra>, lambda: &Weight, file: &CacheFile) -> Result<CyclotomicQuotient> {
        let key = cache_key(klr.datum(), klr.scalars(), lambda, klr.nu());
        if file.version != CACHE_VERSION || file.checksum != checksum(&key) {
            return Err(Error::Cache("cache version or input checksum mismatch".into()));
        }
        let mk = |k: &(u16, u32, Vec<u8>)| klr.diagram(k.0, k.1, &k.2);
        let mut ideal: HashMap<Block, Echelon<Diagram, Q>> = HashMap::new();
        for row in &file.ideal {
            let v: Lin = row.iter().map(|(k, c)| (mk(k), c.clone())).collect();
            let first = v.keys().next().ok_or_else(|| Error::Cache("empty ideal row".into()))?;
            let b = (first.src(), klr.target(first), klr.degree(first));
            ideal.entry(b).or_default().insert_reduced(v);
        }
        let basis: Vec<Diagram> = file.basis.iter().map(mk).collect();
        let index = basis.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        Ok(CyclotomicQuotient { klr, lambda: lambda.clone(), bounds: file.bounds.clone(), ideal, basis, index, algebra: file.algebra.clone() })
    }
}

fn diag_key(d: &Diagram) -> (u16, u32, Vec<u8>) {
    (d.perm(), d.src(), d.dots().to_vec())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub checksum: String,
    bounds: Vec<Vec<u8>>,
    basis: Vec<(u16, u32, Vec<u8>)>,
    ideal: Vec<Vec<((u16, u32, Vec<u8>), Q)>>,
    algebra: GradedAlgebra,
}

pub fn cache_key(datum: &CartanDatum, q: &ScalarChoice, lambda: &Weight, nu: &[u32]) -> String {
    let n = datum.rank();
    let mut s = format!("v{};nodes={};", CACHE_VERSION, datum.names().join(","));
    for i in 0..n {
        for j in 0..n {
            s.push_str(&format!("a{}{}={};t{}{}={};", i, j, datum.a(i, j), i, j, q.t(i, j)));
        }
    }
    s.push_str(&format!("lambda={:?};nu={:?}", lambda.pairings(), nu));
    s
}

fn checksum(key: &str) -> String {
    hex::encode(Sha256::digest(key.as_bytes()))
}

fn boxed_dots(bounds: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        let mut next = Vec::new();
        for v in &out {
            for a in 0..b {
                let mut w = v.clone();
                w.push(a);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn discover_last_bounds(klr: &KlrAlgebra, bounds: &[Vec<u8>], unknown: &[usize], dmax: i32) -> Result<Vec<(usize, u8)>> {
    let n = klr.strands();
    let mut cl = Closure { alg: klr, bounds, ech: HashMap::new(), queue: Vec::new(), deferred: Vec::new(), cap: Some(klr.floor_degree().max(0) + 2) };
    cl.seed();
    cl.run();
    let mut found: BTreeMap<usize, u8> = BTreeMap::new();
    let mut cap = cl.cap.unwrap();
    loop {
        for &s in unknown {
            if found.contains_key(&s) {
                continue;
            }
            for p in 0..=(cap / 2).min(254) {
                let mut dots = vec![0u8; n];
                dots[n - 1] = p as u8;
                let v: Lin = [(klr.diagram(klr.perms().identity(), s as SeqId, &dots), Q::one())].into_iter().collect();
                if cl.contains(&v) {
                    found.insert(s, p as u8);
                    break;
                }
            }
        }
        if found.len() == unknown.len() {
            return Ok(found.into_iter().collect());
        }
        if cap >= dmax {
            let missing: Vec<String> = unknown.iter().filter(|s| !found.contains_key(s)).map(|&s| format!("{:?}", klr.seq(s as SeqId))).collect();
            return Err(Error::Stabilization(format!(
                "nu = {:?}: no nilpotency bound for the last dot on {} within degree {} (found {} of {})",
                klr.nu(),
                missing.join(", "),
                dmax,
                found.len(),
                unknown.len()
            )));
        }
        cap += 2;
        cl.raise_cap(cap);
    }
}

/// Memoised cyclotomic quotients R^λ_ν for a fixed λ.
pub struct CyclotomicFamily {
    datum: CartanDatum,
    scalars: ScalarChoice,
    lambda: Weight,
    dmax: i32,
    cache_dir: Option<std::path::PathBuf>,
    quotients: Mutex<HashMap<Vec<u32>, Arc<CyclotomicQuotient>>>,
}

impl CyclotomicFamily {
    pub fn new(datum: &CartanDatum, scalars: &ScalarChoice, lambda: &Weight, dmax: i32) -> Result<CyclotomicFamily> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(format!("lambda = {} is not dominant", lambda.label())));
        }
        scalars.validate(datum)?;
        Ok(CyclotomicFamily {
            datum: datum.clone(),
            scalars: scalars.clone(),
            lambda: lambda.clone(),
            dmax,
            cache_dir: None,
            quotients: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_cache_dir(mut self, dir: impl Into<std::path::PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn scalars(&self) -> &ScalarChoice {
        &self.scalars
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn get(&self, nu: &[u32]) -> Result<Arc<CyclotomicQuotient>> {
        if nu.len() != self.datum.rank() {
            return Err(Error::ContextMismatch("dimension vector length".into()));
        }
        if let Some(q) = self.quotients.lock().unwrap().get(nu) {
            return Ok(q.clone());
        }
        let klr = Arc::new(KlrAlgebra::new(&self.datum, &self.scalars, nu)?);
        let q = match self.load(&klr)? {
            Some(q) => q,
            None => {
                let bounds = self.prefix_bounds(&klr)?;
                let q = CyclotomicQuotient::build(klr, &self.lambda, bounds, self.dmax)?;
                self.store(&q)?;
                q
            }
        };
        let q = Arc::new(q);
        self.quotients.lock().unwrap().insert(nu.to_vec(), q.clone());
        Ok(q)
    }

    fn prefix_bounds(&self, klr: &KlrAlgebra) -> Result<Vec<Vec<u8>>> {
        let n = klr.strands();
        let mut out = Vec::new();
        for seq in klr.sequences() {
            let mut b = vec![UNBOUNDED; n];
            for k in 0..n {
                if k == 0 {
                    let m = self.lambda.pairing(seq[0] as usize);
                    b[0] = m.clamp(0, 254) as u8;
                } else if k + 1 < n {
                    b[k] = self.last_bound(&seq[..=k])?;
                }
            }
            out.push(b);
        }
        Ok(out)
    }

    /// Nilpotency bound of the last dot on e(seq) in its own quotient.
    pub fn last_bound(&self, seq: &[u8]) -> Result<u8> {
        let mut nu = vec![0u32; self.datum.rank()];
        for &c in seq {
            nu[c as usize] += 1;
        }
        let q = self.get(&nu)?;
        let s = q.klr.seq_id(seq).unwrap();
        Ok(q.bounds[s as usize][seq.len() - 1])
    }

    fn cache_path(&self, klr: &KlrAlgebra) -> Option<std::path::PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        let key = cache_key(&self.datum, &self.scalars, &self.lambda, klr.nu());
        Some(dir.join(format!("cyclo-{}.json", &checksum(&key)[..16])))
    }

    fn load(&self, klr: &Arc<KlrAlgebra>) -> Result<Option<CyclotomicQuotient>> {
        let Some(path) = self.cache_path(klr) else { return Ok(None) };
        let Ok(text) = std::fs::read_to_string(&path) else { return Ok(None) };
        let Ok(file) = serde_json::from_str::<CacheFile>(&text) else { return Ok(None) };
        // stale or mismatched entries are rebuilt
        Ok(CyclotomicQuotient::from_cache(klr.clone(), &self.lambda, &file).ok())
    }

    fn store(&self, q: &CyclotomicQuotient) -> Result<()> {
        let Some(path) = self.cache_path(&q.klr) else { return Ok(()) };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
        }
        let text = serde_json::to_string(&q.to_cache()).map_err(|e| Error::Cache(e.to_string()))?;
        std::fs::write(&path, text).map_err(|e| Error::Cache(e.to_string()))
    }
}

/// One-shot construction of R^λ_ν.
pub fn cyclotomic_quotient(datum: &CartanDatum, scalars: &ScalarChoice, lambda: &Weight, nu: &[u32], dmax: i32) -> Result<Arc<CyclotomicQuotient>> {
    CyclotomicFamily::new(datum, scalars, lambda, dmax)?.get(nu)
}

/// Matrix of ι: R^λ_ν → R^λ_{ν+α_i}, one column per basis element of the
/// source, as sparse vectors.
pub fn induction_embedding(small: &CyclotomicQuotient, big: &CyclotomicQuotient, i: usize) -> Result<Vec<Vector>> {
    let mut nu = small.nu().to_vec();
    if i >= nu.len() {
        return Err(Error::OutOfRange(format!("node {}", i)));
    }
    nu[i] += 1;
    if big.nu() != nu.as_slice() || small.lambda != big.lambda || small.klr.fingerprint() == big.klr.fingerprint() {
        return Err(Error::ContextMismatch("induction needs R^λ_ν and R^λ_{ν+α_i} for the same λ".into()));
    }
    if small.klr.datum().names() != big.klr.datum().names() {
        return Err(Error::ContextMismatch("different Cartan data".into()));
    }
    Ok(small
        .basis
        .iter()
        .map(|d| {
            let e = small.klr.extend_diagram(&big.klr, d, i as u8);
            big.reduce(&[(e, Q::one())].into_iter().collect())
        })
        .collect())
}

/// Applies a column map (as returned by [`induction_embedding`]).
pub fn apply_columns(cols: &[Vector], v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (j, c) in v {
        crate::linalg::axpy(&mut out, c, &cols[*j]);
    }
    out
}
