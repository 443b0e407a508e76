//! The KLR algebra R(ν) with its ψ_w y^a e(i) basis.
//!
//! Conventions: a product `a·b` stacks `a` on top of `b`. A basis diagram
//! `ψ_w y^a e(i)` has its idempotent `e(i)` at the bottom (the source
//! sequence), the dots directly above it, and the crossings of the canonical
//! reduced word of `w` above the dots. Strand positions are 0-based
//! internally and 1-based in text.
//!
//! Multiplication works by left-multiplying basis diagrams by single
//! generators. `ψ_k·ψ_w e(i)` is rewritten to canonical words with braid
//! moves that carry their correction terms; the results are memoised per
//! `(k, w, i)` since dots at the bottom simply ride along.

mod checks;
mod perm;
mod text;

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use smallvec::SmallVec;

pub use checks::CheckReport;
pub use perm::{PermId, PermTable};

use crate::cartan::{CartanDatum, ScalarChoice, Weight};
use crate::error::{Error, Result};
use crate::linalg::add_entry;
use crate::scalar::Q;

pub type Dots = SmallVec<[u8; 8]>;
pub type SeqId = u32;

/// Basis diagram ψ_w y^a e(i). The field order fixes the comparison order
/// used for pivoting: total dots first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Diagram {
    total_dots: u16,
    perm: PermId,
    src: SeqId,
    dots: Dots,
}

impl Diagram {
    pub fn new(perm: PermId, src: SeqId, dots: Dots) -> Diagram {
        let total_dots = dots.iter().map(|&d| d as u16).sum();
        Diagram { total_dots, perm, src, dots }
    }

    pub fn perm(&self) -> PermId {
        self.perm
    }

    pub fn src(&self) -> SeqId {
        self.src
    }

    pub fn dots(&self) -> &[u8] {
        &self.dots
    }

    pub fn total_dots(&self) -> u32 {
        self.total_dots as u32
    }

    fn with_extra_dots(&self, extra: &[u8]) -> Diagram {
        let dots: Dots = self.dots.iter().zip(extra).map(|(a, b)| a + b).collect();
        Diagram::new(self.perm, self.src, dots)
    }
}

pub type Lin = BTreeMap<Diagram, Q>;

/// Element of R(ν): a finite linear combination of basis diagrams.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    ctx: u64,
    terms: Lin,
}

impl Element {
    pub fn terms(&self) -> &Lin {
        &self.terms
    }

    pub fn into_terms(self) -> Lin {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &Diagram) -> Q {
        self.terms.get(d).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Element) -> Result<Element> {
        check_ctx(self.ctx, o.ctx)?;
        let mut terms = self.terms.clone();
        lin_axpy(&mut terms, &Q::one(), &o.terms);
        Ok(Element { ctx: self.ctx, terms })
    }

    pub fn sub(&self, o: &Element) -> Result<Element> {
        check_ctx(self.ctx, o.ctx)?;
        let mut terms = self.terms.clone();
        lin_axpy(&mut terms, &Q::int(-1), &o.terms);
        Ok(Element { ctx: self.ctx, terms })
    }

    pub fn scale(&self, c: &Q) -> Element {
        let mut terms = Lin::new();
        lin_axpy(&mut terms, c, &self.terms);
        Element { ctx: self.ctx, terms }
    }
}

fn check_ctx(a: u64, b: u64) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch("elements belong to different KLR algebras".into()));
    }
    Ok(())
}

pub(crate) fn lin_axpy(v: &mut Lin, c: &Q, w: &Lin) {
    if c.is_zero() {
        return;
    }
    for (d, x) in w {
        add_entry(v, d.clone(), c * x);
    }
}

fn lin_single(d: Diagram, c: Q) -> Lin {
    let mut l = Lin::new();
    if !c.is_zero() {
        l.insert(d, c);
    }
    l
}

type Cache = Mutex<HashMap<(u8, PermId, SeqId), Arc<Vec<(Diagram, Q)>>>>;

/// The KLR algebra R(ν) for a Cartan datum, a choice of scalars and a
/// dimension vector ν.
pub struct KlrAlgebra {
    datum: CartanDatum,
    scalars: ScalarChoice,
    nu: Vec<u32>,
    n: usize,
    perms: PermTable,
    seqs: Vec<Vec<u8>>,
    seq_index: HashMap<Vec<u8>, SeqId>,
    fingerprint: u64,
    psi_cache: Cache,
    y_cache: Cache,
}

impl std::fmt::Debug for KlrAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KlrAlgebra(nu = {:?})", self.nu)
    }
}

fn sequences_of(nu: &[u32]) -> Vec<Vec<u8>> {
    fn rec(rem: &mut Vec<u32>, cur: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(i as u8);
                rec(rem, cur, n, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    let n = nu.iter().sum::<u32>() as usize;
    let mut out = Vec::new();
    rec(&mut nu.to_vec(), &mut Vec::new(), n, &mut out);
    out
}

impl KlrAlgebra {
    pub fn new(datum: &CartanDatum, scalars: &ScalarChoice, nu: &[u32]) -> Result<KlrAlgebra> {
        if nu.len() != datum.rank() {
            return Err(Error::ContextMismatch(format!("dimension vector has {} entries for {} nodes", nu.len(), datum.rank())));
        }
        scalars.validate(datum)?;
        let n = nu.iter().sum::<u32>() as usize;
        let seqs = sequences_of(nu);
        let seq_index = seqs.iter().enumerate().map(|(i, s)| (s.clone(), i as SeqId)).collect();
        let mut h = std::collections::hash_map::DefaultHasher::new();
        datum.names().hash(&mut h);
        for i in 0..datum.rank() {
            for j in 0..datum.rank() {
                datum.a(i, j).hash(&mut h);
                scalars.t(i, j).hash(&mut h);
            }
        }
        nu.hash(&mut h);
        Ok(KlrAlgebra {
            datum: datum.clone(),
            scalars: scalars.clone(),
            nu: nu.to_vec(),
            n,
            perms: PermTable::new(n),
            seqs,
            seq_index,
            fingerprint: h.finish(),
            psi_cache: Mutex::new(HashMap::new()),
            y_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn scalars(&self) -> &ScalarChoice {
        &self.scalars
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &PermTable {
        &self.perms
    }

    pub fn sequences(&self) -> &[Vec<u8>] {
        &self.seqs
    }

    pub fn seq(&self, id: SeqId) -> &[u8] {
        &self.seqs[id as usize]
    }

    pub fn seq_id(&self, seq: &[u8]) -> Option<SeqId> {
        self.seq_index.get(seq).copied()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// The weight ν as an element of the root lattice.
    pub fn nu_weight(&self) -> Weight {
        let r: Vec<i64> = self.nu.iter().map(|&x| x as i64).collect();
        self.datum.weight(vec![0; self.datum.rank()], r)
    }

    pub fn element(&self, terms: Lin) -> Element {
        Element { ctx: self.fingerprint, terms }
    }

    pub fn zero(&self) -> Element {
        self.element(Lin::new())
    }

    pub fn target(&self, d: &Diagram) -> SeqId {
        self.target_of(d.perm, d.src)
    }

    fn target_of(&self, w: PermId, src: SeqId) -> SeqId {
        let t = self.perms.act(w, self.seq(src));
        self.seq_index[&t]
    }

    fn zero_dots(&self) -> Dots {
        SmallVec::from_elem(0, self.n)
    }

    pub fn diagram(&self, w: PermId, src: SeqId, dots: &[u8]) -> Diagram {
        Diagram::new(w, src, dots.iter().copied().collect())
    }

    fn plain(&self, w: PermId, src: SeqId) -> Diagram {
        Diagram::new(w, src, self.zero_dots())
    }

    pub fn basis_element(&self, d: &Diagram) -> Element {
        self.element(lin_single(d.clone(), Q::one()))
    }

    pub fn idempotent(&self, seq: &[u8]) -> Result<Element> {
        let s = self.seq_id(seq).ok_or_else(|| Error::ContextMismatch(format!("sequence {:?} has the wrong weight", seq)))?;
        Ok(self.basis_element(&self.plain(self.perms.identity(), s)))
    }

    /// The unit: sum of all e(i).
    pub fn unit(&self) -> Element {
        let mut t = Lin::new();
        for s in 0..self.seqs.len() {
            t.insert(self.plain(self.perms.identity(), s as SeqId), Q::one());
        }
        self.element(t)
    }

    /// y_k e(seq), k 0-based.
    pub fn y(&self, k: usize, seq: &[u8]) -> Result<Element> {
        self.check_strand(k)?;
        let e = self.idempotent(seq)?;
        Ok(self.element(self.left_y(k as u8, &e.terms)))
    }

    /// ψ_k e(seq), k 0-based.
    pub fn psi(&self, k: usize, seq: &[u8]) -> Result<Element> {
        if k + 1 >= self.n.max(1) {
            return Err(Error::OutOfRange(format!("crossing {} on {} strands", k + 1, self.n)));
        }
        let e = self.idempotent(seq)?;
        Ok(self.element(self.left_psi(k as u8, &e.terms)))
    }

    fn check_strand(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::OutOfRange(format!("strand {} of {}", k + 1, self.n)));
        }
        Ok(())
    }

    /// Normal form of ψ_{word[0]} ⋯ ψ_{word[m-1]} y^dots e(src).
    pub fn from_word(&self, word: &[u8], dots: &[u8], src: &[u8]) -> Result<Element> {
        let s = self.seq_id(src).ok_or_else(|| Error::ContextMismatch(format!("sequence {:?} has the wrong weight", src)))?;
        if dots.len() != self.n {
            return Err(Error::OutOfRange("dot vector length".into()));
        }
        if word.iter().any(|&k| k as usize + 1 >= self.n) {
            return Err(Error::OutOfRange("crossing index".into()));
        }
        let mut acc = lin_single(self.diagram(self.perms.identity(), s, dots), Q::one());
        for &k in word.iter().rev() {
            acc = self.left_psi(k, &acc);
        }
        Ok(self.element(acc))
    }

    /// deg ψ_w y^a e(i) = 2|a| - Σ_{crossing strands of colours c, c'} (α_c, α_c').
    pub fn degree(&self, d: &Diagram) -> i32 {
        2 * d.total_dots as i32 + self.crossing_degree(d.perm, d.src)
    }

    pub fn crossing_degree(&self, w: PermId, src: SeqId) -> i32 {
        let img = self.perms.image(w);
        let s = self.seq(src);
        let mut deg = 0;
        for p in 0..self.n {
            for q in p + 1..self.n {
                if img[p] > img[q] {
                    deg -= self.datum.form(s[p] as usize, s[q] as usize) as i32;
                }
            }
        }
        deg
    }

    /// Degree of a homogeneous element; `None` if zero or inhomogeneous.
    pub fn element_degree(&self, x: &Element) -> Option<i32> {
        let mut it = x.terms.keys().map(|d| self.degree(d));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Lowest degree of any basis diagram.
    pub fn floor_degree(&self) -> i32 {
        let mut m = 0;
        for w in 0..self.perms.count() as PermId {
            for s in 0..self.seqs.len() as SeqId {
                m = m.min(self.crossing_degree(w, s));
            }
        }
        m
    }

    /// All basis diagrams of degree d.
    pub fn graded_piece(&self, d: i32) -> Vec<Diagram> {
        let mut out = Vec::new();
        for s in 0..self.seqs.len() as SeqId {
            for w in 0..self.perms.count() as PermId {
                let c = self.crossing_degree(w, s);
                let rest = d - c;
                if rest < 0 || rest % 2 != 0 {
                    continue;
                }
                for dots in compositions((rest / 2) as u32, self.n) {
                    out.push(Diagram::new(w, s, dots));
                }
            }
        }
        out.sort();
        out
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        check_ctx(a.ctx, self.fingerprint)?;
        check_ctx(b.ctx, self.fingerprint)?;
        Ok(self.element(self.mul_lin(&a.terms, &b.terms)))
    }

    pub fn mul_lin(&self, a: &Lin, b: &Lin) -> Lin {
        let mut out = Lin::new();
        for (d2, c2) in b {
            let t2 = self.target(d2);
            for (d1, c1) in a {
                if d1.src != t2 {
                    continue;
                }
                let p = self.mul_basis(d1, d2);
                lin_axpy(&mut out, &(c1 * c2), &p);
            }
        }
        out
    }

    /// d1 · d2 for basis diagrams with src(d1) = target(d2).
    pub fn mul_basis(&self, d1: &Diagram, d2: &Diagram) -> Lin {
        let mut acc = lin_single(self.plain(d2.perm, d2.src), Q::one());
        for (k, &a) in d1.dots.iter().enumerate() {
            for _ in 0..a {
                acc = self.left_y(k as u8, &acc);
            }
        }
        for &k in self.perms.canonical_word(d1.perm).iter().rev() {
            acc = self.left_psi(k, &acc);
        }
        add_dots(&acc, &d2.dots)
    }

    /// Left multiplication by a generator, as used by closure computations.
    pub fn left_gen(&self, g: Gen, x: &Lin) -> Lin {
        match g {
            Gen::Y(k) => self.left_y(k, x),
            Gen::Psi(k) => self.left_psi(k, x),
        }
    }

    /// Right multiplication by a generator (summed over all idempotents).
    pub fn right_gen(&self, x: &Lin, g: Gen) -> Lin {
        let mut out = Lin::new();
        for (d, c) in x {
            match g {
                Gen::Y(k) => {
                    let mut dots = d.dots.clone();
                    dots[k as usize] += 1;
                    add_entry(&mut out, Diagram::new(d.perm, d.src, dots), c.clone());
                }
                Gen::Psi(k) => {
                    // d · ψ_k e(s) with target(ψ_k e(s)) = src(d)
                    let s = self.perms.act(self.perms.left_mul(k, self.perms.identity()), self.seq(d.src));
                    let s = self.seq_index[&s];
                    let right = self.plain(self.perms.left_mul(k, self.perms.identity()), s);
                    let p = self.mul_basis(d, &right);
                    lin_axpy(&mut out, c, &p);
                }
            }
        }
        out
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut g: Vec<Gen> = (0..self.n as u8).map(Gen::Y).collect();
        g.extend((0..self.n.saturating_sub(1) as u8).map(Gen::Psi));
        g
    }

    pub fn left_y(&self, k: u8, x: &Lin) -> Lin {
        let mut out = Lin::new();
        for (d, c) in x {
            let r = self.y_basis(k, d.perm, d.src);
            for (e, c2) in r.iter() {
                add_entry(&mut out, e.with_extra_dots(&d.dots), c * c2);
            }
        }
        out
    }

    pub fn left_psi(&self, k: u8, x: &Lin) -> Lin {
        let mut out = Lin::new();
        for (d, c) in x {
            let r = self.psi_basis(k, d.perm, d.src);
            for (e, c2) in r.iter() {
                add_entry(&mut out, e.with_extra_dots(&d.dots), c * c2);
            }
        }
        out
    }

    /// y_k ψ_w e(src) in normal form.
    fn y_basis(&self, k: u8, w: PermId, src: SeqId) -> Arc<Vec<(Diagram, Q)>> {
        if let Some(r) = self.y_cache.lock().unwrap().get(&(k, w, src)) {
            return r.clone();
        }
        let word = self.perms.canonical_word(w).to_vec();
        let res: Lin = if word.is_empty() {
            let mut dots = self.zero_dots();
            dots[k as usize] = 1;
            lin_single(Diagram::new(w, src, dots), Q::one())
        } else {
            let c = word[0];
            let w_rest = self.perms.left_mul(c, w);
            let below = self.perms.act(w_rest, self.seq(src));
            let same = below[c as usize] == below[c as usize + 1];
            let kk = if k == c {
                c + 1
            } else if k == c + 1 {
                c
            } else {
                k
            };
            let inner: Lin = self.y_basis(kk, w_rest, src).iter().cloned().collect();
            let mut out = self.left_psi(c, &inner);
            if same && (k == c || k == c + 1) {
                let sign = if k == c { Q::one() } else { Q::int(-1) };
                add_entry(&mut out, self.plain(w_rest, src), sign);
            }
            out
        };
        let arc = Arc::new(res.into_iter().collect::<Vec<_>>());
        self.y_cache.lock().unwrap().insert((k, w, src), arc.clone());
        arc
    }

    /// ψ_k ψ_w e(src) in normal form.
    fn psi_basis(&self, k: u8, w: PermId, src: SeqId) -> Arc<Vec<(Diagram, Q)>> {
        if let Some(r) = self.psi_cache.lock().unwrap().get(&(k, w, src)) {
            return r.clone();
        }
        let sw = self.perms.left_mul(k, w);
        let res: Lin = if self.perms.length(sw) > self.perms.length(w) {
            let mut word = vec![k];
            word.extend_from_slice(self.perms.canonical_word(w));
            self.canon_word(&word, src)
        } else {
            let (nw, corr) = self.make_start_with(self.perms.canonical_word(w), k, src);
            debug_assert_eq!(nw[0], k);
            let tail = &nw[1..];
            let below = self.perms.act(sw, self.seq(src));
            let (a, b) = (below[k as usize] as usize, below[k as usize + 1] as usize);
            let mut out = self.left_psi(k, &corr);
            if a != b {
                let base = self.canon_word(tail, src);
                if self.datum.a(a, b) == 0 {
                    lin_axpy(&mut out, &self.scalars.t(a, b), &base);
                } else {
                    lin_axpy(&mut out, &self.scalars.t(a, b), &self.left_y(k, &base));
                    lin_axpy(&mut out, &self.scalars.t(b, a), &self.left_y(k + 1, &base));
                }
            }
            out
        };
        let arc = Arc::new(res.into_iter().collect::<Vec<_>>());
        self.psi_cache.lock().unwrap().insert((k, w, src), arc.clone());
        arc
    }

    /// Coefficient c with ψ_p ψ_{p+1} ψ_p - ψ_{p+1} ψ_p ψ_{p+1} = c on e(seq).
    fn braid_coeff(&self, p: usize, seq: &[u8]) -> Q {
        let (i, j, k) = (seq[p] as usize, seq[p + 1] as usize, seq[p + 2] as usize);
        if i == k && self.datum.a(i, j) == -1 {
            self.scalars.t(i, j)
        } else {
            Q::zero()
        }
    }

    /// Normal form of ψ_word e(src) for a reduced word.
    fn canon_word(&self, word: &[u8], src: SeqId) -> Lin {
        let w = self.perms.from_word(word);
        if word.len() == self.perms.length(w) && word == self.perms.canonical_word(w) {
            return lin_single(self.plain(w, src), Q::one());
        }
        debug_assert_eq!(word.len(), self.perms.length(w), "word must be reduced");
        let t = self.perms.canonical_word(w)[0];
        if word[0] == t {
            let mut rest = self.canon_word(&word[1..], src);
            let main = self.plain(self.perms.left_mul(t, w), src);
            let c = rest.remove(&main);
            debug_assert!(c.map(|c| c.is_one()).unwrap_or(false));
            let mut out = self.left_psi(t, &rest);
            add_entry(&mut out, self.plain(w, src), Q::one());
            out
        } else {
            let (w2, mut diff) = self.make_start_with(word, t, src);
            let main = self.canon_word(&w2, src);
            lin_axpy(&mut diff, &Q::one(), &main);
            diff
        }
    }

    /// For a reduced word with left descent k, returns a reduced word for the
    /// same permutation starting with k, and ψ_word - ψ_new (on e(src)) in
    /// normal form.
    fn make_start_with(&self, word: &[u8], k: u8, src: SeqId) -> (Vec<u8>, Lin) {
        let l = word[0];
        if l == k {
            return (word.to_vec(), Lin::new());
        }
        let (r1, c1) = self.make_start_with(&word[1..], k, src);
        if (k as i32 - l as i32).abs() >= 2 {
            let mut nw = vec![k, l];
            nw.extend_from_slice(&r1[1..]);
            (nw, self.left_psi(l, &c1))
        } else {
            let (r2, c2) = self.make_start_with(&r1[1..], l, src);
            let tail = &r2[1..];
            let wt = self.perms.from_word(tail);
            let below = self.perms.act(wt, self.seq(src));
            let p = k.min(l) as usize;
            let c = self.braid_coeff(p, &below);
            let mut diff = Lin::new();
            if !c.is_zero() {
                let sign = if l as usize == p { c } else { -c };
                lin_axpy(&mut diff, &sign, &self.canon_word(tail, src));
            }
            let t2 = self.left_psi(l, &self.left_psi(k, &c2));
            lin_axpy(&mut diff, &Q::one(), &t2);
            lin_axpy(&mut diff, &Q::one(), &self.left_psi(l, &c1));
            let mut nw = vec![k, l, k];
            nw.extend_from_slice(tail);
            (nw, diff)
        }
    }

    /// Appends a strand of colour `i` on the right: R(ν) → R(ν+α_i).
    pub fn extend_diagram(&self, big: &KlrAlgebra, d: &Diagram, i: u8) -> Diagram {
        let mut seq = self.seq(d.src).to_vec();
        seq.push(i);
        let src = big.seq_index[&seq];
        let perm = big.perms.id_of(&self.perms.extend_images(d.perm)).unwrap();
        let mut dots = d.dots.clone();
        dots.push(0);
        Diagram::new(perm, src, dots)
    }

    pub fn to_text(&self, x: &Element) -> String {
        text::format_element(self, x)
    }

    pub fn parse(&self, s: &str) -> Result<Element> {
        text::parse_element(self, s)
    }

    pub fn diagram_text(&self, d: &Diagram) -> String {
        text::format_diagram(self, d)
    }
}

/// Generators used in closure computations; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Y(u8),
    Psi(u8),
}

pub(crate) fn add_dots(x: &Lin, dots: &[u8]) -> Lin {
    if dots.iter().all(|&d| d == 0) {
        return x.clone();
    }
    x.iter().map(|(d, c)| (d.with_extra_dots(dots), c.clone())).collect()
}

/// Weak compositions of `total` into `parts` parts.
pub fn compositions(total: u32, parts: usize) -> Vec<Dots> {
    fn rec(total: u32, parts: usize, cur: &mut Dots, out: &mut Vec<Dots>) {
        if parts == 1 {
            cur.push(total as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=total {
            cur.push(a as u8);
            rec(total - a, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(SmallVec::new());
        }
        return out;
    }
    rec(total, parts, &mut SmallVec::new(), &mut out);
    out
}

/// The nilHecke idempotent y^δ ψ_{w0} with δ = (n-1, ..., 1, 0).
pub fn nilhecke_idempotent(alg: &KlrAlgebra) -> Result<Element> {
    let node = single_node(alg)?;
    let n = alg.strands();
    let seq = vec![node; n];
    let w0 = alg.perms().id_of(&(0..n as u8).rev().collect::<Vec<_>>()).unwrap();
    let delta: Vec<u8> = (0..n).map(|k| (n - 1 - k) as u8).collect();
    // y^δ ψ_{w0} = (y^δ e)·(ψ_{w0} e)
    let ydelta = alg.from_word(&[], &delta, &seq)?;
    let psi = alg.from_word(alg.perms().canonical_word(w0), &vec![0; n], &seq)?;
    alg.multiply(&ydelta, &psi)
}

/// y_1^r ⋯ y_n^r · e_n.
pub fn divided_power_class_rep(alg: &KlrAlgebra, r: u8) -> Result<Element> {
    let node = single_node(alg)?;
    let n = alg.strands();
    let seq = vec![node; n];
    let dots = alg.from_word(&[], &vec![r; n], &seq)?;
    alg.multiply(&dots, &nilhecke_idempotent(alg)?)
}

fn single_node(alg: &KlrAlgebra) -> Result<u8> {
    let support: Vec<usize> = alg.nu().iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i).collect();
    match support.as_slice() {
        [i] => Ok(*i as u8),
        [] => Err(Error::OutOfRange("nilHecke idempotent needs at least one strand".into())),
        _ => Err(Error::ContextMismatch("nilHecke idempotent needs a single-node weight".into())),
    }
}
