//! Simply-laced Cartan data, weights, scalar choices and pivotal scalars.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_sparse;
use crate::scalar::Q;

/// A finite simply-laced Cartan datum with an orientation of its graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    names: Vec<String>,
    /// a[i][j]
    a: Vec<Vec<i64>>,
    /// oriented edges (from, to)
    orientation: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanConfig {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub orientation: Vec<(String, String)>,
    #[serde(default)]
    pub t_overrides: Vec<TOverride>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TOverride {
    pub i: String,
    pub j: String,
    pub t: Q,
}

impl CartanDatum {
    /// Builds a datum from node names and an oriented edge list.
    pub fn new(names: Vec<String>, oriented_edges: Vec<(usize, usize)>) -> Result<CartanDatum> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidDatum("no nodes".into()));
        }
        let uniq: BTreeSet<&String> = names.iter().collect();
        if uniq.len() != n {
            return Err(Error::InvalidDatum("repeated node name".into()));
        }
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(x, y) in &oriented_edges {
            if x >= n || y >= n {
                return Err(Error::InvalidDatum(format!("edge ({}, {}) out of range", x, y)));
            }
            if x == y {
                return Err(Error::InvalidDatum(format!("loop at node {}", names[x])));
            }
            if a[x][y] != 0 {
                return Err(Error::InvalidDatum(format!("multiple edge {} - {}", names[x], names[y])));
            }
            a[x][y] = -1;
            a[y][x] = -1;
        }
        let d = CartanDatum { names, a, orientation: oriented_edges };
        if !d.is_finite_type() {
            return Err(Error::InvalidDatum("graph is not of finite type".into()));
        }
        Ok(d)
    }

    /// Type A_n with the path oriented 1 -> 2 -> ... -> n.
    pub fn type_a(n: usize) -> CartanDatum {
        let names = (1..=n).map(|k| k.to_string()).collect();
        let edges = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
        CartanDatum::new(names, edges).expect("type A is valid")
    }

    /// Same graph with every edge reversed.
    pub fn reversed(&self) -> CartanDatum {
        CartanDatum { names: self.names.clone(), a: self.a.clone(), orientation: self.orientation.iter().map(|&(x, y)| (y, x)).collect() }
    }

    pub fn from_config(cfg: &CartanConfig) -> Result<(CartanDatum, ScalarChoice)> {
        let idx = |s: &str| -> Result<usize> {
            cfg.nodes.iter().position(|n| n == s).ok_or_else(|| Error::InvalidDatum(format!("unknown node '{}'", s)))
        };
        let mut edges = BTreeSet::new();
        for (x, y) in &cfg.edges {
            let (x, y) = (idx(x)?, idx(y)?);
            if !edges.insert((x.min(y), x.max(y))) {
                return Err(Error::InvalidDatum("multiple edge".into()));
            }
        }
        let mut oriented = Vec::new();
        let mut seen = BTreeSet::new();
        for (x, y) in &cfg.orientation {
            let (x, y) = (idx(x)?, idx(y)?);
            let key = (x.min(y), x.max(y));
            if !edges.contains(&key) {
                return Err(Error::InvalidDatum(format!("orientation of a non-edge {} - {}", cfg.nodes[x], cfg.nodes[y])));
            }
            if !seen.insert(key) {
                return Err(Error::InvalidDatum("edge oriented twice".into()));
            }
            oriented.push((x, y));
        }
        for &(x, y) in &edges {
            if !seen.contains(&(x, y)) {
                oriented.push((x, y));
            }
        }
        let datum = CartanDatum::new(cfg.nodes.clone(), oriented)?;
        let mut q = default_scalars(&datum);
        for o in &cfg.t_overrides {
            let (i, j) = (idx(&o.i)?, idx(&o.j)?);
            q.set(i, j, o.t.clone())?;
        }
        q.validate(&datum)?;
        Ok((datum, q))
    }

    pub fn parse_config(json: &str) -> Result<(CartanDatum, ScalarChoice)> {
        let cfg: CartanConfig = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        CartanDatum::from_config(&cfg)
    }

    fn is_finite_type(&self) -> bool {
        // positive definite Cartan matrix: all leading principal minors positive
        let n = self.rank();
        for k in 1..=n {
            let mut m: Vec<Vec<Q>> = (0..k).map(|i| (0..k).map(|j| Q::int(self.a[i][j])).collect()).collect();
            let mut det = Q::one();
            for c in 0..k {
                let p = match (c..k).find(|&r| !m[r][c].is_zero()) {
                    Some(p) => p,
                    None => return false,
                };
                if p != c {
                    m.swap(p, c);
                    det = -det;
                }
                det = &det * &m[c][c];
                for r in c + 1..k {
                    let f = &m[r][c] / &m[c][c];
                    for cc in c..k {
                        let t = &f * &m[c][cc];
                        m[r][cc] = &m[r][cc] - &t;
                    }
                }
            }
            if det.is_negative() || det.is_zero() {
                return false;
            }
        }
        true
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    /// Symmetric bilinear form on simple roots.
    pub fn form(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn orientation(&self) -> &[(usize, usize)] {
        &self.orientation
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.orientation.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
        e.sort();
        e
    }

    pub fn weight(&self, fund: Vec<i64>, root: Vec<i64>) -> Weight {
        assert_eq!(fund.len(), self.rank());
        assert_eq!(root.len(), self.rank());
        let pairings = (0..self.rank()).map(|i| fund[i] + (0..self.rank()).map(|j| self.a[i][j] * root[j]).sum::<i64>()).collect();
        Weight { fund, root, pairings }
    }

    pub fn zero_weight(&self) -> Weight {
        self.weight(vec![0; self.rank()], vec![0; self.rank()])
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        let mut f = vec![0; self.rank()];
        f[i] = 1;
        self.weight(f, vec![0; self.rank()])
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let mut r = vec![0; self.rank()];
        r[i] = 1;
        self.weight(vec![0; self.rank()], r)
    }

    pub fn dominant(&self, fund: &[i64]) -> Weight {
        self.weight(fund.to_vec(), vec![0; self.rank()])
    }

    /// Root-lattice coordinates of `w` if it lies in the root lattice.
    pub fn root_coords(&self, w: &Weight) -> Option<Vec<i64>> {
        let n = self.rank();
        let eqs: Vec<_> = (0..n)
            .map(|i| ((0..n).filter(|&j| self.a[i][j] != 0).map(|j| (j, Q::int(self.a[i][j]))).collect(), Q::int(w.pairings[i])))
            .collect();
        let x = solve_sparse(&eqs, n)?;
        x.iter().map(|q| q.to_i64()).collect()
    }
}

/// Weight lattice element stored with fundamental-weight and simple-root
/// coordinates. Equality and ordering use the pairing vector, which
/// determines the weight in finite type.
#[derive(Clone, Serialize, Deserialize)]
pub struct Weight {
    fund: Vec<i64>,
    root: Vec<i64>,
    pairings: Vec<i64>,
}

impl Weight {
    pub fn pairing(&self, i: usize) -> i64 {
        self.pairings[i]
    }

    pub fn pairings(&self) -> &[i64] {
        &self.pairings
    }

    pub fn fund_coords(&self) -> &[i64] {
        &self.fund
    }

    pub fn root_coords(&self) -> &[i64] {
        &self.root
    }

    pub fn is_dominant(&self) -> bool {
        self.pairings.iter().all(|&p| p >= 0)
    }

    pub fn plus(&self, other: &Weight) -> Weight {
        Weight {
            fund: self.fund.iter().zip(&other.fund).map(|(a, b)| a + b).collect(),
            root: self.root.iter().zip(&other.root).map(|(a, b)| a + b).collect(),
            pairings: self.pairings.iter().zip(&other.pairings).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn minus(&self, other: &Weight) -> Weight {
        Weight {
            fund: self.fund.iter().zip(&other.fund).map(|(a, b)| a - b).collect(),
            root: self.root.iter().zip(&other.root).map(|(a, b)| a - b).collect(),
            pairings: self.pairings.iter().zip(&other.pairings).map(|(a, b)| a - b).collect(),
        }
    }

    /// λ + c·α_j.
    pub fn shift_root(&self, datum: &CartanDatum, j: usize, c: i64) -> Weight {
        let mut w = self.clone();
        w.root[j] += c;
        for i in 0..w.pairings.len() {
            w.pairings[i] += c * datum.a(i, j);
        }
        w
    }

    pub fn label(&self) -> String {
        let p: Vec<String> = self.pairings.iter().map(|x| x.to_string()).collect();
        format!("({})", p.join(","))
    }
}

impl PartialEq for Weight {
    fn eq(&self, o: &Weight) -> bool {
        self.pairings == o.pairings
    }
}
impl Eq for Weight {}
impl Hash for Weight {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.pairings.hash(h)
    }
}
impl PartialOrd for Weight {
    fn partial_cmp(&self, o: &Weight) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Weight {
    fn cmp(&self, o: &Weight) -> std::cmp::Ordering {
        self.pairings.cmp(&o.pairings)
    }
}
impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight{}", self.label())
    }
}

/// The scalars t_ij for i != j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarChoice {
    t: BTreeMap<(usize, usize), Q>,
}

impl ScalarChoice {
    /// All t_ij = 1.
    pub fn trivial(datum: &CartanDatum) -> ScalarChoice {
        let n = datum.rank();
        let mut t = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    t.insert((i, j), Q::one());
                }
            }
        }
        ScalarChoice { t }
    }

    pub fn t(&self, i: usize, j: usize) -> Q {
        if i == j {
            return Q::one();
        }
        self.t.get(&(i, j)).cloned().unwrap_or_else(Q::one)
    }

    /// v_ij = t_ij^{-1} t_ji
    pub fn v(&self, i: usize, j: usize) -> Q {
        &self.t(i, j).inv().expect("nonzero scalar") * &self.t(j, i)
    }

    pub fn set(&mut self, i: usize, j: usize, t: Q) -> Result<()> {
        if i == j {
            return Err(Error::InvalidDatum("t_ii is fixed to 1".into()));
        }
        if t.is_zero() {
            return Err(Error::InvalidDatum("scalars must be nonzero".into()));
        }
        self.t.insert((i, j), t);
        Ok(())
    }

    pub fn validate(&self, datum: &CartanDatum) -> Result<()> {
        for (&(i, j), t) in &self.t {
            if i >= datum.rank() || j >= datum.rank() {
                return Err(Error::InvalidDatum("scalar index out of range".into()));
            }
            if t.is_zero() {
                return Err(Error::InvalidDatum("scalars must be nonzero".into()));
            }
            if datum.a(i, j) == 0 && self.t(i, j) != self.t(j, i) {
                return Err(Error::InvalidDatum(format!("t_{}{} != t_{}{} for a non-edge", datum.name(i), datum.name(j), datum.name(j), datum.name(i))));
            }
        }
        Ok(())
    }

    /// True when v_ij = (-1)^{a_ij} for all i != j.
    pub fn is_signed(&self, datum: &CartanDatum) -> bool {
        let n = datum.rank();
        (0..n).all(|i| (0..n).all(|j| i == j || self.v(i, j) == Q::int(if datum.a(i, j) % 2 == 0 { 1 } else { -1 })))
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Q> {
        &self.t
    }
}

/// t_ij = 1, t_ji = -1 for each oriented edge j -> i; 1 on non-edges.
pub fn default_scalars(datum: &CartanDatum) -> ScalarChoice {
    let mut q = ScalarChoice::trivial(datum);
    for &(j, i) in datum.orientation() {
        q.t.insert((i, j), Q::one());
        q.t.insert((j, i), Q::int(-1));
    }
    q
}

/// Per edge: whether v_ij t_ij t_ji^{-1} = 1.
pub fn cyclicity_check(datum: &CartanDatum, q: &ScalarChoice) -> BTreeMap<(usize, usize), bool> {
    datum
        .edges()
        .into_iter()
        .map(|(i, j)| {
            let lhs = &(&q.v(i, j) * &q.t(i, j)) * &q.t(j, i).inv().unwrap();
            ((i, j), lhs.is_one())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotalScalars {
    cplus: BTreeMap<(usize, Weight), Q>,
}

impl PivotalScalars {
    pub fn cplus(&self, i: usize, w: &Weight) -> Option<&Q> {
        self.cplus.get(&(i, w.clone()))
    }

    /// c^-_{i, λ+α_i} = 1 / c^+_{i,λ}
    pub fn cminus(&self, datum: &CartanDatum, i: usize, w: &Weight) -> Option<Q> {
        let below = w.shift_root(datum, i, -1);
        self.cplus(i, &below).and_then(|c| c.inv())
    }

    pub fn entries(&self) -> &BTreeMap<(usize, Weight), Q> {
        &self.cplus
    }

    /// Every stored adjacent pair satisfies c^+_{i,λ+α_j} = t_ij c^+_{i,λ}.
    pub fn ratios_hold(&self, datum: &CartanDatum, q: &ScalarChoice) -> bool {
        self.cplus.iter().all(|((i, w), c)| {
            (0..datum.rank()).all(|j| match self.cplus(*i, &w.shift_root(datum, j, 1)) {
                Some(c2) => *c2 == c * &q.t(*i, j),
                None => true,
            })
        })
    }

    /// v_ij c^+_{i,λ+α_j} c^+_{j,λ} / (c^+_{i,λ} c^+_{j,λ+α_i}) for every
    /// edge and window weight where all four scalars exist.
    pub fn cyclicity_ratios(&self, datum: &CartanDatum, q: &ScalarChoice) -> Vec<(usize, usize, Weight, Q)> {
        let mut out = Vec::new();
        let weights: BTreeSet<&Weight> = self.cplus.keys().map(|(_, w)| w).collect();
        for (i, j) in datum.edges() {
            for &(a, b) in &[(i, j), (j, i)] {
                for w in &weights {
                    let wa = w.shift_root(datum, b, 1);
                    let wb = w.shift_root(datum, a, 1);
                    if let (Some(c1), Some(c2), Some(c3), Some(c4)) = (self.cplus(a, &wa), self.cplus(b, w), self.cplus(a, w), self.cplus(b, &wb)) {
                        let num = &(&q.v(a, b) * c1) * c2;
                        let den = c3 * c4;
                        out.push((a, b, (*w).clone(), &num / &den));
                    }
                }
            }
        }
        out
    }
}

/// Solves the compatibility ratios c^+_{i,λ+α_j} / c^+_{i,λ} = t_ij on a
/// finite window. Each root-lattice coset of the window gets its
/// lexicographically smallest weight as base with c^+ = 1.
pub fn solve_pivotal(datum: &CartanDatum, q: &ScalarChoice, window: &[Weight]) -> Result<PivotalScalars> {
    let set: BTreeSet<Weight> = window.iter().cloned().collect();
    // group by coset
    let mut cosets: Vec<Vec<Weight>> = Vec::new();
    for w in &set {
        match cosets.iter_mut().find(|c| datum.root_coords(&w.minus(&c[0])).is_some()) {
            Some(c) => c.push(w.clone()),
            None => cosets.push(vec![w.clone()]),
        }
    }
    let n = datum.rank();
    let mut cplus = BTreeMap::new();
    for coset in &cosets {
        let base = coset.iter().min().unwrap().clone();
        let members: BTreeSet<&Weight> = coset.iter().collect();
        // BFS over ±α_j steps inside the window
        let mut val: BTreeMap<Weight, (Vec<Q>, Vec<String>)> = BTreeMap::new();
        val.insert(base.clone(), (vec![Q::one(); n], vec![base.label()]));
        let mut queue = VecDeque::from([base.clone()]);
        while let Some(w) = queue.pop_front() {
            let (cur, path) = val[&w].clone();
            for j in 0..n {
                for dir in [1i64, -1] {
                    let w2 = w.shift_root(datum, j, dir);
                    if !members.contains(&w2) {
                        continue;
                    }
                    let next: Vec<Q> = (0..n)
                        .map(|i| if dir == 1 { &cur[i] * &q.t(i, j) } else { &cur[i] / &q.t(i, j) })
                        .collect();
                    match val.get(&w2) {
                        Some((old, old_path)) => {
                            if *old != next {
                                let mut cyc = path.clone();
                                cyc.push(w2.label());
                                return Err(Error::InconsistentWindow(format!(
                                    "cycle {} disagrees with path {}",
                                    cyc.join(" -> "),
                                    old_path.join(" -> ")
                                )));
                            }
                        }
                        None => {
                            let mut p = path.clone();
                            p.push(w2.label());
                            val.insert(w2.clone(), (next, p));
                            queue.push_back(w2);
                        }
                    }
                }
            }
        }
        if val.len() != coset.len() {
            return Err(Error::InconsistentWindow(format!("window is not connected inside the coset of {}", base.label())));
        }
        for (w, (c, _)) in val {
            for (i, ci) in c.into_iter().enumerate() {
                cplus.insert((i, w.clone()), ci);
            }
        }
    }
    Ok(PivotalScalars { cplus })
}

/// All weights λ + Σ n_j α_j with |n_j| ≤ radius.
pub fn box_window(datum: &CartanDatum, center: &Weight, radius: i64) -> Vec<Weight> {
    let n = datum.rank();
    let mut out = vec![center.clone()];
    for j in 0..n {
        let mut next = Vec::new();
        for w in &out {
            for c in -radius..=radius {
                next.push(w.shift_root(datum, j, c));
            }
        }
        out = next;
    }
    out
}
