//! Closed diagrams through the symmetric-function dictionary.
//!
//! A clockwise i-bubble with ♠+r dots is h_r in the i-th copy of Sym and a
//! counterclockwise one with ♠+s dots is (-1)^s e_s. Bubbles are evaluated
//! eagerly, so an element of Z(λ) is an element of the tensor product of
//! one Sym per node, stored in monomial coordinates. One Sym degree is one
//! dot.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cartan::{CartanDatum, ScalarChoice, Weight};
use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::symfunc::{Basis, Partition, PowerSumForm, SymElement};

type Sym = SymElement<Q>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// One bubble in ♠ notation: `alpha` counts dots above ♠ = ±⟨i,λ⟩ - 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bubble {
    pub node: usize,
    pub orientation: Orientation,
    pub alpha: i64,
}

impl Bubble {
    pub fn cw(node: usize, alpha: i64) -> Bubble {
        Bubble { node, orientation: Orientation::Clockwise, alpha }
    }

    pub fn ccw(node: usize, alpha: i64) -> Bubble {
        Bubble { node, orientation: Orientation::Counterclockwise, alpha }
    }

    /// Actual number of dots in region λ; negative for fake bubbles.
    pub fn dots(&self, lambda: &Weight) -> i64 {
        let n = lambda.pairing(self.node);
        match self.orientation {
            Orientation::Clockwise => n - 1 + self.alpha,
            Orientation::Counterclockwise => -n - 1 + self.alpha,
        }
    }

    pub fn is_fake(&self, lambda: &Weight) -> bool {
        self.dots(lambda) < 0
    }
}

/// An element of Z(λ) ≅ ⊗_i Sym.
#[derive(Clone, Debug)]
pub struct BubbleElement {
    lambda: Weight,
    max_degree: u32,
    /// one partition per node, in monomial coordinates
    terms: BTreeMap<Vec<Partition>, Q>,
    truncated: bool,
}

impl PartialEq for BubbleElement {
    fn eq(&self, o: &BubbleElement) -> bool {
        self.lambda == o.lambda && self.terms == o.terms
    }
}

impl BubbleElement {
    pub fn zero(lambda: &Weight, max_degree: u32) -> BubbleElement {
        BubbleElement { lambda: lambda.clone(), max_degree, terms: BTreeMap::new(), truncated: false }
    }

    pub fn scalar(lambda: &Weight, c: Q, max_degree: u32) -> BubbleElement {
        let mut z = Self::zero(lambda, max_degree);
        if !c.is_zero() {
            z.terms.insert(vec![Partition::empty(); lambda.pairings().len()], c);
        }
        z
    }

    pub fn one(lambda: &Weight, max_degree: u32) -> BubbleElement {
        Self::scalar(lambda, Q::one(), max_degree)
    }

    /// x placed in the copy of Sym belonging to `node`.
    pub fn from_node(lambda: &Weight, node: usize, x: &Sym) -> BubbleElement {
        let n = lambda.pairings().len();
        let mut z = Self::zero(lambda, x.max_degree());
        for (p, c) in x.terms() {
            let mut key = vec![Partition::empty(); n];
            key[node] = p.clone();
            z.terms.insert(key, c.clone());
        }
        z.truncated = x.was_truncated();
        z
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Partition>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same element read in another region; used when a bubble crosses
    /// a strand and only its ♠-label is kept.
    pub fn relabel(&self, lambda: &Weight) -> BubbleElement {
        BubbleElement { lambda: lambda.clone(), ..self.clone() }
    }

    /// The part living in a single node, if nothing else is involved.
    pub fn node_part(&self, node: usize) -> Option<Sym> {
        let mut out = Sym::zero(self.max_degree);
        for (key, c) in &self.terms {
            if key.iter().enumerate().any(|(k, p)| k != node && !p.is_empty()) {
                return None;
            }
            out = out.add(&Sym::monomial(key[node].clone(), self.max_degree).scale(c));
        }
        Some(out)
    }

    pub fn add(&self, o: &BubbleElement) -> BubbleElement {
        self.axpy(&Q::one(), o)
    }

    pub fn sub(&self, o: &BubbleElement) -> BubbleElement {
        self.axpy(&Q::int(-1), o)
    }

    fn axpy(&self, c: &Q, o: &BubbleElement) -> BubbleElement {
        let mut out = self.clone();
        out.max_degree = self.max_degree.min(o.max_degree);
        out.truncated |= o.truncated;
        for (k, x) in &o.terms {
            let v = out.terms.entry(k.clone()).or_insert_with(Q::zero);
            *v += &(c * x);
            if v.is_zero() {
                out.terms.remove(k);
            }
        }
        let d = out.max_degree;
        out.terms.retain(|k, _| size(k) <= d);
        out
    }

    pub fn scale(&self, c: &Q) -> BubbleElement {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
        } else {
            for v in out.terms.values_mut() {
                *v = &*v * c;
            }
        }
        out
    }

    pub fn mul(&self, o: &BubbleElement) -> BubbleElement {
        let d = self.max_degree.min(o.max_degree);
        let mut out = Self::zero(&self.lambda, d);
        out.truncated = self.truncated || o.truncated;
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                if size(ka) + size(kb) > d {
                    out.truncated = true;
                    continue;
                }
                let mut acc: Vec<(Vec<Partition>, Q)> = vec![(Vec::new(), ca * cb)];
                for (pa, pb) in ka.iter().zip(kb) {
                    let prod = Sym::monomial(pa.clone(), d).mul(&Sym::monomial(pb.clone(), d));
                    let mut next = Vec::new();
                    for (key, c) in &acc {
                        for (p, x) in prod.terms() {
                            let mut k = key.clone();
                            k.push(p.clone());
                            next.push((k, c * x));
                        }
                    }
                    acc = next;
                }
                for (k, c) in acc {
                    let v = out.terms.entry(k.clone()).or_insert_with(Q::zero);
                    *v += &c;
                    if v.is_zero() {
                        out.terms.remove(&k);
                    }
                }
            }
        }
        out
    }

    /// Per-node text in the h basis; mixed terms are written with
    /// node-tagged monomial symmetric functions.
    pub fn to_text(&self) -> String {
        let n = self.lambda.pairings().len();
        let mut parts = Vec::new();
        let mut constant = Q::zero();
        let mut per_node: Vec<Sym> = vec![Sym::zero(self.max_degree); n];
        let mut mixed = Vec::new();
        for (key, c) in &self.terms {
            let support: Vec<usize> = (0..n).filter(|&k| !key[k].is_empty()).collect();
            match support.len() {
                0 => constant += c,
                1 => {
                    let k = support[0];
                    per_node[k] = per_node[k].add(&Sym::monomial(key[k].clone(), self.max_degree).scale(c));
                }
                _ => {
                    let m: Vec<String> = support.iter().map(|&k| format!("m{}[{}]", k + 1, key[k])).collect();
                    mixed.push(format!("{} * {}", c, m.join(" ")));
                }
            }
        }
        if !constant.is_zero() {
            parts.push(constant.to_string());
        }
        for (k, x) in per_node.iter().enumerate() {
            if !x.is_zero() {
                let t = x.to_text(Basis::H).expect("h basis exists over Q");
                parts.push(format!("node {}: {}", k + 1, t));
            }
        }
        parts.extend(mixed);
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("; ")
        }
    }
}

impl fmt::Display for BubbleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn size(key: &[Partition]) -> u32 {
    key.iter().map(|p| p.size()).sum()
}

fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        Q::int(-1)
    }
}

/// Value of a bubble in region λ, with fake bubbles expanded by their
/// recursion.
pub fn bubble_value(lambda: &Weight, b: &Bubble, max_degree: u32) -> Result<BubbleElement> {
    if b.alpha < 0 {
        return Ok(BubbleElement::zero(lambda, max_degree));
    }
    if b.alpha == 0 {
        return Ok(BubbleElement::one(lambda, max_degree));
    }
    if b.is_fake(lambda) {
        return fake_bubble(b.node, lambda, b.alpha, max_degree);
    }
    let r = b.alpha as u32;
    let x = match b.orientation {
        Orientation::Clockwise => Sym::h(r, max_degree),
        Orientation::Counterclockwise => Sym::e(r, max_degree).scale(&sign(b.alpha)),
    };
    let z = BubbleElement::from_node(lambda, b.node, &x);
    debug_assert!(z.terms.keys().all(|k| size(k) == r));
    Ok(z)
}

/// The fake bubble of degree j at node i: clockwise when ⟨i,λ⟩ < 0,
/// counterclockwise when ⟨i,λ⟩ > 0.
pub fn fake_bubble(node: usize, lambda: &Weight, j: i64, max_degree: u32) -> Result<BubbleElement> {
    if j < 0 {
        return Ok(BubbleElement::zero(lambda, max_degree));
    }
    let n = lambda.pairing(node);
    let limit = n.abs() + 1;
    if j >= limit || (n == 0 && j > 0) {
        return Err(Error::OutOfRange(format!("no fake bubble of degree {} at node {} for weight {}", j, node + 1, lambda.label())));
    }
    if j == 0 {
        return Ok(BubbleElement::one(lambda, max_degree));
    }
    let mut acc = BubbleElement::zero(lambda, max_degree);
    for a in 0..=j {
        let b = j - a;
        let skip = if n < 0 { b < 1 } else { a < 1 };
        if skip {
            continue;
        }
        let cw = bubble_value(lambda, &Bubble::cw(node, a), max_degree)?;
        let ccw = bubble_value(lambda, &Bubble::ccw(node, b), max_degree)?;
        acc = acc.sub(&cw.mul(&ccw));
    }
    Ok(acc)
}

/// Σ_{k ≤ D} Σ_{a+b=k} ccw(♠+b)·cw(♠+a) - 1 at node i, with fake bubbles
/// expanded; zero when the fake bubbles are consistent.
pub fn grassmannian_check(node: usize, lambda: &Weight, d: u32) -> Result<BubbleElement> {
    let mut acc = BubbleElement::one(lambda, d).scale(&Q::int(-1));
    for k in 0..=d as i64 {
        for a in 0..=k {
            let cw = bubble_value(lambda, &Bubble::cw(node, a), d)?;
            let ccw = bubble_value(lambda, &Bubble::ccw(node, k - a), d)?;
            acc = acc.add(&ccw.mul(&cw));
        }
    }
    Ok(acc)
}

/// p_{i,r}(λ); the scalar ⟨i,λ⟩ for r = 0.
pub fn power_sum(node: usize, lambda: &Weight, r: u32) -> Result<BubbleElement> {
    power_sum_form(node, lambda, PowerSumForm::APlusOne, r)
}

/// One of the three coefficient patterns for p_{i,r}(λ), evaluated on
/// bubbles.
pub fn power_sum_form(node: usize, lambda: &Weight, form: PowerSumForm, r: u32) -> Result<BubbleElement> {
    if r == 0 {
        return Ok(BubbleElement::scalar(lambda, Q::int(lambda.pairing(node)), 0));
    }
    let mut acc = BubbleElement::zero(lambda, r);
    for a in 0..=r as i64 {
        let b = r as i64 - a;
        let (coef, cw, ccw) = match form {
            PowerSumForm::APlusOne => (a + 1, a, b),
            PowerSumForm::MinusBPlusOne => (-(b + 1), a, b),
            PowerSumForm::MinusA => (-a, b, a),
        };
        let x = bubble_value(lambda, &Bubble::cw(node, cw), r)?.mul(&bubble_value(lambda, &Bubble::ccw(node, ccw), r)?);
        acc = acc.add(&x.scale(&Q::int(coef)));
    }
    Ok(acc)
}

/// One upward strand of color `color` with `dots` dots; `lambda` labels the
/// region to its right, so the left region is λ + α_color.
#[derive(Clone, Debug, PartialEq)]
pub struct DottedStrandWithBubbles {
    pub color: usize,
    pub dots: u32,
    pub lambda: Weight,
    pub side: Side,
    pub bubbles: BubbleElement,
}

/// Σ_k y^k ⊗ z_k with every z_k on the same side of the strand.
#[derive(Clone, Debug, PartialEq)]
pub struct StrandSum {
    pub color: usize,
    pub lambda: Weight,
    pub side: Side,
    pub terms: BTreeMap<u32, BubbleElement>,
}

impl StrandSum {
    pub fn zero(color: usize, lambda: &Weight, side: Side) -> StrandSum {
        StrandSum { color, lambda: lambda.clone(), side, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|z| z.is_zero())
    }

    pub fn add_term(&mut self, dots: u32, z: &BubbleElement) {
        let cur = match self.terms.remove(&dots) {
            Some(c) => c.add(z),
            None => z.clone(),
        };
        if !cur.is_zero() {
            self.terms.insert(dots, cur);
        }
    }

    pub fn sub(&self, o: &StrandSum) -> StrandSum {
        let mut out = self.clone();
        for (k, z) in &o.terms {
            out.add_term(*k, &z.scale(&Q::int(-1)));
        }
        out
    }

    pub fn mul(&self, o: &StrandSum) -> StrandSum {
        let mut out = StrandSum::zero(self.color, &self.lambda, self.side);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a + b, &x.mul(y));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(k, z)| format!("y^{} ({})", k, z)).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Region weight on a given side of an upward j-strand with λ on its right.
pub fn region(datum: &CartanDatum, color: usize, lambda: &Weight, side: Side) -> Weight {
    match side {
        Side::Right => lambda.clone(),
        Side::Left => lambda.shift_root(datum, color, 1),
    }
}

/// Moves a single bubble across an upward j-strand. Returns
/// (coefficient, dots added on the strand, bubble on the other side).
pub fn slide_single(datum: &CartanDatum, q: &ScalarChoice, color: usize, b: &Bubble, from: Side) -> Vec<(Q, u32, Bubble)> {
    let (i, j) = (b.node, color);
    let alpha = b.alpha;
    let moved = |a: i64| Bubble { alpha: a, ..*b };
    let mut out = Vec::new();
    let mut push = |c: Q, dots: i64, a: i64| {
        if !c.is_zero() && a >= 0 && dots >= 0 {
            out.push((c, dots as u32, moved(a)));
        }
    };
    if i != j && datum.a(i, j) == 0 {
        push(Q::one(), 0, alpha);
        return out;
    }
    use Orientation::*;
    use Side::*;
    if i == j {
        match (b.orientation, from) {
            (Counterclockwise, Right) | (Clockwise, Left) => {
                for f in 0..=alpha {
                    push(Q::int(alpha + 1 - f), alpha - f, f);
                }
            }
            (Clockwise, Right) | (Counterclockwise, Left) => {
                push(Q::one(), 2, alpha - 2);
                push(Q::int(-2), 1, alpha - 1);
                push(Q::one(), 0, alpha);
            }
        }
        return out;
    }
    let v = q.v(i, j);
    match (b.orientation, from) {
        (Counterclockwise, Right) | (Clockwise, Left) => {
            push(Q::one(), 0, alpha);
            push(v, 1, alpha - 1);
        }
        (Clockwise, Right) | (Counterclockwise, Left) => {
            let mv = -v;
            for f in 0..=alpha {
                push(mv.pow(f as u32), f, alpha - f);
            }
        }
    }
    out
}

/// Slides every bubble of `s` to the other side of the strand. Each node
/// factor is written in the h basis and each clockwise bubble is moved by
/// the single-bubble rule.
pub fn bubble_slide(datum: &CartanDatum, q: &ScalarChoice, s: &DottedStrandWithBubbles) -> Result<StrandSum> {
    let to = s.side.other();
    let target = region(datum, s.color, &s.lambda, to);
    let d = s.bubbles.max_degree() + s.dots;
    let mut total = StrandSum::zero(s.color, &s.lambda, to);
    for (key, c) in s.bubbles.terms() {
        let mut acc = StrandSum::zero(s.color, &s.lambda, to);
        acc.add_term(s.dots, &BubbleElement::scalar(&target, c.clone(), d));
        for (node, p) in key.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            let h = Sym::monomial(p.clone(), p.size()).in_basis(Basis::H)?;
            let mut factor = StrandSum::zero(s.color, &s.lambda, to);
            for (nu, x) in &h.terms {
                let mut prod = StrandSum::zero(s.color, &s.lambda, to);
                prod.add_term(0, &BubbleElement::scalar(&target, x.clone(), d));
                for &r in nu.parts() {
                    let moved = slide_bubble_to(datum, q, s.color, &Bubble::cw(node, r as i64), s.side, &target, d)?;
                    prod = prod.mul(&moved);
                }
                for (k, z) in &prod.terms {
                    factor.add_term(*k, z);
                }
            }
            acc = acc.mul(&factor);
        }
        for (k, z) in &acc.terms {
            total.add_term(*k, z);
        }
    }
    Ok(total)
}

/// A single bubble moved across and evaluated in the target region.
pub fn slide_bubble_to(datum: &CartanDatum, q: &ScalarChoice, color: usize, b: &Bubble, from: Side, target: &Weight, d: u32) -> Result<StrandSum> {
    let lambda_right = if from == Side::Left { target.clone() } else { target.shift_root(datum, color, -1) };
    let mut out = StrandSum::zero(color, &lambda_right, from.other());
    for (c, dots, nb) in slide_single(datum, q, color, b, from) {
        out.add_term(dots, &bubble_value(target, &nb, d)?.scale(&c));
    }
    Ok(out)
}

/// p_{i,r}(λ+α_j) on the left of an upward j-strand, slid to the right
/// bubble by bubble, minus p_{i,r}(λ) on the right and the dot correction.
pub fn power_sum_slide_check(datum: &CartanDatum, q: &ScalarChoice, i: usize, j: usize, r: u32, lambda: &Weight) -> Result<StrandSum> {
    let left = region(datum, j, lambda, Side::Left);
    let correction = if i == j {
        Q::int(2)
    } else if datum.a(i, j) == -1 {
        -(-q.v(i, j)).pow(r)
    } else {
        Q::zero()
    };
    let mut lhs = StrandSum::zero(j, lambda, Side::Right);
    if r == 0 {
        lhs.add_term(0, &BubbleElement::scalar(lambda, Q::int(left.pairing(i)), 0));
    } else {
        for a in 0..=r as i64 {
            let b = r as i64 - a;
            let cw = slide_bubble_to(datum, q, j, &Bubble::cw(i, a), Side::Left, lambda, r)?;
            let ccw = slide_bubble_to(datum, q, j, &Bubble::ccw(i, b), Side::Left, lambda, r)?;
            let prod = cw.mul(&ccw);
            for (k, z) in &prod.terms {
                lhs.add_term(*k, &z.scale(&Q::int(a + 1)));
            }
        }
    }
    let mut rhs = StrandSum::zero(j, lambda, Side::Right);
    rhs.add_term(0, &power_sum(i, lambda, r)?.relabel(lambda));
    rhs.add_term(r, &BubbleElement::scalar(lambda, correction, r));
    Ok(lhs.sub(&rhs))
}

#[derive(Clone, Debug, Serialize)]
pub struct BubbleReport {
    pub check: String,
    pub passed: bool,
    pub defect: String,
}

/// Grassmannian consistency and power-sum slides for every node pair.
pub fn bubble_suite(datum: &CartanDatum, q: &ScalarChoice, max_r: u32) -> Result<Vec<BubbleReport>> {
    let mut out = Vec::new();
    let n = datum.rank();
    for i in 0..n {
        for p in -5i64..=5 {
            let mut fund = vec![0; n];
            fund[i] = p;
            let lam = datum.weight(fund, vec![0; n]);
            let z = grassmannian_check(i, &lam, 10)?;
            out.push(BubbleReport { check: format!("grassmannian node {} weight {}", i + 1, lam.label()), passed: z.is_zero(), defect: z.to_text() });
        }
    }
    let lam = datum.weight(vec![0; n], vec![0; n]);
    for i in 0..n {
        for j in 0..n {
            for r in 0..=max_r {
                let z = power_sum_slide_check(datum, q, i, j, r, &lam)?;
                out.push(BubbleReport { check: format!("power sum slide i={} j={} r={}", i + 1, j + 1, r), passed: z.is_zero(), defect: z.to_text() });
            }
        }
    }
    Ok(out)
}
