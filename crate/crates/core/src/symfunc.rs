//! Degree-truncated symmetric functions.
//!
//! Elements are stored in the monomial basis; the h, e and p bases are
//! views computed by exact triangular solves per degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{add_entry, solve_sparse, SparseVec};
use crate::scalar::Field;

/// Integer partition with parts in weakly decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// parts as a multiset: value -> multiplicity
    fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// All partitions of `n`, in increasing lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn binom_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of distinct arrangements of `p` padded with zeros to `slots`.
fn arrangements(p: &Partition, slots: usize) -> BigInt {
    let mut den = factorial_big(slots - p.len());
    for (_, m) in p.multiplicities() {
        den *= factorial_big(m);
    }
    factorial_big(slots) / den
}

/// Monomial expansion of m_λ · m_μ.
pub fn monomial_product(lam: &Partition, mu: &Partition) -> BTreeMap<Partition, BigInt> {
    let slots = lam.len() + mu.len();
    // state: (value, used) -> count
    type State = BTreeMap<(u32, bool), usize>;
    let mut init: State = BTreeMap::new();
    for (v, m) in lam.multiplicities() {
        init.insert((v, false), m);
    }
    *init.entry((0, false)).or_insert(0) += mu.len();
    let mut states: BTreeMap<State, BigInt> = BTreeMap::from([(init, BigInt::one())]);
    for (u, k) in mu.multiplicities() {
        let mut next: BTreeMap<State, BigInt> = BTreeMap::new();
        for (st, w) in &states {
            let free: Vec<(u32, usize)> = st.iter().filter(|((_, used), _)| !used).map(|((v, _), c)| (*v, *c)).collect();
            distribute(&free, k, 0, &mut Vec::new(), &mut |choice| {
                let mut ns = st.clone();
                let mut weight = w.clone();
                for (idx, &c) in choice.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let (v, cnt) = free[idx];
                    weight *= binom_big(cnt, c);
                    let e = ns.get_mut(&(v, false)).unwrap();
                    *e -= c;
                    if *e == 0 {
                        ns.remove(&(v, false));
                    }
                    *ns.entry((v + u, true)).or_insert(0) += c;
                }
                *next.entry(ns).or_insert_with(BigInt::zero) += weight;
            });
        }
        states = next;
    }
    let lam_arr = arrangements(lam, slots);
    let mut out: BTreeMap<Partition, BigInt> = BTreeMap::new();
    for (st, w) in states {
        let mut parts = Vec::new();
        for ((v, _), c) in st {
            for _ in 0..c {
                parts.push(v);
            }
        }
        let nu = Partition::new(parts);
        *out.entry(nu).or_insert_with(BigInt::zero) += w;
    }
    out.into_iter()
        .map(|(nu, cnt)| {
            let coeff = cnt * &lam_arr / arrangements(&nu, slots);
            (nu, coeff)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn distribute(free: &[(u32, usize)], k: usize, idx: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if idx == free.len() {
        if k == 0 {
            f(cur);
        }
        return;
    }
    let rest: usize = free[idx + 1..].iter().map(|x| x.1).sum();
    let lo = k.saturating_sub(rest);
    for c in lo..=k.min(free[idx].1) {
        cur.push(c);
        distribute(free, k - c, idx + 1, cur, f);
        cur.pop();
    }
}

fn big_to_field<F: Field>(b: &BigInt) -> F {
    match b.to_i64() {
        Some(v) => F::from_i64(v),
        None => {
            // split into base 2^32 digits
            let base = F::from_i64(1 << 32);
            let (sign, digits) = b.to_u32_digits();
            let mut acc = F::zero();
            for d in digits.iter().rev() {
                acc = acc.mul(&base).add(&F::from_i64(*d as i64));
            }
            if sign == num_bigint::Sign::Minus {
                acc.neg()
            } else {
                acc
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    H,
    E,
    P,
    M,
}

impl Basis {
    pub fn tag(&self) -> char {
        match self {
            Basis::H => 'h',
            Basis::E => 'e',
            Basis::P => 'p',
            Basis::M => 'm',
        }
    }

    pub fn from_tag(c: char) -> Option<Basis> {
        match c {
            'h' => Some(Basis::H),
            'e' => Some(Basis::E),
            'p' => Some(Basis::P),
            'm' => Some(Basis::M),
            _ => None,
        }
    }
}

/// Coefficients of an element in a chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion<F: Field> {
    pub basis: Basis,
    pub terms: BTreeMap<Partition, F>,
    pub max_degree: u32,
}

/// Symmetric function truncated above `max_degree`.
#[derive(Clone, Debug)]
pub struct SymElement<F: Field> {
    terms: BTreeMap<Partition, F>,
    max_degree: u32,
    truncated: bool,
}

impl<F: Field> PartialEq for SymElement<F> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}
impl<F: Field> Eq for SymElement<F> {}

impl<F: Field> SymElement<F> {
    pub fn zero(max_degree: u32) -> Self {
        SymElement { terms: BTreeMap::new(), max_degree, truncated: false }
    }

    pub fn scalar(c: F, max_degree: u32) -> Self {
        let mut s = Self::zero(max_degree);
        if !c.is_zero() {
            s.terms.insert(Partition::empty(), c);
        }
        s
    }

    pub fn one(max_degree: u32) -> Self {
        Self::scalar(F::one(), max_degree)
    }

    pub fn monomial(p: Partition, max_degree: u32) -> Self {
        let mut s = Self::zero(max_degree);
        if p.size() <= max_degree {
            s.terms.insert(p, F::one());
        } else {
            s.truncated = true;
        }
        s
    }

    /// Complete homogeneous h_r (zero for r < 0 is handled by callers).
    pub fn h(r: u32, max_degree: u32) -> Self {
        let mut s = Self::zero(max_degree);
        if r > max_degree {
            s.truncated = true;
            return s;
        }
        for p in partitions_of(r) {
            s.terms.insert(p, F::one());
        }
        s
    }

    pub fn e(r: u32, max_degree: u32) -> Self {
        Self::monomial(Partition::new(vec![1; r as usize]), max_degree)
    }

    pub fn p(r: u32, max_degree: u32) -> Self {
        if r == 0 {
            // p_0 is not used; by convention return the number of variables is undefined
            return Self::one(max_degree);
        }
        Self::monomial(Partition::new(vec![r]), max_degree)
    }

    pub fn generator(b: Basis, r: u32, max_degree: u32) -> Self {
        match b {
            Basis::H => Self::h(r, max_degree),
            Basis::E => Self::e(r, max_degree),
            Basis::P => Self::p(r, max_degree),
            Basis::M => Self::monomial(Partition::new(vec![r]), max_degree),
        }
    }

    /// b_λ: the product of generators for multiplicative bases, m_λ for M.
    pub fn basis_element(b: Basis, p: &Partition, max_degree: u32) -> Self {
        if b == Basis::M {
            return Self::monomial(p.clone(), max_degree);
        }
        let mut acc = Self::one(max_degree);
        for &r in p.parts() {
            acc = acc.mul(&Self::generator(b, r, max_degree));
        }
        acc
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomial-basis coefficients.
    pub fn terms(&self) -> &BTreeMap<Partition, F> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Partition) -> F {
        self.terms.get(p).cloned().unwrap_or_else(F::zero)
    }

    pub fn with_max_degree(&self, d: u32) -> Self {
        let mut s = self.clone();
        if d < s.max_degree {
            let before = s.terms.len();
            s.terms.retain(|p, _| p.size() <= d);
            s.truncated |= s.terms.len() != before;
        }
        s.max_degree = d;
        s
    }

    pub fn degree_part(&self, d: u32) -> Self {
        SymElement {
            terms: self.terms.iter().filter(|(p, _)| p.size() == d).map(|(p, c)| (p.clone(), c.clone())).collect(),
            max_degree: self.max_degree,
            truncated: self.truncated,
        }
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|p| p.size() == d)
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.max_degree.min(o.max_degree);
        let mut terms = self.terms.clone();
        for (p, c) in &o.terms {
            add_entry(&mut terms, p.clone(), c.clone());
        }
        SymElement { terms, max_degree: self.max_degree, truncated: self.truncated || o.truncated }.with_max_degree(d)
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return SymElement { terms: BTreeMap::new(), max_degree: self.max_degree, truncated: self.truncated };
        }
        SymElement {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x.mul(c))).collect(),
            max_degree: self.max_degree,
            truncated: self.truncated,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.max_degree.min(o.max_degree);
        let mut terms: BTreeMap<Partition, F> = BTreeMap::new();
        let mut truncated = self.truncated || o.truncated;
        for (p, a) in &self.terms {
            for (q, b) in &o.terms {
                if p.size() + q.size() > d {
                    truncated = true;
                    continue;
                }
                let ab = a.mul(b);
                if p.is_empty() {
                    add_entry(&mut terms, q.clone(), ab);
                    continue;
                }
                if q.is_empty() {
                    add_entry(&mut terms, p.clone(), ab);
                    continue;
                }
                for (nu, c) in monomial_product(p, q) {
                    add_entry(&mut terms, nu, ab.mul(&big_to_field::<F>(&c)));
                }
            }
        }
        SymElement { terms, max_degree: d, truncated }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.max_degree);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coordinates in basis `b`.
    pub fn in_basis(&self, b: Basis) -> Result<Expansion<F>> {
        if b == Basis::P && F::characteristic() != 0 {
            return Err(Error::UnsupportedBasis(format!("power sums need characteristic 0, scalars have characteristic {}", F::characteristic())));
        }
        if b == Basis::M {
            return Ok(Expansion { basis: b, terms: self.terms.clone(), max_degree: self.max_degree });
        }
        let mut out = BTreeMap::new();
        let top = self.terms.keys().map(|p| p.size()).max();
        let top = match top {
            Some(t) => t,
            None => return Ok(Expansion { basis: b, terms: out, max_degree: self.max_degree }),
        };
        for d in 0..=top {
            let part = self.degree_part(d);
            if part.is_zero() {
                continue;
            }
            let parts = partitions_of(d);
            let index: BTreeMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
            // columns b_λ in monomial coordinates; build row equations
            let mut rows: Vec<SparseVec<usize, F>> = vec![BTreeMap::new(); parts.len()];
            for (col, lam) in parts.iter().enumerate() {
                let bl = Self::basis_element(b, lam, d);
                for (mu, c) in bl.terms() {
                    rows[index[mu]].insert(col, c.clone());
                }
            }
            let eqs: Vec<(SparseVec<usize, F>, F)> = parts.iter().enumerate().map(|(r, mu)| (rows[r].clone(), part.coefficient(mu))).collect();
            let x = solve_sparse(&eqs, parts.len())
                .ok_or_else(|| Error::UnsupportedBasis(format!("{}-basis is not a basis in degree {} over these scalars", b.tag(), d)))?;
            for (i, c) in x.into_iter().enumerate() {
                if !c.is_zero() {
                    out.insert(parts[i].clone(), c);
                }
            }
        }
        Ok(Expansion { basis: b, terms: out, max_degree: self.max_degree })
    }

    pub fn from_expansion(x: &Expansion<F>) -> Self {
        let mut acc = Self::zero(x.max_degree);
        for (p, c) in &x.terms {
            acc = acc.add(&Self::basis_element(x.basis, p, x.max_degree).scale(c));
        }
        acc
    }

    /// Round trip through another basis; returns the same element.
    pub fn convert(&self, b: Basis) -> Result<Self> {
        Ok(Self::from_expansion(&self.in_basis(b)?))
    }

    pub fn to_text(&self, b: Basis) -> Result<String> {
        Ok(expansion_text(&self.in_basis(b)?))
    }

    /// Parses the text format, e.g. `3*h[2] - 2*h[1]e[1] + e[2]`.
    pub fn parse(s: &str, max_degree: u32) -> Result<Self>
    where
        F: std::str::FromStr<Err = Error>,
    {
        parse_sym(s, max_degree)
    }
}

pub fn expansion_text<F: Field>(x: &Expansion<F>) -> String {
    if x.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    // print in increasing degree, then partition order
    let mut keys: Vec<&Partition> = x.terms.keys().collect();
    keys.sort_by(|a, b| (a.size(), *a).cmp(&(b.size(), *b)));
    for (n, p) in keys.into_iter().enumerate() {
        let c = &x.terms[p];
        let text = c.to_string();
        let (neg, abs) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if p.is_empty() {
            out.push_str(&abs);
        } else {
            if abs != "1" {
                out.push_str(&abs);
                out.push('*');
            }
            out.push_str(&format!("{}[{}]", x.basis.tag(), p));
        }
    }
    out
}

fn parse_sym<F: Field + std::str::FromStr<Err = Error>>(s: &str, max_degree: u32) -> Result<SymElement<F>> {
    let err = |m: &str| Error::Parse(format!("symmetric function '{}': {}", s, m));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty input"));
    }
    let mut pos = 0usize;
    let mut total = SymElement::zero(max_degree);
    let mut first = true;
    while pos < chars.len() {
        let mut sign = F::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = sign.neg();
            }
            pos += 1;
        } else if !first {
            return Err(err("expected + or -"));
        }
        first = false;
        // coefficient
        let start = pos;
        while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
            pos += 1;
        }
        let mut term = SymElement::one(max_degree);
        let mut have_any = false;
        let mut star = false;
        if pos > start {
            let c: F = chars[start..pos].iter().collect::<String>().parse()?;
            term = term.scale(&c);
            have_any = true;
        }
        loop {
            if pos < chars.len() && chars[pos] == '*' && have_any && !star {
                pos += 1;
                star = true;
            }
            let b = match chars.get(pos).and_then(|&c| Basis::from_tag(c)) {
                Some(b) => b,
                None if star => return Err(err("dangling '*'")),
                None => break,
            };
            star = false;
            pos += 1;
            if pos >= chars.len() || chars[pos] != '[' {
                return Err(err("expected '['"));
            }
            pos += 1;
            let start = pos;
            while pos < chars.len() && chars[pos] != ']' {
                pos += 1;
            }
            if pos >= chars.len() {
                return Err(err("unclosed '['"));
            }
            let inner: String = chars[start..pos].iter().collect();
            pos += 1;
            let parts: Vec<u32> = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|t| t.parse::<u32>().map_err(|_| err("bad index"))).collect::<Result<_>>()?
            };
            if b == Basis::M && parts.windows(2).any(|w| w[0] < w[1]) {
                return Err(err("monomial index must be a partition"));
            }
            term = term.mul(&SymElement::basis_element(b, &Partition::new(parts), max_degree));
            have_any = true;
        }
        if !have_any {
            return Err(err("empty term"));
        }
        total = total.add(&term.scale(&sign));
    }
    Ok(total)
}

/// Σ_{k ≤ D} Σ_{r+s=k} (-1)^s e_s h_r minus the unit.
pub fn grassmannian_defect<F: Field>(d: u32) -> SymElement<F> {
    let mut acc = SymElement::<F>::one(d).neg();
    for k in 0..=d {
        for s in 0..=k {
            let r = k - s;
            let t = SymElement::<F>::e(s, d).mul(&SymElement::h(r, d));
            acc = if s % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
    }
    acc
}

/// Σ_{a+b=r} (a+1)(-1)^b h_a e_b.
pub fn power_sum_via_he<F: Field>(r: u32) -> SymElement<F> {
    power_sum_form(PowerSumForm::APlusOne, r)
}

/// The three coefficient patterns of the bubble power-sum formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSumForm {
    /// Σ (a+1) h_a (-1)^b e_b
    APlusOne,
    /// -Σ (b+1) h_a (-1)^b e_b
    MinusBPlusOne,
    /// -Σ a h_b (-1)^a e_a
    MinusA,
}

pub fn power_sum_form<F: Field>(form: PowerSumForm, r: u32) -> SymElement<F> {
    let mut acc = SymElement::<F>::zero(r);
    for a in 0..=r {
        let b = r - a;
        let sign = if b % 2 == 0 { F::one() } else { F::one().neg() };
        let (coef, hdeg, edeg, sgn) = match form {
            PowerSumForm::APlusOne => (F::from_i64(a as i64 + 1), a, b, sign),
            PowerSumForm::MinusBPlusOne => (F::from_i64(-(b as i64 + 1)), a, b, sign),
            PowerSumForm::MinusA => {
                let s = if a % 2 == 0 { F::one() } else { F::one().neg() };
                (F::from_i64(-(a as i64)), b, a, s)
            }
        };
        let t = SymElement::<F>::h(hdeg, r).mul(&SymElement::e(edeg, r)).scale(&coef.mul(&sgn));
        acc = acc.add(&t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Q};

    type S = SymElement<Q>;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0).len(), 1);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(partitions_of(10).len(), 42);
    }

    #[test]
    fn monomial_products_small() {
        // m_1 * m_1 = m_2 + 2 m_11
        let p = monomial_product(&Partition::new(vec![1]), &Partition::new(vec![1]));
        assert_eq!(p[&Partition::new(vec![2])], BigInt::from(2) / 2);
        assert_eq!(p[&Partition::new(vec![1, 1])], BigInt::from(2));
        // m_1 * m_11 = m_21 + 3 m_111
        let p = monomial_product(&Partition::new(vec![1]), &Partition::new(vec![1, 1]));
        assert_eq!(p[&Partition::new(vec![2, 1])], BigInt::from(1));
        assert_eq!(p[&Partition::new(vec![1, 1, 1])], BigInt::from(3));
    }

    #[test]
    fn h2_in_power_sums() {
        let h2 = S::h(2, 4).in_basis(Basis::P).unwrap();
        assert_eq!(h2.terms[&Partition::new(vec![1, 1])], Q::new(1, 2));
        assert_eq!(h2.terms[&Partition::new(vec![2])], Q::new(1, 2));
        let e2 = S::e(2, 4).in_basis(Basis::P).unwrap();
        assert_eq!(e2.terms[&Partition::new(vec![2])], Q::new(-1, 2));
    }

    #[test]
    fn text_round_trip() {
        let x = S::parse("3*h[2] - 2*h[1]e[1] + e[2]", 4).unwrap();
        for b in [Basis::H, Basis::E, Basis::P, Basis::M] {
            let t = x.to_text(b).unwrap();
            assert_eq!(S::parse(&t, 4).unwrap(), x, "basis {:?}: {}", b, t);
        }
        assert_eq!(x, S::p(2, 4));
    }

    #[test]
    fn prime_field_rejects_power_sums() {
        let x = SymElement::<Fp<5>>::h(2, 3);
        assert!(matches!(x.in_basis(Basis::P), Err(Error::UnsupportedBasis(_))));
        assert!(x.in_basis(Basis::E).is_ok());
    }

    #[test]
    fn truncation_recorded() {
        let a = S::h(2, 3);
        let b = a.mul(&a);
        assert!(b.is_zero());
        assert!(b.was_truncated());
    }
}
