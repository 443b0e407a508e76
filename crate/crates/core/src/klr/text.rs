//! Text form of KLR elements, e.g. `2 * psi[2,1] y[0,1,0] e(i,j,i) - e(i,i,j)`.
//! Crossing indices are 1-based; `e(...)` lists node labels bottom to top.

use super::{Diagram, Element, KlrAlgebra, Lin};
use crate::error::{Error, Result};
use crate::linalg::add_entry;
use crate::scalar::Q;

pub(super) fn format_diagram(alg: &KlrAlgebra, d: &Diagram) -> String {
    let mut parts = Vec::new();
    let word = alg.perms.canonical_word(d.perm);
    if !word.is_empty() {
        let w: Vec<String> = word.iter().map(|k| (k + 1).to_string()).collect();
        parts.push(format!("psi[{}]", w.join(",")));
    }
    if d.dots.iter().any(|&a| a > 0) {
        let y: Vec<String> = d.dots.iter().map(|a| a.to_string()).collect();
        parts.push(format!("y[{}]", y.join(",")));
    }
    let e: Vec<&str> = alg.seq(d.src).iter().map(|&c| alg.datum.name(c as usize)).collect();
    parts.push(format!("e({})", e.join(",")));
    parts.join(" ")
}

pub(super) fn format_element(alg: &KlrAlgebra, x: &Element) -> String {
    if x.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (d, c)) in x.terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format!("{} * ", abs));
        }
        out.push_str(&format_diagram(alg, d));
    }
    out
}

fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '[' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse("unbalanced brackets".into()));
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    terms.push((neg, cur.trim().to_string()));
                } else if ch == '-' && !terms.is_empty() && cur.trim().is_empty() && neg {
                    return Err(Error::Parse("doubled sign".into()));
                }
                cur.clear();
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced brackets".into()));
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse("dangling sign or empty input".into()));
    }
    terms.push((neg, cur.trim().to_string()));
    Ok(terms)
}

fn parse_list<T: std::str::FromStr>(body: &str, what: &str) -> Result<Vec<T>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',').map(|t| t.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad {} entry '{}'", what, t.trim())))).collect()
}

fn parse_term(alg: &KlrAlgebra, s: &str) -> Result<(Q, Lin)> {
    let mut rest = s.trim();
    let mut coeff = Q::one();
    let first = rest.chars().next().ok_or_else(|| Error::Parse("empty term".into()))?;
    if first.is_ascii_digit() {
        let end = rest.find(|c: char| !(c.is_ascii_digit() || c == '/')).unwrap_or(rest.len());
        coeff = rest[..end].parse::<Q>().map_err(|_| Error::Parse(format!("bad coefficient '{}'", &rest[..end])))?;
        rest = rest[end..].trim_start();
        if let Some(r) = rest.strip_prefix('*') {
            rest = r.trim_start();
        }
        if rest.is_empty() {
            return Err(Error::Parse("scalar term without idempotent".into()));
        }
    }
    let mut word: Option<Vec<u8>> = None;
    let mut dots: Option<Vec<u8>> = None;
    let mut seq: Option<Vec<u8>> = None;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("psi[") {
            let end = r.find(']').ok_or_else(|| Error::Parse("unterminated psi[".into()))?;
            let w: Vec<usize> = parse_list(&r[..end], "psi")?;
            if word.is_some() || seq.is_some() || dots.is_some() {
                return Err(Error::Parse("psi must come first".into()));
            }
            let mut v = Vec::new();
            for k in w {
                if k == 0 || k >= alg.n {
                    return Err(Error::OutOfRange(format!("crossing {} on {} strands", k, alg.n)));
                }
                v.push((k - 1) as u8);
            }
            word = Some(v);
            rest = r[end + 1..].trim_start();
        } else if let Some(r) = rest.strip_prefix("y[") {
            let end = r.find(']').ok_or_else(|| Error::Parse("unterminated y[".into()))?;
            let y: Vec<u8> = parse_list(&r[..end], "y")?;
            if y.len() != alg.n {
                return Err(Error::OutOfRange(format!("y[...] needs {} entries", alg.n)));
            }
            if dots.is_some() || seq.is_some() {
                return Err(Error::Parse("y must precede e(...)".into()));
            }
            dots = Some(y);
            rest = r[end + 1..].trim_start();
        } else if let Some(r) = rest.strip_prefix("e(") {
            let end = r.find(')').ok_or_else(|| Error::Parse("unterminated e(".into()))?;
            let labels: Vec<String> = parse_list(&r[..end], "e")?;
            let mut v = Vec::new();
            for l in labels {
                let i = alg.datum.index_of(&l).ok_or_else(|| Error::Parse(format!("unknown node '{}'", l)))?;
                v.push(i as u8);
            }
            if seq.is_some() {
                return Err(Error::Parse("two idempotents in one term".into()));
            }
            seq = Some(v);
            rest = r[end + 1..].trim_start();
        } else {
            return Err(Error::Parse(format!("unexpected '{}'", rest)));
        }
    }
    let seq = seq.ok_or_else(|| Error::Parse("term lacks e(...)".into()))?;
    if alg.seq_id(&seq).is_none() {
        return Err(Error::ContextMismatch(format!("idempotent {:?} has the wrong weight", seq)));
    }
    let x = alg.from_word(&word.unwrap_or_default(), &dots.unwrap_or_else(|| vec![0; alg.n]), &seq)?;
    Ok((coeff, x.terms))
}

pub(super) fn parse_element(alg: &KlrAlgebra, s: &str) -> Result<Element> {
    if s.trim() == "0" {
        return Ok(alg.zero());
    }
    let mut total = Lin::new();
    for (neg, t) in split_terms(s)? {
        let (c, lin) = parse_term(alg, &t)?;
        let c = if neg { -c } else { c };
        for (d, x) in lin {
            add_entry(&mut total, d, &c * &x);
        }
    }
    Ok(alg.element(total))
}
