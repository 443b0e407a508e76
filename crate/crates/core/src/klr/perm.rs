//! Permutations of n strands with canonical (lexicographically smallest)
//! reduced words.
//!
//! A permutation `w` sends bottom positions to top positions. The word
//! `k_1 k_2 ... k_m` (read top to bottom) denotes `s_{k_1} ∘ ... ∘ s_{k_m}`,
//! where `s_k` swaps positions `k` and `k+1` (0-based).

use std::collections::HashMap;

pub type PermId = u16;

#[derive(Clone, Debug)]
pub struct PermTable {
    n: usize,
    perms: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, PermId>,
    length: Vec<u16>,
    canon: Vec<Vec<u8>>,
    /// left[k][w] = s_k ∘ w
    left: Vec<Vec<PermId>>,
}

fn inversions(p: &[u8]) -> u16 {
    let mut c = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                c += 1;
            }
        }
    }
    c
}

fn all_perms(n: usize) -> Vec<Vec<u8>> {
    fn rec(cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v as u8);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl PermTable {
    pub fn new(n: usize) -> PermTable {
        let mut perms = all_perms(n);
        perms.sort_by(|a, b| (inversions(a), a).cmp(&(inversions(b), b)));
        let index: HashMap<Vec<u8>, PermId> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as PermId)).collect();
        let length: Vec<u16> = perms.iter().map(|p| inversions(p)).collect();
        let left: Vec<Vec<PermId>> = (0..n.saturating_sub(1))
            .map(|k| {
                perms
                    .iter()
                    .map(|p| {
                        let q: Vec<u8> = p
                            .iter()
                            .map(|&t| {
                                if t as usize == k {
                                    (k + 1) as u8
                                } else if t as usize == k + 1 {
                                    k as u8
                                } else {
                                    t
                                }
                            })
                            .collect();
                        index[&q]
                    })
                    .collect()
            })
            .collect();
        let mut t = PermTable { n, perms, index, length, canon: Vec::new(), left };
        t.canon = (0..t.perms.len()).map(|w| t.compute_canon(w as PermId)).collect();
        t
    }

    fn compute_canon(&self, w: PermId) -> Vec<u8> {
        let mut word = Vec::new();
        let mut cur = w;
        while self.length[cur as usize] > 0 {
            let k = (0..self.n - 1).find(|&k| self.is_left_descent(k as u8, cur)).unwrap();
            word.push(k as u8);
            cur = self.left[k][cur as usize];
        }
        word
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.perms.len()
    }

    pub fn identity(&self) -> PermId {
        0
    }

    pub fn image(&self, w: PermId) -> &[u8] {
        &self.perms[w as usize]
    }

    pub fn id_of(&self, images: &[u8]) -> Option<PermId> {
        self.index.get(images).copied()
    }

    pub fn length(&self, w: PermId) -> usize {
        self.length[w as usize] as usize
    }

    pub fn canonical_word(&self, w: PermId) -> &[u8] {
        &self.canon[w as usize]
    }

    pub fn left_mul(&self, k: u8, w: PermId) -> PermId {
        self.left[k as usize][w as usize]
    }

    /// s_k is a left descent of w: the strands ending at k and k+1 cross.
    pub fn is_left_descent(&self, k: u8, w: PermId) -> bool {
        self.length[self.left[k as usize][w as usize] as usize] < self.length[w as usize]
    }

    pub fn from_word(&self, word: &[u8]) -> PermId {
        let mut w = self.identity();
        for &k in word.iter().rev() {
            w = self.left_mul(k, w);
        }
        w
    }

    pub fn is_reduced(&self, word: &[u8]) -> bool {
        self.length(self.from_word(word)) == word.len()
    }

    /// Target sequence: t[w(p)] = s[p].
    pub fn act(&self, w: PermId, seq: &[u8]) -> Vec<u8> {
        let img = self.image(w);
        let mut t = vec![0u8; seq.len()];
        for (p, &c) in seq.iter().enumerate() {
            t[img[p] as usize] = c;
        }
        t
    }

    /// Permutation of n+1 strands agreeing with w and fixing the last.
    pub fn extend_images(&self, w: PermId) -> Vec<u8> {
        let mut v = self.image(w).to_vec();
        v.push(self.n as u8);
        v
    }
}
