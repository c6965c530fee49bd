//! Word-level models of two infinitely generated monoids, truncated to
//! generators indexed `0..=k`, with normal forms from confluent
//! length-non-increasing rewriting systems.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

pub type Word = Vec<u32>;

/// Longest words the bounded enumerations accept.
pub const MAX_WORD_LEN: usize = 8;

pub trait WordMonoid {
    fn alphabet_len(&self) -> u32;
    fn letter_name(&self, a: u32) -> String;
    fn normalize(&self, w: &[u32]) -> Word;

    fn render(&self, w: &[u32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&a| self.letter_name(a)).collect::<Vec<_>>().join(" ")
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Word {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.normalize(&w)
    }
}

/// Generators `x_0..x_k, y` with `x_n y = x_0 y`.
#[derive(Clone, Copy, Debug)]
pub struct MonoidXY {
    pub k: u32,
}

impl MonoidXY {
    pub fn x(&self, n: u32) -> u32 {
        n
    }

    pub fn y(&self) -> u32 {
        self.k + 1
    }
}

impl WordMonoid for MonoidXY {
    fn alphabet_len(&self) -> u32 {
        self.k + 2
    }

    fn letter_name(&self, a: u32) -> String {
        if a == self.y() {
            "y".into()
        } else {
            format!("x{a}")
        }
    }

    fn normalize(&self, w: &[u32]) -> Word {
        let mut out = w.to_vec();
        for i in 0..out.len().saturating_sub(1) {
            if out[i + 1] == self.y() && out[i] != self.y() {
                out[i] = self.x(0);
            }
        }
        out
    }
}

/// Generators `x_n, y_n (0 ≤ n ≤ k), z, w` with `x_n y_n z = z` and `y_n w = w`.
#[derive(Clone, Copy, Debug)]
pub struct MonoidXYZW {
    pub k: u32,
}

impl MonoidXYZW {
    pub fn x(&self, n: u32) -> u32 {
        n
    }

    pub fn y(&self, n: u32) -> u32 {
        self.k + 1 + n
    }

    pub fn z(&self) -> u32 {
        2 * self.k + 2
    }

    pub fn w(&self) -> u32 {
        2 * self.k + 3
    }
}

impl WordMonoid for MonoidXYZW {
    fn alphabet_len(&self) -> u32 {
        2 * self.k + 4
    }

    fn letter_name(&self, a: u32) -> String {
        if a <= self.k {
            format!("x{a}")
        } else if a <= 2 * self.k + 1 {
            format!("y{}", a - self.k - 1)
        } else if a == self.z() {
            "z".into()
        } else {
            "w".into()
        }
    }

    // Left sides never overlap, so reducing at the top of a stack gives the
    // unique normal form; a reduction only ever re-exposes z or w on top.
    fn normalize(&self, word: &[u32]) -> Word {
        let mut st: Vec<u32> = Vec::with_capacity(word.len());
        for &a in word {
            st.push(a);
            loop {
                let len = st.len();
                let top = st[len - 1];
                if top == self.z() && len >= 3 {
                    let (xa, ya) = (st[len - 3], st[len - 2]);
                    if xa <= self.k && ya == self.y(xa) {
                        st.truncate(len - 3);
                        st.push(self.z());
                        continue;
                    }
                }
                if top == self.w() && len >= 2 {
                    let ya = st[len - 2];
                    if ya > self.k && ya <= 2 * self.k + 1 {
                        st.truncate(len - 2);
                        st.push(self.w());
                        continue;
                    }
                }
                break;
            }
        }
        st
    }
}

fn check_len(max_len: usize) -> Result<()> {
    if max_len > MAX_WORD_LEN {
        return Err(Error::TooLarge(format!("word length {max_len} (at most {MAX_WORD_LEN})")));
    }
    Ok(())
}

/// Normal forms of all products of `gens` whose unreduced length is at most
/// `max_len`.
pub fn bounded_submonoid<M: WordMonoid>(m: &M, gens: &[Word], max_len: usize) -> Result<HashSet<Word>> {
    check_len(max_len)?;
    let mut seen: HashSet<(Word, usize)> = HashSet::new();
    let mut out: HashSet<Word> = HashSet::new();
    let mut stack = vec![(Word::new(), 0usize)];
    while let Some((w, raw)) = stack.pop() {
        if !seen.insert((w.clone(), raw)) {
            continue;
        }
        out.insert(w.clone());
        for g in gens {
            if !g.is_empty() && raw + g.len() <= max_len {
                stack.push((m.mul(&w, g), raw + g.len()));
            }
        }
    }
    Ok(out)
}

/// Letters `a` with `a·u ∈ M0` for some `u ∈ M0`, where `M0` is generated by
/// `gens` and both sides are explored up to `max_len`.
pub fn meeting_letters<M: WordMonoid>(m: &M, gens: &[Word], max_len: usize) -> Result<Vec<u32>> {
    let sub = bounded_submonoid(m, gens, max_len)?;
    Ok((0..m.alphabet_len())
        .filter(|&a| sub.iter().any(|u| u.len() < max_len && sub.contains(&m.mul(&[a], u))))
        .collect())
}

/// Searches single words of length ≤ `word_len` for a one-generator `M0`
/// whose meeting letters include every letter. The relations preserve or
/// shrink length and every letter is irreducible, so a generating set must
/// contain all letters.
pub fn single_generator_fgm0<M: WordMonoid>(m: &M, word_len: usize, max_len: usize) -> Result<Option<Word>> {
    let n = m.alphabet_len();
    let mut words: Vec<Word> = (0..n).map(|a| vec![a]).collect();
    let mut frontier = words.clone();
    for _ in 1..word_len {
        frontier = frontier
            .iter()
            .flat_map(|w| (0..n).map(move |a| {
                let mut v = w.clone();
                v.push(a);
                v
            }))
            .collect();
        words.extend(frontier.iter().cloned());
    }
    let mut tried = HashSet::new();
    for w in words {
        let w = m.normalize(&w);
        if w.is_empty() || !tried.insert(w.clone()) {
            continue;
        }
        if meeting_letters(m, &[w.clone()], max_len)?.len() as u32 == n {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Right-division closure from `seeds`, in rounds. Each round adds products
/// of current members (unreduced length ≤ `max_len`) and every candidate word
/// of length ≤ `cand_len` that right-divides a member by a member. Returns,
/// for each letter reached, the first round containing it.
pub fn division_rounds<M: WordMonoid>(
    m: &M,
    seeds: &[Word],
    cand_len: usize,
    max_len: usize,
    max_rounds: usize,
) -> Result<BTreeMap<u32, usize>> {
    check_len(max_len)?;
    let n = m.alphabet_len();
    let mut cands: Vec<Word> = (0..n).map(|a| vec![a]).collect();
    if cand_len >= 2 {
        for a in 0..n {
            for b in 0..n {
                cands.push(m.normalize(&[a, b]));
            }
        }
    }
    if cand_len > 2 {
        return Err(Error::TooLarge("candidate words longer than 2".into()));
    }
    let mut members: HashSet<Word> = seeds.iter().map(|s| m.normalize(s)).collect();
    members.insert(Word::new());
    let mut reached = BTreeMap::new();
    for round in 1..=max_rounds {
        let current: Vec<Word> = members.iter().cloned().collect();
        let mut next = members.clone();
        for a in &current {
            for b in &current {
                if a.len() + b.len() <= max_len {
                    next.insert(m.mul(a, b));
                }
            }
        }
        for c in &cands {
            if members.contains(c) {
                continue;
            }
            if current.iter().any(|b| members.contains(&m.mul(c, b))) {
                next.insert(c.clone());
            }
        }
        members = next;
        for a in 0..n {
            if members.contains(&vec![a]) {
                reached.entry(a).or_insert(round);
            }
        }
        if reached.len() as u32 == n {
            break;
        }
    }
    Ok(reached)
}
