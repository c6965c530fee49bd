use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A validated finite partial order. `down[e]` is the principal down-set of `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    down: Vec<BitSet>,
    index: HashMap<String, usize>,
}

impl Poset {
    /// Builds the poset generated by `pairs` (each `(a, b)` meaning `a ≤ b`):
    /// the reflexive-transitive closure is taken, then antisymmetry checked.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut down: Vec<BitSet> = (0..n).map(|i| BitSet::from_iter(n, [i])).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset("relation pair out of range".into()));
            }
            down[b].insert(a);
        }
        // Warshall closure on down-sets
        for k in 0..n {
            let dk = down[k].clone();
            for e in 0..n {
                if down[e].contains(k) {
                    down[e].union_with(&dk);
                }
            }
        }
        Self::from_down_sets(names, down)
    }

    /// Builds a poset from a full order relation, which must already be a
    /// partial order (no closure is taken).
    pub fn from_relation<F>(names: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = names.len();
        let down: Vec<BitSet> = (0..n)
            .map(|e| BitSet::from_iter(n, (0..n).filter(|&f| leq(f, e))))
            .collect();
        for e in 0..n {
            if !down[e].contains(e) {
                return Err(Error::InvalidPoset(format!("`{}` is not ≤ itself", names[e])));
            }
            for f in down[e].iter() {
                if !down[f].is_subset(&down[e]) {
                    return Err(Error::InvalidPoset(format!(
                        "relation is not transitive through `{}` ≤ `{}`",
                        names[f], names[e]
                    )));
                }
            }
        }
        Self::from_down_sets(names, down)
    }

    fn from_down_sets(names: Vec<String>, down: Vec<BitSet>) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element `{s}`")));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if down[a].contains(b) && down[b].contains(a) {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` and `{}` violate antisymmetry",
                        names[a], names[b]
                    )));
                }
            }
        }
        Ok(Poset { names, down, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn down(&self, e: usize) -> &BitSet {
        &self.down[e]
    }

    /// Pairs `(a, b)` with `a < b` covering nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for b in 0..n {
            for a in self.down[b].iter() {
                if a != b && !(0..n).any(|c| c != a && c != b && self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All pairs `(a, b)` with `a ≤ b`, including the reflexive ones.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Greatest element, if any.
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| self.down[t].count() == self.len())
    }

    /// Every pair has an upper bound (vacuously false for the empty poset).
    pub fn is_directed(&self) -> bool {
        // a finite poset is directed iff it has a greatest element
        self.top().is_some()
    }

    /// The induced subposet on `keep`, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        Poset::from_relation(names, |a, b| self.leq(keep[a], keep[b])).expect("subposet of a poset")
    }

    pub fn chain(k: usize) -> Poset {
        let names = (0..k).map(|i| i.to_string()).collect();
        Poset::from_relation(names, |a, b| a <= b).unwrap()
    }

    pub fn antichain(k: usize) -> Poset {
        let names = (0..k).map(|i| format!("a{i}")).collect();
        Poset::from_relation(names, |a, b| a == b).unwrap()
    }
}
