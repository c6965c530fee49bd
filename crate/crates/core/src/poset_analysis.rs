//! Minimal elements, gathering, critical elements and the gathering
//! condition battery for the object preorder of a category.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::enumerate::for_each_combination;
use crate::error::{Error, Result};
use crate::structures::{preorder_quotient, FiniteCategory, Poset};
use crate::union_find::UnionFind;

pub fn minimal_elements(j: &Poset) -> Vec<usize> {
    (0..j.len()).filter(|&e| j.down(e).count() == 1).collect()
}

/// For every element, a minimal element below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbovefinReport {
    pub minimal: Vec<usize>,
    pub witnesses: Vec<(usize, usize)>,
    pub holds: bool,
}

pub fn abovefin_check(j: &Poset) -> AbovefinReport {
    let minimal = minimal_elements(j);
    let witnesses: Vec<(usize, usize)> = (0..j.len())
        .filter_map(|e| minimal.iter().find(|&&m| j.leq(m, e)).map(|&m| (e, m)))
        .collect();
    let holds = witnesses.len() == j.len();
    AbovefinReport { minimal, witnesses, holds }
}

/// Largest poset and downset count the intersection oracle accepts.
pub const CAPNE_MAX_ELEMENTS: usize = 12;
pub const CAPNE_MAX_DOWNSETS: usize = 20;

/// Nonempty down-sets of `j` as bitmasks over the elements.
pub fn nonempty_downsets(j: &Poset) -> Result<Vec<u32>> {
    let n = j.len();
    if n > CAPNE_MAX_ELEMENTS {
        return Err(Error::TooLarge(format!("{n} elements (at most {CAPNE_MAX_ELEMENTS})")));
    }
    let down: Vec<u32> = (0..n).map(|e| j.down(e).iter().fold(0u32, |m, f| m | 1 << f)).collect();
    Ok((1u32..1 << n)
        .filter(|&s| (0..n).all(|e| s & (1 << e) == 0 || down[e] & !s == 0))
        .collect())
}

/// Checks that every downward-directed family of nonempty down-sets has
/// nonempty intersection, by enumerating all families. Returns a failing
/// family if one exists.
pub fn capne_oracle(j: &Poset) -> Result<(bool, Option<Vec<u32>>)> {
    let ds = nonempty_downsets(j)?;
    let k = ds.len();
    if k > CAPNE_MAX_DOWNSETS {
        return Err(Error::TooLarge(format!("{k} nonempty downsets (at most {CAPNE_MAX_DOWNSETS})")));
    }
    for fam in 1u32..(1u64 << k) as u32 {
        let members: Vec<u32> = (0..k).filter(|&i| fam & (1 << i) != 0).map(|i| ds[i]).collect();
        let directed = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| members.iter().any(|&c| c & !(a & b) == 0))
        });
        if directed && members.iter().fold(u32::MAX, |acc, &m| acc & m) == 0 {
            return Ok((false, Some(members)));
        }
    }
    Ok((true, None))
}

/// Outcome of a gathering query: whether `B` gathers `A` under `E`, and the
/// classes of `A ∩ down(E)` left after merging.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gathering {
    pub gathers: bool,
    pub classes: Vec<Vec<usize>>,
}

/// Merges `A ∩ down(F)` for every `F ∈ B ∩ down(E)`; `B` gathers `A` under
/// `E` when at most one class remains. Sets with at most one element are
/// gathered vacuously.
pub fn gathers(j: &Poset, a: &BitSet, b: &BitSet, e: usize) -> Gathering {
    let n = j.len();
    let mut uf = UnionFind::new(n);
    let below: Vec<usize> = a.intersection(j.down(e)).iter().collect();
    for f in b.intersection(j.down(e)).iter() {
        let part = a.intersection(j.down(f));
        let mut it = part.iter();
        if let Some(first) = it.next() {
            for g in it {
                uf.union(first as u32, g as u32);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class: Vec<usize> = vec![usize::MAX; n];
    for &x in &below {
        let r = uf.find(x as u32) as usize;
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[root_class[r]].push(x);
    }
    Gathering { gathers: classes.len() <= 1, classes }
}

pub fn gathers_everywhere(j: &Poset, a: &BitSet, b: &BitSet) -> bool {
    (0..j.len()).all(|e| gathers(j, a, b, e).gathers)
}

/// Elements `E` such that the rest of the poset does not gather `A` under `E`.
pub fn critical_elements(j: &Poset, a: &BitSet) -> Vec<usize> {
    (0..j.len())
        .filter(|&e| {
            let mut rest = BitSet::full(j.len());
            rest.remove(e);
            !gathers(j, a, &rest, e).gathers
        })
        .collect()
}

/// Conditions (i)–(iv) on the object preorder of a category, with the
/// computed minimal set `A`, critical set `B`, and per-element certificates.
#[derive(Clone, Debug, Serialize)]
pub struct TgathReport {
    #[serde(skip)]
    pub poset: Poset,
    pub elements: Vec<String>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub a_finite: bool,
    pub every_element_above_a: bool,
    pub b_finite: bool,
    pub b_gathers_a_everywhere: bool,
    pub certificates: Vec<Gathering>,
}

pub fn tgath_check(cat: &FiniteCategory) -> TgathReport {
    let j = preorder_quotient(cat).poset;
    let n = j.len();
    let a = minimal_elements(&j);
    let abit = BitSet::from_iter(n, a.iter().copied());
    let b = critical_elements(&j, &abit);
    let bbit = BitSet::from_iter(n, b.iter().copied());
    let certificates: Vec<Gathering> = (0..n).map(|e| gathers(&j, &abit, &bbit, e)).collect();
    TgathReport {
        elements: j.names().to_vec(),
        every_element_above_a: abovefin_check(&j).holds,
        b_gathers_a_everywhere: certificates.iter().all(|g| g.gathers),
        a_finite: true,
        b_finite: true,
        poset: j,
        a,
        b,
        certificates,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GatheringSearch {
    Found(Vec<usize>),
    Exhausted { budget: usize },
}

impl GatheringSearch {
    pub fn found(&self) -> Option<&[usize]> {
        match self {
            GatheringSearch::Found(v) => Some(v),
            GatheringSearch::Exhausted { .. } => None,
        }
    }
}

/// Smallest `B` gathering `A` under every element, by size then
/// lexicographic order, trying sizes up to `budget`.
pub fn minimal_gathering_set(j: &Poset, a: &BitSet, budget: usize) -> GatheringSearch {
    let n = j.len();
    for k in 0..=budget.min(n) {
        let mut found = None;
        for_each_combination(n, k, |idx| {
            let b = BitSet::from_iter(n, idx.iter().copied());
            if gathers_everywhere(j, a, &b) {
                found = Some(idx.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(f) = found {
            return GatheringSearch::Found(f);
        }
    }
    GatheringSearch::Exhausted { budget }
}

/// Heuristic trend label for a parameterized family of posets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Stable,
    Drifting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstabilityRow {
    pub parameter: usize,
    pub minimal_gathering_set: Option<Vec<String>>,
}

/// Minimal gathering sets along a family; `Drifting` when the set's
/// contents change at every step of the family, `Stable` when they never
/// change after the first step. This is evidence about the infinite
/// object, not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstabilityReport {
    pub rows: Vec<InstabilityRow>,
    pub trend: Option<Trend>,
    pub heuristic: bool,
}

pub fn horizon_instability_probe(family: &[(usize, Poset, BitSet)], budget: usize) -> InstabilityReport {
    let rows: Vec<InstabilityRow> = family
        .iter()
        .map(|(k, j, a)| InstabilityRow {
            parameter: *k,
            minimal_gathering_set: minimal_gathering_set(j, a, budget)
                .found()
                .map(|v| v.iter().map(|&e| j.name(e).to_string()).collect()),
        })
        .collect();
    let changes: Vec<bool> = rows
        .windows(2)
        .map(|w| w[0].minimal_gathering_set != w[1].minimal_gathering_set)
        .collect();
    let trend = if changes.is_empty() {
        None
    } else if changes.iter().all(|&c| c) {
        Some(Trend::Drifting)
    } else if changes.iter().skip(1).all(|&c| !c) {
        Some(Trend::Stable)
    } else {
        None
    };
    InstabilityReport { rows, trend, heuristic: true }
}

/// Graphviz rendering of the Hasse diagram: minimal elements as boxes,
/// critical elements filled, the chosen gathering set outlined in bold.
pub fn to_dot(j: &Poset, minimal: &[usize], critical: &[usize], gathering: &[usize]) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for e in 0..j.len() {
        let mut attrs = vec![format!("label=\"{}\"", j.name(e).replace('"', "\\\""))];
        if minimal.contains(&e) {
            attrs.push("shape=box".into());
        }
        if critical.contains(&e) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=\"#f4a261\"".into());
        }
        if gathering.contains(&e) {
            attrs.push("penwidth=3".into());
        }
        out.push_str(&format!("  n{e} [{}];\n", attrs.join(", ")));
    }
    for (a, b) in j.covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_poset() -> Poset {
        let names = ["0_1", "0_2", "1", "2"].iter().map(|s| s.to_string()).collect();
        Poset::new(names, &[(0, 2), (1, 2), (2, 3)]).unwrap()
    }

    fn diamond() -> Poset {
        let names = ["b1", "b2", "m1", "m2", "t"].iter().map(|s| s.to_string()).collect();
        Poset::new(names, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn v_poset_analysis() {
        let j = v_poset();
        assert_eq!(minimal_elements(&j), vec![0, 1]);
        let a = BitSet::from_iter(4, [0, 1]);
        assert!(gathers(&j, &a, &BitSet::from_iter(4, [2]), 3).gathers);
        assert_eq!(critical_elements(&j, &a), vec![2]);
        assert_eq!(minimal_gathering_set(&j, &a, 4), GatheringSearch::Found(vec![2]));
        assert_eq!(capne_oracle(&j).unwrap(), (true, None));
    }

    #[test]
    fn diamond_needs_both_middles() {
        let j = diamond();
        let a = BitSet::from_iter(5, [0, 1]);
        assert_eq!(critical_elements(&j, &a), vec![2, 3]);
        assert_eq!(minimal_gathering_set(&j, &a, 5), GatheringSearch::Found(vec![2, 3]));
    }

    #[test]
    fn antichain_is_trivial() {
        let j = Poset::antichain(3);
        let a = BitSet::full(3);
        assert_eq!(minimal_elements(&j).len(), 3);
        assert!(critical_elements(&j, &a).is_empty());
        assert_eq!(minimal_gathering_set(&j, &a, 3), GatheringSearch::Found(vec![]));
        assert!(capne_oracle(&Poset::antichain(2)).unwrap().0);
    }

    #[test]
    fn vacuous_and_reflexive() {
        let j = v_poset();
        let a = BitSet::from_iter(4, [0, 1]);
        let empty = BitSet::new(4);
        assert!(gathers(&j, &a, &empty, 0).gathers);
        assert!(!gathers(&j, &a, &empty, 2).gathers);
        assert!(gathers(&j, &a, &BitSet::from_iter(4, [3]), 3).gathers);
    }

    #[test]
    fn capne_guard() {
        assert!(matches!(capne_oracle(&Poset::antichain(13)), Err(Error::TooLarge(_))));
        assert!(matches!(capne_oracle(&Poset::antichain(5)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dot_mentions_every_element() {
        let j = v_poset();
        let dot = to_dot(&j, &[0, 1], &[2], &[2]);
        assert!(dot.contains("n0 -> n2"));
        assert!(dot.contains("fillcolor"));
    }
}
