//! Congruences on E-sets: closure of relation families, improperness,
//! minimal generating families and the finite-presentation witness for the
//! trivial E-set.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::for_each_combination;
use crate::error::{Error, Result};
use crate::eset::{union_hom, ESet, HomUnion};
use crate::structures::{preorder_quotient, FiniteCategory, ObjId};
use crate::union_find::{canonicalize, UnionFind};

/// An element pair inside one carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedPair {
    pub obj: ObjId,
    pub s: u32,
    pub t: u32,
}

impl TaggedPair {
    pub fn new(obj: ObjId, s: u32, t: u32) -> Self {
        TaggedPair { obj, s, t }
    }
}

/// A finite binary relation on an E-set, stored as tagged pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationFamily {
    pub pairs: Vec<TaggedPair>,
}

impl RelationFamily {
    pub fn new(pairs: Vec<TaggedPair>) -> Self {
        RelationFamily { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn check_on(&self, x: &ESet) -> Result<()> {
        for p in &self.pairs {
            if p.obj >= x.category().object_count()
                || p.s as usize >= x.size(p.obj)
                || p.t as usize >= x.size(p.obj)
            {
                return Err(Error::UnknownElement(format!("pair ({}, {}) at object #{}", p.s, p.t, p.obj)));
            }
        }
        Ok(())
    }

    /// Objects that carry at least one pair, ascending and deduplicated.
    pub fn objects(&self) -> Vec<ObjId> {
        let mut v: Vec<ObjId> = self.pairs.iter().map(|p| p.obj).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// One partition per object, given by canonical class ids (numbered in
/// order of first occurrence).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceFamily {
    ids: Vec<Vec<u32>>,
    counts: Vec<usize>,
}

impl CongruenceFamily {
    /// From arbitrary class ids per object; ids are renumbered canonically.
    /// This does not check closure; see [`CongruenceFamily::check_on`].
    pub fn from_ids(ids: Vec<Vec<u32>>) -> Self {
        let ids: Vec<Vec<u32>> = ids.iter().map(|v| canonicalize(v)).collect();
        let counts = ids
            .iter()
            .map(|v| v.iter().max().map_or(0, |&m| m as usize + 1))
            .collect();
        CongruenceFamily { ids, counts }
    }

    /// From explicit class lists per object; every element must appear once.
    pub fn from_classes(x: &ESet, classes: &[Vec<Vec<u32>>]) -> Result<Self> {
        let n = x.category().object_count();
        if classes.len() != n {
            return Err(Error::NotCongruence("one partition per object is required".into()));
        }
        let mut ids = Vec::with_capacity(n);
        for o in 0..n {
            let mut v = vec![u32::MAX; x.size(o)];
            for (c, cls) in classes[o].iter().enumerate() {
                for &e in cls {
                    if e as usize >= v.len() || v[e as usize] != u32::MAX {
                        return Err(Error::NotCongruence(format!(
                            "classes at `{}` do not partition the carrier",
                            x.category().object_name(o)
                        )));
                    }
                    v[e as usize] = c as u32;
                }
            }
            if v.contains(&u32::MAX) {
                return Err(Error::NotCongruence(format!(
                    "classes at `{}` do not cover the carrier",
                    x.category().object_name(o)
                )));
            }
            ids.push(v);
        }
        let c = CongruenceFamily::from_ids(ids);
        c.check_on(x)?;
        Ok(c)
    }

    pub fn discrete(x: &ESet) -> Self {
        let n = x.category().object_count();
        CongruenceFamily::from_ids((0..n).map(|o| (0..x.size(o) as u32).collect()).collect())
    }

    pub fn improper(x: &ESet) -> Self {
        let n = x.category().object_count();
        CongruenceFamily::from_ids((0..n).map(|o| vec![0; x.size(o)]).collect())
    }

    pub fn ids(&self, o: ObjId) -> &[u32] {
        &self.ids[o]
    }

    pub fn class_id(&self, o: ObjId, x: u32) -> u32 {
        self.ids[o][x as usize]
    }

    pub fn class_count(&self, o: ObjId) -> usize {
        self.counts[o]
    }

    pub fn total_classes(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn related(&self, o: ObjId, s: u32, t: u32) -> bool {
        self.ids[o][s as usize] == self.ids[o][t as usize]
    }

    /// Classes at `o` as ascending element lists, in class-id order.
    pub fn classes_of(&self, o: ObjId) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.counts[o]];
        for (x, &c) in self.ids[o].iter().enumerate() {
            out[c as usize].push(x as u32);
        }
        out
    }

    /// At most one class at every object.
    pub fn is_improper(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// Whether every pair related here is related in `other`.
    pub fn is_finer_than(&self, other: &CongruenceFamily) -> bool {
        self.ids.iter().zip(&other.ids).all(|(a, b)| {
            let mut image = vec![u32::MAX; a.iter().max().map_or(0, |&m| m as usize + 1)];
            a.iter().zip(b).all(|(&ca, &cb)| {
                let slot = &mut image[ca as usize];
                if *slot == u32::MAX {
                    *slot = cb;
                }
                *slot == cb
            })
        })
    }

    /// Checks shapes and closure under every action map.
    pub fn check_on(&self, x: &ESet) -> Result<()> {
        let cat = x.category();
        if self.ids.len() != cat.object_count()
            || (0..cat.object_count()).any(|o| self.ids[o].len() != x.size(o))
        {
            return Err(Error::NotCongruence("partition shapes do not match the carriers".into()));
        }
        for &g in cat.generators() {
            let m = cat.morphism(g);
            let mut image = vec![u32::MAX; self.counts[m.dom]];
            for s in 0..x.size(m.dom) as u32 {
                let c = self.class_id(m.dom, s) as usize;
                let d = self.class_id(m.cod, x.act(g, s));
                if image[c] == u32::MAX {
                    image[c] = d;
                } else if image[c] != d {
                    return Err(Error::NotCongruence(format!(
                        "`{}` sends one class at `{}` into two classes",
                        m.name,
                        cat.object_name(m.dom)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Order in which newly merged pairs are taken from the worklist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorklistOrder {
    Fifo,
    Lifo,
    Shuffled(u64),
}

/// Result of a closure run, with exact merge accounting.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub congruence: CongruenceFamily,
    pub merges: usize,
    pub initial_classes: usize,
    pub final_classes: usize,
}

/// Incremental congruence closure: one flattened union-find over all
/// carriers and a worklist of merged pairs whose images are still pending.
#[derive(Clone, Debug)]
pub struct ClosureState {
    offsets: Vec<u32>,
    uf: UnionFind,
    out_gens: Vec<Vec<(usize, ObjId)>>,
    merges: usize,
}

impl ClosureState {
    pub fn new(x: &ESet) -> Self {
        let cat = x.category();
        let n = cat.object_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut total = 0u64;
        for o in 0..n {
            offsets.push(total as u32);
            total += x.size(o) as u64;
        }
        offsets.push(total as u32);
        let mut out_gens = vec![Vec::new(); n];
        for &g in cat.generators() {
            let m = cat.morphism(g);
            out_gens[m.dom].push((g, m.cod));
        }
        ClosureState { offsets, uf: UnionFind::new(total as usize), out_gens, merges: 0 }
    }

    pub fn merges(&self) -> usize {
        self.merges
    }

    pub fn classes(&self) -> usize {
        self.uf.classes()
    }

    /// Classes remaining at object `o` is ≤ 1 for every object.
    pub fn is_improper(&mut self, x: &ESet) -> bool {
        let n = x.category().object_count();
        (0..n).all(|o| {
            let (lo, hi) = (self.offsets[o], self.offsets[o + 1]);
            (lo + 1..hi).all(|g| self.uf.same(lo, g))
        })
    }

    pub fn related(&mut self, p: TaggedPair) -> bool {
        let base = self.offsets[p.obj];
        self.uf.same(base + p.s, base + p.t)
    }

    /// Adds the pairs and closes under the action maps.
    pub fn add(&mut self, x: &ESet, pairs: &[TaggedPair], order: WorklistOrder) {
        let mut work: Vec<TaggedPair> = Vec::new();
        let mut rng = match order {
            WorklistOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        for &p in pairs {
            if self.union(p) {
                work.push(p);
            }
        }
        let mut head = 0usize;
        loop {
            let p = match order {
                WorklistOrder::Fifo => {
                    if head == work.len() {
                        break;
                    }
                    head += 1;
                    work[head - 1]
                }
                WorklistOrder::Lifo => match work.pop() {
                    Some(p) => p,
                    None => break,
                },
                WorklistOrder::Shuffled(_) => {
                    if work.is_empty() {
                        break;
                    }
                    let i = rng.as_mut().unwrap().gen_range(0..work.len());
                    work.swap_remove(i)
                }
            };
            for k in 0..self.out_gens[p.obj].len() {
                let (g, cod) = self.out_gens[p.obj][k];
                let q = TaggedPair::new(cod, x.act(g, p.s), x.act(g, p.t));
                if self.union(q) {
                    work.push(q);
                }
            }
        }
    }

    fn union(&mut self, p: TaggedPair) -> bool {
        let base = self.offsets[p.obj];
        let merged = self.uf.union(base + p.s, base + p.t);
        if merged {
            self.merges += 1;
        }
        merged
    }

    pub fn congruence(&mut self) -> CongruenceFamily {
        let n = self.offsets.len() - 1;
        let ids = (0..n)
            .map(|o| {
                let (lo, hi) = (self.offsets[o], self.offsets[o + 1]);
                (lo..hi).map(|g| self.uf.find(g)).collect()
            })
            .collect();
        CongruenceFamily::from_ids(ids)
    }
}

/// The least congruence containing `r`.
pub fn congruence_closure(x: &ESet, r: &RelationFamily) -> Result<ClosureReport> {
    congruence_closure_with(x, r, WorklistOrder::Fifo)
}

pub fn congruence_closure_with(x: &ESet, r: &RelationFamily, order: WorklistOrder) -> Result<ClosureReport> {
    r.check_on(x)?;
    let mut state = ClosureState::new(x);
    let initial_classes = state.classes();
    state.add(x, &r.pairs, order);
    let final_classes = state.classes();
    Ok(ClosureReport {
        congruence: state.congruence(),
        merges: state.merges(),
        initial_classes,
        final_classes,
    })
}

pub fn is_improper(c: &CongruenceFamily) -> bool {
    c.is_improper()
}

/// All unordered pairs `s < t` at every object, in (object, s, t) order.
pub fn candidate_pairs(x: &ESet) -> Vec<TaggedPair> {
    let mut out = Vec::new();
    for o in 0..x.category().object_count() {
        let k = x.size(o) as u32;
        for s in 0..k {
            for t in s + 1..k {
                out.push(TaggedPair::new(o, s, t));
            }
        }
    }
    out
}

/// Outcome of the minimal generator search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalGenerators {
    /// A smallest generating family; the first in lexicographic order.
    Found(RelationFamily),
    /// No generating family of size ≤ `budget`; `upper_bound` is a greedy
    /// generating family, which need not be minimal.
    Exhausted { budget: usize, upper_bound: RelationFamily },
}

impl MinimalGenerators {
    pub fn witness(&self) -> Option<&RelationFamily> {
        match self {
            MinimalGenerators::Found(r) => Some(r),
            MinimalGenerators::Exhausted { .. } => None,
        }
    }
}

/// Searches for a smallest relation family whose closure is improper, by
/// increasing size with lexicographic tie-break on (object, s, t), up to
/// `budget` pairs.
pub fn minimal_improper_generators(x: &ESet, budget: usize) -> MinimalGenerators {
    let cands = candidate_pairs(x);
    let root = ClosureState::new(x);
    for k in 0..=budget {
        let mut chosen = Vec::with_capacity(k);
        if let Some(found) = search_generators(x, &cands, root.clone(), 0, k, &mut chosen) {
            return MinimalGenerators::Found(RelationFamily::new(found));
        }
    }
    MinimalGenerators::Exhausted { budget, upper_bound: greedy_improper_generators(x) }
}

// Depth-first over increasing candidate indices. A pair already related by
// the earlier choices can be dropped from any family containing it, so it
// never occurs in a minimal family and is skipped.
fn search_generators(
    x: &ESet,
    cands: &[TaggedPair],
    mut state: ClosureState,
    from: usize,
    remaining: usize,
    chosen: &mut Vec<TaggedPair>,
) -> Option<Vec<TaggedPair>> {
    if remaining == 0 {
        return state.is_improper(x).then(|| chosen.clone());
    }
    for i in from..cands.len() {
        if cands.len() - i < remaining {
            break;
        }
        let p = cands[i];
        if state.related(p) {
            continue;
        }
        let mut next = state.clone();
        next.add(x, &[p], WorklistOrder::Fifo);
        chosen.push(p);
        if let Some(found) = search_generators(x, cands, next, i + 1, remaining - 1, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Repeatedly adds the candidate pair that leaves the fewest classes.
pub fn greedy_improper_generators(x: &ESet) -> RelationFamily {
    let cands = candidate_pairs(x);
    let mut state = ClosureState::new(x);
    let mut chosen = Vec::new();
    while !state.is_improper(x) {
        let mut best: Option<(usize, ClosureState, TaggedPair)> = None;
        for &p in &cands {
            if state.related(p) {
                continue;
            }
            let mut next = state.clone();
            next.add(x, &[p], WorklistOrder::Fifo);
            if best.as_ref().is_none_or(|(c, _, _)| next.classes() < *c) {
                best = Some((next.classes(), next, p));
            }
        }
        let (_, next, p) = best.expect("an unrelated pair exists while some object has two classes");
        state = next;
        chosen.push(p);
    }
    RelationFamily::new(chosen)
}

/// Smallest object set `S` such that all pairs at objects of `S` generate
/// the improper congruence, by size then lexicographic order. `None` when
/// even all objects do not suffice (impossible) or when the search would
/// exceed `max_objects`.
pub fn minimal_improper_support(x: &ESet, max_objects: usize) -> Option<Vec<ObjId>> {
    let n = x.category().object_count();
    let cands = candidate_pairs(x);
    for k in 0..=n.min(max_objects) {
        let mut found = None;
        for_each_combination(n, k, |objs| {
            let pairs: Vec<TaggedPair> = cands.iter().copied().filter(|p| objs.contains(&p.obj)).collect();
            let mut st = ClosureState::new(x);
            st.add(x, &pairs, WorklistOrder::Fifo);
            if st.is_improper(x) {
                found = Some(objs.to_vec());
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Witness that the trivial E-set is finitely presented: one representative
/// per minimal class of the object preorder, the union of their
/// hom-functors, and a smallest family generating its improper congruence.
#[derive(Clone, Debug)]
pub struct FinitePresentation {
    pub a: Vec<ObjId>,
    pub h: HomUnion,
    pub generators: MinimalGenerators,
}

pub fn trivial_eset_finitely_presented(cat: &Arc<FiniteCategory>) -> Result<FinitePresentation> {
    if cat.object_count() == 0 {
        return Err(Error::EmptyObjectSet);
    }
    let q = preorder_quotient(cat);
    let a: Vec<ObjId> = (0..q.poset.len())
        .filter(|&c| (0..q.poset.len()).all(|d| !q.poset.lt(d, c)))
        .map(|c| q.members[c][0])
        .collect();
    let h = union_hom(cat, &a)?;
    let budget = h.eset.total_size();
    let generators = minimal_improper_generators(&h.eset, budget);
    Ok(FinitePresentation { a, h, generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eset::{trivial_eset, Carrier};
    use crate::structures::{poset_to_category, Morphism, Poset};

    fn arrow_eset() -> ESet {
        let objects = vec!["E".to_string(), "F".to_string()];
        let morphisms = vec![
            Morphism { name: "1E".into(), dom: 0, cod: 0 },
            Morphism { name: "1F".into(), dom: 1, cod: 1 },
            Morphism { name: "a".into(), dom: 0, cod: 1 },
        ];
        let cat = FiniteCategory::new(objects, morphisms, vec![0, 1], |a, b| match (a, b) {
            (0, 0) => Some(0),
            (1, 1) => Some(1),
            (2, 0) | (1, 2) => Some(2),
            _ => None,
        })
        .unwrap();
        ESet::new(
            Arc::new(cat),
            vec![
                Carrier::labeled(vec!["1".into(), "2".into(), "3".into()]),
                Carrier::labeled(vec!["u".into(), "v".into()]),
            ],
            vec![vec![0, 1, 2], vec![0, 1], vec![0, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn arrow_closure() {
        let x = arrow_eset();
        let r = RelationFamily::new(vec![TaggedPair::new(0, 0, 2)]);
        let rep = congruence_closure(&x, &r).unwrap();
        assert_eq!(rep.congruence.classes_of(0), vec![vec![0, 2], vec![1]]);
        assert_eq!(rep.congruence.classes_of(1), vec![vec![0, 1]]);
        assert_eq!(rep.merges, rep.initial_classes - rep.final_classes);
        rep.congruence.check_on(&x).unwrap();
    }

    #[test]
    fn empty_relation_is_discrete() {
        let x = arrow_eset();
        let rep = congruence_closure(&x, &RelationFamily::default()).unwrap();
        assert_eq!(rep.congruence, CongruenceFamily::discrete(&x));
        assert!(!rep.congruence.is_improper());
    }

    #[test]
    fn orders_agree() {
        let x = arrow_eset();
        let r = RelationFamily::new(vec![TaggedPair::new(0, 1, 2)]);
        let a = congruence_closure_with(&x, &r, WorklistOrder::Fifo).unwrap().congruence;
        let b = congruence_closure_with(&x, &r, WorklistOrder::Lifo).unwrap().congruence;
        let c = congruence_closure_with(&x, &r, WorklistOrder::Shuffled(7)).unwrap().congruence;
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn rejects_non_congruence() {
        let x = arrow_eset();
        // 1 ~ 3 at E without u ~ v at F
        let bad = CongruenceFamily::from_ids(vec![vec![0, 1, 0], vec![0, 1]]);
        assert!(matches!(bad.check_on(&x), Err(Error::NotCongruence(_))));
        assert!(x.quotient(&bad).is_err());
    }

    #[test]
    fn trivial_needs_no_generators() {
        let cat = Arc::new(poset_to_category(&Poset::chain(2)));
        let t = trivial_eset(&cat);
        assert_eq!(minimal_improper_generators(&t, 3), MinimalGenerators::Found(RelationFamily::default()));
        let fp = trivial_eset_finitely_presented(&cat).unwrap();
        assert_eq!(fp.a, vec![0]);
        assert_eq!(fp.generators.witness().unwrap().len(), 0);
    }

    #[test]
    fn exhaustion_reports_greedy_bound() {
        let x = arrow_eset();
        match minimal_improper_generators(&x, 0) {
            MinimalGenerators::Exhausted { upper_bound, .. } => {
                let c = congruence_closure(&x, &upper_bound).unwrap().congruence;
                assert!(c.is_improper());
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
        let w = minimal_improper_generators(&x, 3);
        // {(1,2),(2,3)} at E are needed; F collapses as a consequence
        assert_eq!(w.witness().unwrap().len(), 2);
    }

    #[test]
    fn empty_category_has_no_presentation() {
        let cat = Arc::new(FiniteCategory::new(vec![], vec![], vec![], |_, _| None).unwrap());
        assert_eq!(trivial_eset_finitely_presented(&cat).unwrap_err(), Error::EmptyObjectSet);
    }
}
