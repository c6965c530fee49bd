use std::sync::Arc;

use crate::error::{Error, Result};
use crate::eset::{Carrier, ESet, ESetMorphism, LimitElement};
use crate::structures::{FiniteCategory, ObjId, Poset};
use crate::union_find::UnionFind;

use super::verdict::{Verdict, Witness};

/// A directed system of E-sets indexed by a finite directed poset.
#[derive(Clone, Debug)]
pub struct FiniteDirectedSystem {
    index: Poset,
    members: Vec<ESet>,
    connect: Vec<Option<ESetMorphism>>,
    top: usize,
}

/// The colimit of a finite directed system: the top member together with
/// the insertion of every member into it.
#[derive(Clone, Debug)]
pub struct ColimitData {
    pub eset: ESet,
    pub top: usize,
    pub insertions: Vec<ESetMorphism>,
}

/// Both sides of the comparison map, computed exactly, and the map itself.
#[derive(Clone, Debug)]
pub struct IotaReport {
    /// Classes of the colimit of limits: representative stage and limit point.
    pub domain: Vec<(usize, LimitElement)>,
    pub domain_labels: Vec<String>,
    /// Limit of the colimit, over the colimit built by merging along the
    /// connecting maps.
    pub codomain: Vec<LimitElement>,
    pub codomain_labels: Vec<String>,
    /// `map[d]` is the index in `codomain` of the image of domain class `d`.
    pub map: Vec<usize>,
    pub injective: Verdict,
    pub surjective: Verdict,
}

impl IotaReport {
    pub fn is_bijective(&self) -> bool {
        self.injective.is_proven() && self.surjective.is_proven()
    }
}

impl FiniteDirectedSystem {
    /// `connect` lists the components of `α(i, j)` for every `i < j`;
    /// entries for `i == j` are optional and must be identities.
    pub fn new(index: Poset, members: Vec<ESet>, connect: Vec<((usize, usize), Vec<Vec<u32>>)>) -> Result<Self> {
        let n = index.len();
        if n == 0 {
            return Err(Error::InvalidSystem("the index poset is empty".into()));
        }
        let top = index
            .top()
            .ok_or_else(|| Error::InvalidSystem("the index poset is not directed".into()))?;
        if members.len() != n {
            return Err(Error::InvalidSystem(format!("expected {n} members, got {}", members.len())));
        }
        let cat = members[0].category().clone();
        if members.iter().any(|m| **m.category() != *cat) {
            return Err(Error::InvalidSystem("members live over different categories".into()));
        }
        let mut table: Vec<Option<ESetMorphism>> = vec![None; n * n];
        for i in 0..n {
            table[i * n + i] = Some(ESetMorphism::identity(&members[i]));
        }
        for ((i, j), comps) in connect {
            if i >= n || j >= n || !index.leq(i, j) {
                return Err(Error::InvalidSystem(format!("connecting map for a pair that is not i ≤ j: ({i}, {j})")));
            }
            let alpha = ESetMorphism::new(&members[i], &members[j], comps)
                .map_err(|e| Error::InvalidSystem(format!("α({}, {}): {e}", index.name(i), index.name(j))))?;
            if i == j && alpha != ESetMorphism::identity(&members[i]) {
                return Err(Error::InvalidSystem(format!("α({0}, {0}) is not the identity", index.name(i))));
            }
            table[i * n + j] = Some(alpha);
        }
        for i in 0..n {
            for j in 0..n {
                if index.leq(i, j) && table[i * n + j].is_none() {
                    return Err(Error::InvalidSystem(format!(
                        "missing connecting map α({}, {})",
                        index.name(i),
                        index.name(j)
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !index.lt(i, j) {
                    continue;
                }
                for k in 0..n {
                    if !index.lt(j, k) {
                        continue;
                    }
                    let via = table[i * n + j].as_ref().unwrap().then(table[j * n + k].as_ref().unwrap());
                    if &via != table[i * n + k].as_ref().unwrap() {
                        return Err(Error::InvalidSystem(format!(
                            "α({1}, {2}) ∘ α({0}, {1}) ≠ α({0}, {2})",
                            index.name(i),
                            index.name(j),
                            index.name(k)
                        )));
                    }
                }
            }
        }
        Ok(FiniteDirectedSystem { index, members, connect: table, top })
    }

    /// A system with a single member.
    pub fn single(x: ESet) -> Self {
        FiniteDirectedSystem::new(Poset::chain(1), vec![x], vec![]).expect("one-member system")
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        self.members[0].category()
    }

    pub fn member(&self, i: usize) -> &ESet {
        &self.members[i]
    }

    pub fn members(&self) -> &[ESet] {
        &self.members
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `α(i, j)`, when `i ≤ j`.
    pub fn connect(&self, i: usize, j: usize) -> Option<&ESetMorphism> {
        self.connect[i * self.index.len() + j].as_ref()
    }

    pub fn colimit_eset(&self) -> ColimitData {
        let insertions = (0..self.index.len())
            .map(|i| self.connect(i, self.top).unwrap().clone())
            .collect();
        ColimitData { eset: self.members[self.top].clone(), top: self.top, insertions }
    }

    /// Least index `k` (in index order) with `k ≥ i, j` at which the two
    /// elements of carrier `o` become equal, if any.
    pub fn equalizing_stage(&self, i: usize, x: u32, j: usize, y: u32, o: ObjId) -> Option<usize> {
        (0..self.index.len()).find(|&k| {
            self.index.leq(i, k)
                && self.index.leq(j, k)
                && self.connect(i, k).unwrap().apply(o, x) == self.connect(j, k).unwrap().apply(o, y)
        })
    }

    /// Least `(stage, element)` equal in the colimit to `x` at stage `i`.
    pub fn representative(&self, i: usize, o: ObjId, x: u32) -> (usize, u32) {
        let target = self.connect(i, self.top).unwrap().apply(o, x);
        for s in 0..self.index.len() {
            let ins = self.connect(s, self.top).unwrap();
            if let Some(z) = (0..self.members[s].size(o) as u32).find(|&z| ins.apply(o, z) == target) {
                return (s, z);
            }
        }
        unreachable!("x itself is a candidate")
    }

    /// Computes both sides of the comparison map from first principles and
    /// compares them element by element.
    pub fn iota(&self) -> IotaReport {
        let n = self.index.len();
        let cat = self.category().clone();
        let objs = cat.object_count();

        // colimit of limits
        let limits: Vec<Vec<LimitElement>> = self.members.iter().map(ESet::limit).collect();
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + limits[i].len();
        }
        let mut dom_uf = UnionFind::new(offsets[n]);
        for i in 0..n {
            for j in 0..n {
                if !self.index.lt(i, j) {
                    continue;
                }
                let alpha = self.connect(i, j).unwrap();
                for (pi, p) in limits[i].iter().enumerate() {
                    let q = alpha.apply_limit(p);
                    let qi = limits[j].binary_search(&q).expect("limits are functorial");
                    dom_uf.union((offsets[i] + pi) as u32, (offsets[j] + qi) as u32);
                }
            }
        }
        let dom_ids = dom_uf.canonical_labels();
        let dom_count = dom_ids.iter().max().map_or(0, |&m| m as usize + 1);
        let mut domain: Vec<Option<(usize, LimitElement)>> = vec![None; dom_count];
        for i in 0..n {
            for (pi, p) in limits[i].iter().enumerate() {
                let d = dom_ids[offsets[i] + pi] as usize;
                if domain[d].is_none() {
                    domain[d] = Some((i, p.clone()));
                }
            }
        }
        let domain: Vec<(usize, LimitElement)> = domain.into_iter().map(Option::unwrap).collect();

        // colimit built by merging along the connecting maps
        let mut col_ids: Vec<Vec<u32>> = Vec::with_capacity(objs);
        let mut col_offsets: Vec<Vec<usize>> = Vec::with_capacity(objs);
        let mut col_reps: Vec<Vec<(usize, u32)>> = Vec::with_capacity(objs);
        for o in 0..objs {
            let mut off = vec![0usize; n + 1];
            for i in 0..n {
                off[i + 1] = off[i] + self.members[i].size(o);
            }
            let mut uf = UnionFind::new(off[n]);
            for i in 0..n {
                for j in 0..n {
                    if self.index.lt(i, j) {
                        let alpha = self.connect(i, j).unwrap();
                        for x in 0..self.members[i].size(o) as u32 {
                            uf.union((off[i] as u32) + x, (off[j] as u32) + alpha.apply(o, x));
                        }
                    }
                }
            }
            let ids = uf.canonical_labels();
            let count = ids.iter().max().map_or(0, |&m| m as usize + 1);
            let mut reps = vec![(usize::MAX, 0u32); count];
            for i in 0..n {
                for x in 0..self.members[i].size(o) as u32 {
                    let c = ids[off[i] + x as usize] as usize;
                    if reps[c].0 == usize::MAX {
                        reps[c] = (i, x);
                    }
                }
            }
            col_ids.push(ids);
            col_offsets.push(off);
            col_reps.push(reps);
        }
        let class_of = |o: ObjId, i: usize, x: u32| col_ids[o][col_offsets[o][i] + x as usize];
        let carriers = (0..objs)
            .map(|o| {
                Carrier::labeled(
                    col_reps[o]
                        .iter()
                        .map(|&(i, x)| format!("{}@{}", self.members[i].label(o, x), self.index.name(i)))
                        .collect(),
                )
            })
            .collect();
        let mut actions = Vec::with_capacity(cat.morphism_count());
        for f in 0..cat.morphism_count() {
            let m = cat.morphism(f);
            let mut map = vec![u32::MAX; col_reps[m.dom].len()];
            for i in 0..n {
                for x in 0..self.members[i].size(m.dom) as u32 {
                    let c = class_of(m.dom, i, x) as usize;
                    let d = class_of(m.cod, i, self.members[i].act(f, x));
                    assert!(map[c] == u32::MAX || map[c] == d, "connecting maps are natural");
                    map[c] = d;
                }
            }
            actions.push(map);
        }
        let colimit = ESet::new(cat.clone(), carriers, actions).expect("the colimit is an E-set");
        let codomain = colimit.limit();

        let image = |i: usize, p: &LimitElement| -> usize {
            let coords: Vec<u32> = (0..objs).map(|o| class_of(o, i, p.coords[o])).collect();
            codomain
                .binary_search(&LimitElement { coords })
                .expect("ι lands in the limit of the colimit")
        };
        let map: Vec<usize> = domain.iter().map(|(i, p)| image(*i, p)).collect();
        for i in 0..n {
            for (pi, p) in limits[i].iter().enumerate() {
                debug_assert_eq!(map[dom_ids[offsets[i] + pi] as usize], image(i, p));
            }
        }

        let tuple_label = |x: &ESet, p: &LimitElement| -> String {
            let parts: Vec<String> = (0..objs).map(|o| x.label(o, p.coords[o]).into_owned()).collect();
            format!("({})", parts.join(","))
        };
        let domain_labels: Vec<String> = domain
            .iter()
            .map(|(i, p)| format!("{}@{}", tuple_label(&self.members[*i], p), self.index.name(*i)))
            .collect();
        let codomain_labels: Vec<String> = codomain.iter().map(|p| tuple_label(&colimit, p)).collect();

        let mut preimage: Vec<Option<usize>> = vec![None; codomain.len()];
        let mut injective = Verdict::Proven { stage: self.top };
        for (d, &c) in map.iter().enumerate() {
            match preimage[c] {
                Some(e) => {
                    if injective.is_proven() {
                        injective = Verdict::RefutedWithinHorizon {
                            horizon: self.top,
                            witness: Witness::new(
                                "collision",
                                vec![domain_labels[e].clone(), domain_labels[d].clone(), codomain_labels[c].clone()],
                            ),
                        };
                    }
                }
                None => preimage[c] = Some(d),
            }
        }
        let surjective = match preimage.iter().position(Option::is_none) {
            Some(c) => Verdict::RefutedWithinHorizon {
                horizon: self.top,
                witness: Witness::new("not_hit", vec![codomain_labels[c].clone()]),
            },
            None => Verdict::Proven { stage: self.top },
        };
        IotaReport { domain, domain_labels, codomain, codomain_labels, map, injective, surjective }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{monoid_to_category, FiniteMonoid};

    fn c2() -> Arc<FiniteCategory> {
        let m = FiniteMonoid::from_fn(vec!["1".into(), "g".into()], 0, |a, b| a ^ b).unwrap();
        Arc::new(monoid_to_category(&m))
    }

    #[test]
    fn collapsing_chain() {
        let cat = c2();
        let x0 = ESet::new(cat.clone(), vec![Carrier::labeled(vec!["p".into(), "q".into()])], vec![vec![0, 1], vec![1, 0]])
            .unwrap();
        let x1 = ESet::new(cat, vec![Carrier::labeled(vec!["r".into()])], vec![vec![0], vec![0]]).unwrap();
        let s = FiniteDirectedSystem::new(Poset::chain(2), vec![x0, x1], vec![((0, 1), vec![vec![0, 0]])]).unwrap();
        assert_eq!(s.colimit_eset().eset.size(0), 1);
        assert_eq!(s.equalizing_stage(0, 0, 0, 1, 0), Some(1));
        assert_eq!(s.representative(1, 0, 0), (0, 0));
        let r = s.iota();
        assert!(r.is_bijective());
        assert_eq!(r.domain.len(), 1);
        assert_eq!(r.domain[0].0, 1);
    }

    #[test]
    fn one_stage_is_bijective() {
        let cat = c2();
        let x = ESet::new(cat, vec![Carrier::anonymous(3)], vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let r = FiniteDirectedSystem::single(x).iota();
        assert!(r.is_bijective());
        assert_eq!(r.codomain.len(), 1);
    }

    #[test]
    fn rejects_broken_systems() {
        let cat = c2();
        let x = ESet::new(cat, vec![Carrier::anonymous(2)], vec![vec![0, 1], vec![1, 0]]).unwrap();
        // not directed
        let e = FiniteDirectedSystem::new(Poset::antichain(2), vec![x.clone(), x.clone()], vec![]);
        assert!(matches!(e, Err(Error::InvalidSystem(_))));
        // missing map
        let e = FiniteDirectedSystem::new(Poset::chain(2), vec![x.clone(), x.clone()], vec![]);
        assert!(matches!(e, Err(Error::InvalidSystem(_))));
        // cocycle failure: 0→1 swap, 1→2 id, 0→2 id
        let swap = vec![vec![1, 0]];
        let id = vec![vec![0, 1]];
        let e = FiniteDirectedSystem::new(
            Poset::chain(3),
            vec![x.clone(), x.clone(), x],
            vec![((0, 1), swap), ((1, 2), id.clone()), ((0, 2), id)],
        );
        assert!(matches!(e, Err(Error::InvalidSystem(m)) if m.contains("≠")));
    }
}
