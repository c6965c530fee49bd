//! Right-division closure in monoids and categories, left congruences, and
//! the diagnostics relating them to finite generation of the improper
//! congruence.

use std::sync::Arc;

use serde::Serialize;

use crate::congruence::{congruence_closure, RelationFamily, TaggedPair};
use crate::enumerate::{for_each_combination, set_partitions};
use crate::error::{Error, Result};
use crate::eset::{hom_functor, union_hom};
use crate::structures::{monoid_to_category, FiniteCategory, FiniteMonoid, MorId};

/// Least `N ⊇ S ∪ {1}` closed under products and right division
/// (`ab, b ∈ N ⟹ a ∈ N`), as a sorted element list.
pub fn right_division_closure(m: &FiniteMonoid, s: &[usize]) -> Vec<usize> {
    let n = m.len();
    let mut inside = vec![false; n];
    inside[m.one()] = true;
    for &x in s {
        inside[x] = true;
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !inside[b] {
                    continue;
                }
                let ab = m.mul(a, b);
                if inside[a] && !inside[ab] {
                    inside[ab] = true;
                    changed = true;
                }
                if inside[ab] && !inside[a] {
                    inside[a] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&x| inside[x]).collect()
}

/// The closure computed in rounds: round `r` applies products and right
/// division once to the set from round `r - 1`. Returns the set after each
/// round until it stops growing.
pub fn right_division_rounds(m: &FiniteMonoid, s: &[usize]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut inside = vec![false; n];
    inside[m.one()] = true;
    for &x in s {
        inside[x] = true;
    }
    let mut rounds = vec![(0..n).filter(|&x| inside[x]).collect::<Vec<_>>()];
    loop {
        let prev = inside.clone();
        for a in 0..n {
            for b in 0..n {
                if !prev[b] {
                    continue;
                }
                let ab = m.mul(a, b);
                if prev[a] {
                    inside[ab] = true;
                }
                if prev[ab] {
                    inside[a] = true;
                }
            }
        }
        if inside == prev {
            return rounds;
        }
        rounds.push((0..n).filter(|&x| inside[x]).collect());
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "witness", rename_all = "snake_case")]
pub enum Search<T> {
    Found(T),
    Exhausted { budget: usize },
}

impl<T> Search<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Search::Found(t) => Some(t),
            Search::Exhausted { .. } => None,
        }
    }
}

/// First subset of `0..universe` (by size, then lexicographically) of size
/// at most `budget` satisfying `pred`.
pub fn smallest_subset<F>(universe: usize, budget: usize, mut pred: F) -> Search<Vec<usize>>
where
    F: FnMut(&[usize]) -> bool,
{
    for k in 0..=budget.min(universe) {
        let mut found = None;
        for_each_combination(universe, k, |c| {
            if pred(c) {
                found = Some(c.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(f) = found {
            return Search::Found(f);
        }
    }
    Search::Exhausted { budget }
}

/// Smallest `S` whose right-division closure is all of `m`.
pub fn multdiv_min(m: &FiniteMonoid, budget: usize) -> Search<Vec<usize>> {
    smallest_subset(m.len(), budget, |s| right_division_closure(m, s).len() == m.len())
}

/// Minimal witnesses for the finiteness conditions on a finite monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Battery {
    /// A smallest monoid generating set.
    pub generators: Vec<usize>,
    pub right_zeros: Vec<usize>,
    /// A smallest nonempty left ideal and an element generating it.
    pub smallest_left_ideal: Vec<usize>,
    pub left_ideal_generator: usize,
    /// Generators of a smallest-generated submonoid `M0` such that
    /// `{a | aM0 ∩ M0 ≠ ∅}` generates `m`.
    pub fgm0_generators: Vec<usize>,
    pub fgm0_submonoid: Vec<usize>,
    pub multdiv: Vec<usize>,
}

pub fn condition_battery(m: &FiniteMonoid) -> Battery {
    let n = m.len();
    let generates = |g: &[usize]| m.generated(g).iter().all(|&b| b);
    let generators = smallest_subset(n, n, generates).found().cloned().expect("M generates itself");
    let (left_ideal_generator, smallest_left_ideal) = (0..n)
        .map(|a| {
            let mut ideal: Vec<usize> = (0..n).map(|u| m.mul(u, a)).collect();
            ideal.sort_unstable();
            ideal.dedup();
            (a, ideal)
        })
        .min_by_key(|(a, ideal)| (ideal.len(), *a))
        .expect("a monoid is nonempty");
    let fgm0 = smallest_subset(n, n, |g| {
        let sub = m.generated(g);
        let meets: Vec<usize> = (0..n)
            .filter(|&a| (0..n).any(|x| sub[x] && sub[m.mul(a, x)]))
            .collect();
        generates(&meets)
    });
    let fgm0_generators = fgm0.found().cloned().expect("M0 = M works");
    let sub = m.generated(&fgm0_generators);
    Battery {
        generators,
        right_zeros: m.right_zeros(),
        smallest_left_ideal,
        left_ideal_generator,
        fgm0_submonoid: (0..n).filter(|&x| sub[x]).collect(),
        fgm0_generators,
        multdiv: multdiv_min(m, n).found().cloned().expect("S = M works"),
    }
}

/// The least left congruence containing `pairs`, as canonical class ids:
/// the congruence closure of the left regular action.
pub fn left_congruence_closure(m: &FiniteMonoid, pairs: &[(usize, usize)]) -> Vec<u32> {
    let cat = Arc::new(monoid_to_category(m));
    let h = hom_functor(&cat, 0);
    let r = RelationFamily::new(pairs.iter().map(|&(s, t)| TaggedPair::new(0, s as u32, t as u32)).collect());
    congruence_closure(&h, &r).expect("pairs of monoid elements").congruence.ids(0).to_vec()
}

pub fn is_left_congruence(m: &FiniteMonoid, ids: &[u32]) -> bool {
    let n = m.len();
    (0..n).all(|a| {
        (0..n).all(|b| ids[a] != ids[b] || (0..n).all(|u| ids[m.mul(u, a)] == ids[m.mul(u, b)]))
    })
}

pub const ENUMERATION_MAX: usize = 6;

/// Every left congruence, as restricted growth strings.
pub fn left_congruences_enumerate(m: &FiniteMonoid) -> Result<Vec<Vec<u32>>> {
    if m.len() > ENUMERATION_MAX {
        return Err(Error::TooLarge(format!("{} elements (at most {ENUMERATION_MAX})", m.len())));
    }
    Ok(set_partitions(m.len())
        .into_iter()
        .filter(|p| is_left_congruence(m, p))
        .collect())
}

pub fn is_right_division_closed_submonoid(m: &FiniteMonoid, n_set: &[usize]) -> bool {
    let mut inside = vec![false; m.len()];
    for &x in n_set {
        inside[x] = true;
    }
    if !inside[m.one()] {
        return false;
    }
    (0..m.len()).all(|a| {
        (0..m.len()).all(|b| {
            if !inside[b] {
                return true;
            }
            let ab = m.mul(a, b);
            (!inside[a] || inside[ab]) && (!inside[ab] || inside[a])
        })
    })
}

/// Result of building the congruence generated by `{(as, at) | a ∈ M, s, t ∈ N}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassOfOne {
    pub right_division_closed_submonoid: bool,
    pub congruence: Vec<u32>,
    pub class_of_one: Vec<usize>,
    /// Elements fixing the class of 1 in the quotient M-set.
    pub stabilizer: Vec<usize>,
    /// Whether the class of 1 is exactly N.
    pub recovers: bool,
}

pub fn class_of_one_correspondence(m: &FiniteMonoid, n_set: &[usize]) -> Result<ClassOfOne> {
    if n_set.iter().any(|&x| x >= m.len()) {
        return Err(Error::UnknownElement("element index out of range".into()));
    }
    let mut pairs = Vec::new();
    for a in 0..m.len() {
        for &s in n_set {
            for &t in n_set {
                pairs.push((m.mul(a, s), m.mul(a, t)));
            }
        }
    }
    let ids = left_congruence_closure(m, &pairs);
    let one = ids[m.one()];
    let class_of_one: Vec<usize> = (0..m.len()).filter(|&x| ids[x] == one).collect();
    let stabilizer: Vec<usize> = (0..m.len()).filter(|&a| ids[m.mul(a, m.one())] == one).collect();
    let mut sorted = n_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(ClassOfOne {
        right_division_closed_submonoid: is_right_division_closed_submonoid(m, &sorted),
        recovers: class_of_one == sorted,
        congruence: ids,
        class_of_one,
        stabilizer,
    })
}

/// For each element `a` whose class is fixed by every left translation,
/// whether adjoining `(a, 1)` to the congruence makes it improper.
pub fn hiccup_check(m: &FiniteMonoid, ids: &[u32]) -> Vec<(usize, bool)> {
    let n = m.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if ids[x] == ids[y] {
                pairs.push((x, y));
            }
        }
    }
    (0..n)
        .filter(|&a| (0..n).all(|u| ids[m.mul(u, a)] == ids[a]))
        .map(|a| {
            let mut p = pairs.clone();
            p.push((a, m.one()));
            let c = left_congruence_closure(m, &p);
            (a, c.iter().all(|&k| k == 0))
        })
        .collect()
}

/// Elements occurring as a component of some pair.
pub fn components(r: &RelationFamily) -> Vec<usize> {
    let mut v: Vec<usize> = r.pairs.iter().flat_map(|p| [p.s as usize, p.t as usize]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Least wide subcategory containing `s`, closed under composition and
/// right division (`a ∘ b, b ∈ E0 ⟹ a ∈ E0`), as a membership vector.
pub fn category_division_closure(cat: &FiniteCategory, s: &[MorId]) -> Vec<bool> {
    let m = cat.morphism_count();
    let mut inside = vec![false; m];
    for o in 0..cat.object_count() {
        inside[cat.identity(o)] = true;
    }
    for &f in s {
        inside[f] = true;
    }
    loop {
        let mut changed = false;
        for b in 0..m {
            if !inside[b] {
                continue;
            }
            let cod = cat.morphism(b).cod;
            for a in cat.out_of(cod).collect::<Vec<_>>() {
                let ab = cat.compose(a, b);
                if inside[a] && !inside[ab] {
                    inside[ab] = true;
                    changed = true;
                }
                if inside[ab] && !inside[a] {
                    inside[a] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return inside;
        }
    }
}

/// Smallest set of non-identity morphisms whose division closure is the
/// whole category.
pub fn emultdiv_min(cat: &FiniteCategory, budget: usize) -> Search<Vec<MorId>> {
    let candidates: Vec<MorId> = (0..cat.morphism_count()).filter(|&f| !cat.is_identity(f)).collect();
    match smallest_subset(candidates.len(), budget, |idx| {
        let s: Vec<MorId> = idx.iter().map(|&i| candidates[i]).collect();
        category_division_closure(cat, &s).iter().all(|&b| b)
    }) {
        Search::Found(idx) => Search::Found(idx.into_iter().map(|i| candidates[i]).collect()),
        Search::Exhausted { budget } => Search::Exhausted { budget },
    }
}

/// Smallest `S1` such that the division closure of `S0 ∪ S1` is the whole
/// category. `S0` must contain exactly one morphism from a member of `a`
/// into each object outside `a`, and nothing else.
pub fn s0s1_min(cat: &FiniteCategory, a: &[usize], s0: &[MorId], budget: usize) -> Result<Search<Vec<MorId>>> {
    let n = cat.object_count();
    let mut in_a = vec![false; n];
    for &e in a {
        if e >= n {
            return Err(Error::UnknownObject(e.to_string()));
        }
        in_a[e] = true;
    }
    let mut hit = vec![0usize; n];
    for &f in s0 {
        if f >= cat.morphism_count() {
            return Err(Error::UnknownMorphism(f.to_string()));
        }
        let m = cat.morphism(f);
        if !in_a[m.dom] || in_a[m.cod] {
            return Err(Error::InvalidCategory(format!(
                "S0 member `{}` must go from an object of A to one outside it",
                m.name
            )));
        }
        hit[m.cod] += 1;
    }
    if let Some(o) = (0..n).find(|&o| !in_a[o] && hit[o] != 1) {
        return Err(Error::InvalidCategory(format!(
            "S0 must contain exactly one morphism into `{}`",
            cat.object_name(o)
        )));
    }
    let candidates: Vec<MorId> = (0..cat.morphism_count()).filter(|&f| !cat.is_identity(f)).collect();
    Ok(match smallest_subset(candidates.len(), budget, |idx| {
        let mut s: Vec<MorId> = s0.to_vec();
        s.extend(idx.iter().map(|&i| candidates[i]));
        category_division_closure(cat, &s).iter().all(|&b| b)
    }) {
        Search::Found(idx) => Search::Found(idx.into_iter().map(|i| candidates[i]).collect()),
        Search::Exhausted { budget } => Search::Exhausted { budget },
    })
}

/// Verdict for a selection of morphisms `E0(E, F) ⊆ E(E, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcategoryCorrespondence {
    pub wide_subcategory: bool,
    pub right_division_closed: bool,
    /// Morphisms `a: E → F` with `(a, 1_F)` in the congruence generated by
    /// `{(a∘s, a∘t)}` on the union of all hom-functors.
    pub recovered: Vec<bool>,
    pub recovers: bool,
}

pub fn division_closed_subcategory_correspondence(
    cat: &Arc<FiniteCategory>,
    selection: &[bool],
) -> Result<SubcategoryCorrespondence> {
    let m = cat.morphism_count();
    if selection.len() != m {
        return Err(Error::InvalidCategory("selection must mark every morphism".into()));
    }
    let ids_in = (0..cat.object_count()).all(|o| selection[cat.identity(o)]);
    let mut closed = true;
    let mut divides = true;
    for b in 0..m {
        for a in cat.out_of(cat.morphism(b).cod).collect::<Vec<_>>() {
            let ab = cat.compose(a, b);
            if selection[a] && selection[b] && !selection[ab] {
                closed = false;
            }
            if selection[ab] && selection[b] && !selection[a] {
                divides = false;
            }
        }
    }
    let all: Vec<usize> = (0..cat.object_count()).collect();
    let h = union_hom(cat, &all)?;
    let mut pairs = Vec::new();
    for s in (0..m).filter(|&s| selection[s]) {
        let f = cat.morphism(s).cod;
        for t in (0..m).filter(|&t| selection[t] && cat.morphism(t).cod == f) {
            for a in cat.out_of(f).collect::<Vec<_>>() {
                let (g, x) = h.element_of(cat.compose(a, s)).unwrap();
                let (_, y) = h.element_of(cat.compose(a, t)).unwrap();
                pairs.push(TaggedPair::new(g, x, y));
            }
        }
    }
    let c = congruence_closure(&h.eset, &RelationFamily::new(pairs))?.congruence;
    let recovered: Vec<bool> = (0..m)
        .map(|a| {
            let f = cat.morphism(a).cod;
            let (_, x) = h.element_of(a).unwrap();
            let (_, id) = h.element_of(cat.identity(f)).unwrap();
            c.related(f, x, id)
        })
        .collect();
    Ok(SubcategoryCorrespondence {
        wide_subcategory: ids_in && closed,
        right_division_closed: divides,
        recovers: recovered == selection,
        recovered,
    })
}
