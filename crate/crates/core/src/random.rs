//! Seeded random structures for property suites: concrete categories,
//! E-sets, finite directed systems, posets and monoids.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::congruence::{congruence_closure, CongruenceFamily, RelationFamily, TaggedPair};
use crate::dirsys::FiniteDirectedSystem;
use crate::eset::{hom_functor, trivial_eset, ESet};
use crate::structures::{FiniteCategory, FiniteMonoid, Morphism, Poset};

/// Bounds for random categories and E-sets.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_objects: 4, max_morphisms: 10, max_elements: 6 }
    }
}

/// A category of functions between small sets, generated by a few random
/// functions and closed under composition.
pub fn random_category<R: Rng>(rng: &mut R, lim: Limits) -> FiniteCategory {
    let n = rng.gen_range(1..=lim.max_objects.max(1));
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut gens: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        let (d, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        gens.push((d, c, (0..sizes[d]).map(|_| rng.gen_range(0..sizes[c])).collect()));
    }
    loop {
        if let Some(c) = close_functions(n, &sizes, &gens, lim.max_morphisms) {
            return c;
        }
        gens.pop();
    }
}

fn close_functions(n: usize, sizes: &[usize], gens: &[(usize, usize, Vec<usize>)], max: usize) -> Option<FiniteCategory> {
    let mut mors: Vec<(usize, usize, Vec<usize>)> = (0..n).map(|o| (o, o, (0..sizes[o]).collect())).collect();
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    for (i, m) in mors.iter().enumerate() {
        index.insert(m.clone(), i);
    }
    let mut i = 0;
    for g in gens {
        if !index.contains_key(g) {
            index.insert(g.clone(), mors.len());
            mors.push(g.clone());
        }
    }
    // close under post-composition with generators
    while i < mors.len() {
        for g in gens {
            let (d, _, ref f) = mors[i];
            let (gd, gc, ref gf) = *g;
            if mors[i].1 == gd {
                let comp = (d, gc, f.iter().map(|&x| gf[x]).collect::<Vec<_>>());
                if !index.contains_key(&comp) {
                    index.insert(comp.clone(), mors.len());
                    mors.push(comp);
                    if mors.len() > max {
                        return None;
                    }
                }
            }
        }
        i += 1;
    }
    if mors.len() > max {
        return None;
    }
    let objects = (0..n).map(|o| format!("E{o}")).collect();
    let morphisms = mors
        .iter()
        .enumerate()
        .map(|(i, &(d, c, _))| Morphism { name: if i < n { format!("id{i}") } else { format!("f{}", i - n) }, dom: d, cod: c })
        .collect();
    let c = FiniteCategory::new(objects, morphisms, (0..n).collect(), |a, b| {
        let (bd, _, ref bf) = mors[b];
        let (_, ac, ref af) = mors[a];
        index.get(&(bd, ac, bf.iter().map(|&x| af[x]).collect())).copied()
    })
    .expect("functions under composition form a category");
    Some(c)
}

/// Random pairs at objects with nonempty carriers.
pub fn random_relation<R: Rng>(rng: &mut R, x: &ESet, count: usize) -> RelationFamily {
    let objs: Vec<usize> = (0..x.category().object_count()).filter(|&o| x.size(o) > 0).collect();
    let mut pairs = Vec::new();
    if objs.is_empty() {
        return RelationFamily::new(pairs);
    }
    for _ in 0..count {
        let o = *objs.choose(rng).expect("nonempty");
        let n = x.size(o) as u32;
        pairs.push(TaggedPair::new(o, rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    RelationFamily::new(pairs)
}

/// A coproduct of representables and trivial pieces, merged down until
/// every carrier has at most `max_elements` elements, then quotiented by
/// a few more random pairs.
pub fn random_eset<R: Rng>(rng: &mut R, cat: &Arc<FiniteCategory>, lim: Limits) -> ESet {
    let n = cat.object_count();
    let pieces = rng.gen_range(1..=3);
    let mut x: Option<ESet> = None;
    for _ in 0..pieces {
        let piece = if rng.gen_bool(0.75) { hom_functor(cat, rng.gen_range(0..n)) } else { trivial_eset(cat) };
        x = Some(match x {
            None => piece,
            Some(prev) => prev.coproduct(&piece).expect("same category"),
        });
    }
    let mut x = x.expect("at least one piece");
    loop {
        let big: Vec<usize> = (0..n).filter(|&o| x.size(o) > lim.max_elements).collect();
        let extra = if big.is_empty() { rng.gen_range(0..=1) } else { 0 };
        if big.is_empty() && extra == 0 {
            return x;
        }
        let mut pairs = Vec::new();
        for &o in &big {
            let s = x.size(o) as u32;
            pairs.push(TaggedPair::new(o, rng.gen_range(0..s), rng.gen_range(0..s)));
        }
        if extra > 0 {
            pairs.extend(random_relation(rng, &x, 1).pairs);
        }
        let c = congruence_closure(&x, &RelationFamily::new(pairs)).expect("pairs are in range").congruence;
        x = x.quotient(&c).expect("closure is a congruence").0;
        if !big.is_empty() {
            continue;
        }
        return x;
    }
}

/// Random poset on `n` elements `p0..`, with `i ≤ j` only when `i < j`
/// numerically before closure.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let density: f64 = rng.gen_range(0.05..0.6);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Poset::new((0..n).map(|i| format!("p{i}")).collect(), &pairs).expect("a DAG closes to a poset")
}

/// A random directed poset: a random poset plus a top element `T`.
pub fn random_directed_poset<R: Rng>(rng: &mut R, max_len: usize) -> Poset {
    let m = rng.gen_range(0..max_len.max(1));
    let base = random_poset(rng, m);
    let mut names = base.names().to_vec();
    names.push("T".into());
    let mut pairs = base.relation_pairs();
    pairs.extend((0..m).map(|i| (i, m)));
    Poset::new(names, &pairs).expect("adding a top keeps a poset")
}

/// `X_i = Y_i / C_i` where `Y_i` is the sub-E-set of `Y` generated by the
/// seeds of all `k ≤ i` and `C_i` is the congruence generated by their
/// pairs, so both grow along the order and the induced maps are coherent.
pub fn random_directed_system<R: Rng>(rng: &mut R, y: &ESet, index: Poset) -> FiniteDirectedSystem {
    let m = index.len();
    let objs: Vec<usize> = (0..y.category().object_count()).filter(|&o| y.size(o) > 0).collect();
    let mut seeds: Vec<Vec<(usize, u32)>> = Vec::with_capacity(m);
    let mut pairs: Vec<Vec<TaggedPair>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut s = Vec::new();
        if !objs.is_empty() {
            for _ in 0..rng.gen_range(0..=2) {
                let o = *objs.choose(rng).expect("nonempty");
                s.push((o, rng.gen_range(0..y.size(o) as u32)));
            }
        }
        seeds.push(s);
        let count = rng.gen_range(0..=2);
        pairs.push(random_relation(rng, y, count).pairs);
    }
    let mut subs = Vec::with_capacity(m);
    let mut members = Vec::with_capacity(m);
    for i in 0..m {
        let below: Vec<usize> = (0..m).filter(|&k| index.leq(k, i)).collect();
        let s: Vec<(usize, u32)> = below.iter().flat_map(|&k| seeds[k].iter().copied()).collect();
        let p: Vec<TaggedPair> = below.iter().flat_map(|&k| pairs[k].iter().copied()).collect();
        let c = congruence_closure(y, &RelationFamily::new(p)).expect("pairs in range").congruence;
        let (sub, incl) = y.generated_subeset(&s).expect("seeds in range");
        let ids: Vec<Vec<u32>> = (0..y.category().object_count())
            .map(|o| (0..sub.size(o) as u32).map(|e| c.class_id(o, incl.apply(o, e))).collect())
            .collect();
        let (q, proj) = sub.quotient(&CongruenceFamily::from_ids(ids)).expect("restriction is a congruence");
        subs.push((incl, proj, c));
        members.push(q);
    }
    let mut connect = Vec::new();
    for (a, b) in index.relation_pairs() {
        if a == b {
            continue;
        }
        let (ia, pa, _) = &subs[a];
        let (ib, pb, _) = &subs[b];
        let comps = (0..y.category().object_count())
            .map(|o| {
                let mut in_b: HashMap<u32, u32> = HashMap::new();
                for e in 0..ib.component(o).len() as u32 {
                    in_b.insert(ib.apply(o, e), e);
                }
                let mut comp = vec![u32::MAX; members[a].size(o)];
                for e in 0..ia.component(o).len() as u32 {
                    let cls = pa.apply(o, e);
                    comp[cls as usize] = pb.apply(o, in_b[&ia.apply(o, e)]);
                }
                comp
            })
            .collect();
        connect.push(((a, b), comps));
    }
    FiniteDirectedSystem::new(index, members, connect).expect("monotone subobjects and congruences give a system")
}

/// The transformation monoid generated by random self-maps of a set of at
/// most 5 points, resampled until it has at most `max_size` elements, with
/// elements shuffled and named `m0..`.
pub fn random_monoid<R: Rng>(rng: &mut R, max_size: usize) -> FiniteMonoid {
    loop {
        let d = rng.gen_range(1..=5);
        let gens: Vec<Vec<usize>> = (0..rng.gen_range(0..=3))
            .map(|_| (0..d).map(|_| rng.gen_range(0..d)).collect())
            .collect();
        let id: Vec<usize> = (0..d).collect();
        let mut elems = vec![id];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        let mut too_big = false;
        while i < elems.len() && !too_big {
            for g in &gens {
                let c: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&c) {
                    index.insert(c.clone(), elems.len());
                    elems.push(c);
                    if elems.len() > max_size {
                        too_big = true;
                        break;
                    }
                }
            }
            i += 1;
        }
        if too_big {
            continue;
        }
        let n = elems.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        // element k of the result is elems[perm[k]]; a·b applies b first
        let mut pos = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            pos[p] = k;
        }
        let mul = |a: usize, b: usize| {
            let (fa, fb) = (&elems[perm[a]], &elems[perm[b]]);
            let c: Vec<usize> = fb.iter().map(|&x| fa[x]).collect();
            pos[index[&c]]
        };
        let names = (0..n).map(|k| format!("m{k}")).collect();
        return FiniteMonoid::from_fn(names, pos[0], mul).expect("transformation monoids are monoids");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let cat = Arc::new(random_category(&mut rng, Limits::default()));
            assert!(cat.morphism_count() <= 10 && cat.object_count() <= 4);
            let x = random_eset(&mut rng, &cat, Limits::default());
            assert!((0..cat.object_count()).all(|o| x.size(o) <= 6));
            let idx = random_directed_poset(&mut rng, 4);
            let s = random_directed_system(&mut rng, &x, idx);
            assert_eq!(s.members().len(), s.index().len());
            let m = random_monoid(&mut rng, 5);
            assert!(m.len() <= 5);
        }
    }
}
