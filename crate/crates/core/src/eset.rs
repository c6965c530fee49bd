//! Finite set-valued functors on a [`FiniteCategory`], their limits,
//! hom-functors, quotients and generated sub-functors.

use std::borrow::Cow;
use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crate::congruence::CongruenceFamily;
use crate::error::{Error, Result};
use crate::structures::{FiniteCategory, MorId, ObjId};

/// A finite carrier set. Elements are `0..len`; labels are optional and
/// default to the decimal index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    len: usize,
    labels: Option<Vec<String>>,
}

impl Carrier {
    pub fn anonymous(len: usize) -> Self {
        Carrier { len, labels: None }
    }

    pub fn labeled(labels: Vec<String>) -> Self {
        Carrier { len: labels.len(), labels: Some(labels) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn label(&self, i: u32) -> Cow<'_, str> {
        match &self.labels {
            Some(l) => Cow::Borrowed(&l[i as usize]),
            None => Cow::Owned(i.to_string()),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        match &self.labels {
            Some(l) => l.iter().position(|s| s == label).map(|i| i as u32),
            None => label.parse::<u32>().ok().filter(|&i| (i as usize) < self.len),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len as u32).map(|i| self.label(i).into_owned()).collect()
    }
}

/// A functor from a finite category to finite sets.
#[derive(Clone, Debug)]
pub struct ESet {
    cat: Arc<FiniteCategory>,
    carriers: Vec<Carrier>,
    actions: Vec<Vec<u32>>,
}

impl PartialEq for ESet {
    fn eq(&self, other: &Self) -> bool {
        *self.cat == *other.cat && self.carriers == other.carriers && self.actions == other.actions
    }
}

impl ESet {
    /// Validates carrier sizes, identity actions and functoriality.
    pub fn new(cat: Arc<FiniteCategory>, carriers: Vec<Carrier>, actions: Vec<Vec<u32>>) -> Result<Self> {
        let x = ESet { cat, carriers, actions };
        x.validate()?;
        Ok(x)
    }

    /// Builds an E-set from the actions of some morphisms; the others are
    /// derived by composition. The given morphisms must generate the category.
    pub fn from_partial_actions(
        cat: Arc<FiniteCategory>,
        carriers: Vec<Carrier>,
        given: Vec<(MorId, Vec<u32>)>,
    ) -> Result<Self> {
        let m = cat.morphism_count();
        if carriers.len() != cat.object_count() {
            return Err(Error::InvalidESet("one carrier per object is required".into()));
        }
        let mut known: Vec<Option<Vec<u32>>> = vec![None; m];
        for o in 0..cat.object_count() {
            known[cat.identity(o)] = Some((0..carriers[o].len() as u32).collect());
        }
        for (f, map) in &given {
            let mor = cat.morphism(*f);
            check_map(&cat, *f, map, carriers[mor.dom].len(), carriers[mor.cod].len())?;
            if let Some(prev) = &known[*f] {
                if prev != map {
                    return Err(Error::InvalidESet(format!(
                        "action of `{}` conflicts with the identity",
                        mor.name
                    )));
                }
            }
            known[*f] = Some(map.clone());
        }
        let mut queue: VecDeque<MorId> = (0..m).filter(|&f| known[f].is_some()).collect();
        while let Some(f) = queue.pop_front() {
            for (g, gmap) in &given {
                if !cat.composable(*g, f) {
                    continue;
                }
                let c = cat.compose(*g, f);
                let fmap = known[f].as_ref().unwrap();
                let cmap: Vec<u32> = fmap.iter().map(|&x| gmap[x as usize]).collect();
                match &known[c] {
                    Some(prev) if *prev != cmap => {
                        return Err(Error::InvalidESet(format!(
                            "actions are not functorial at `{}` ∘ `{}`",
                            cat.morphism(*g).name,
                            cat.morphism(f).name
                        )))
                    }
                    Some(_) => {}
                    None => {
                        known[c] = Some(cmap);
                        queue.push_back(c);
                    }
                }
            }
        }
        let mut actions = Vec::with_capacity(m);
        for (f, k) in known.into_iter().enumerate() {
            match k {
                Some(map) => actions.push(map),
                None => {
                    return Err(Error::InvalidESet(format!(
                        "action of `{}` is not determined by the given actions",
                        cat.morphism(f).name
                    )))
                }
            }
        }
        ESet::new(cat, carriers, actions)
    }

    fn validate(&self) -> Result<()> {
        let cat = &self.cat;
        if self.carriers.len() != cat.object_count() {
            return Err(Error::InvalidESet("one carrier per object is required".into()));
        }
        if self.actions.len() != cat.morphism_count() {
            return Err(Error::InvalidESet("one action per morphism is required".into()));
        }
        for f in 0..cat.morphism_count() {
            let mor = cat.morphism(f);
            check_map(cat, f, &self.actions[f], self.size(mor.dom), self.size(mor.cod))?;
        }
        for o in 0..cat.object_count() {
            let id = &self.actions[cat.identity(o)];
            if id.iter().enumerate().any(|(i, &y)| y as usize != i) {
                return Err(Error::InvalidESet(format!(
                    "identity of `{}` does not act trivially",
                    cat.object_name(o)
                )));
            }
        }
        // Checking g ∘ b for generators g covers every composite by induction
        // on word length.
        for &g in cat.generators() {
            for b in cat.precomposable(g) {
                let c = cat.compose(g, b);
                let (gm, bm, cm) = (&self.actions[g], &self.actions[b], &self.actions[c]);
                if bm.iter().zip(cm).any(|(&x, &y)| gm[x as usize] != y) {
                    return Err(Error::InvalidESet(format!(
                        "action of `{}` ∘ `{}` is not the composite of the actions",
                        cat.morphism(g).name,
                        cat.morphism(b).name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.cat
    }

    pub fn carrier(&self, o: ObjId) -> &Carrier {
        &self.carriers[o]
    }

    pub fn carriers(&self) -> &[Carrier] {
        &self.carriers
    }

    pub fn size(&self, o: ObjId) -> usize {
        self.carriers[o].len()
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Carrier::len).sum()
    }

    pub fn action(&self, f: MorId) -> &[u32] {
        &self.actions[f]
    }

    pub fn act(&self, f: MorId, x: u32) -> u32 {
        self.actions[f][x as usize]
    }

    pub fn label(&self, o: ObjId, x: u32) -> Cow<'_, str> {
        self.carriers[o].label(x)
    }

    pub fn element(&self, object: &str, label: &str) -> Result<(ObjId, u32)> {
        let o = self.cat.object_id(object)?;
        let x = self.carriers[o]
            .index_of(label)
            .ok_or_else(|| Error::UnknownElement(format!("{label}@{object}")))?;
        Ok((o, x))
    }

    /// Product of the carrier sizes, saturating.
    pub fn product_size(&self) -> u128 {
        self.carriers
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// All tuples satisfying the compatibility conditions, sorted.
    pub fn limit(&self) -> Vec<LimitElement> {
        let sizes: Vec<usize> = self.carriers.iter().map(Carrier::len).collect();
        let arrows: Vec<Arrow<'_>> = self
            .cat
            .generators()
            .iter()
            .map(|&g| {
                let m = self.cat.morphism(g);
                Arrow { dom: m.dom, cod: m.cod, map: &self.actions[g] }
            })
            .collect();
        limit_tuples(&sizes, &arrows)
            .into_iter()
            .map(|coords| LimitElement { coords })
            .collect()
    }

    /// Whether a tuple satisfies the compatibility condition for every morphism.
    pub fn is_compatible(&self, coords: &[u32]) -> bool {
        self.cat.morphisms().iter().enumerate().all(|(f, m)| {
            self.actions[f][coords[m.dom] as usize] == coords[m.cod]
        })
    }

    /// Coproduct with another E-set on the same category; elements of `other`
    /// come after those of `self` in every carrier.
    pub fn coproduct(&self, other: &ESet) -> Result<ESet> {
        if *self.cat != *other.cat {
            return Err(Error::InvalidESet("coproduct of E-sets over different categories".into()));
        }
        let carriers = (0..self.cat.object_count())
            .map(|o| {
                let (a, b) = (&self.carriers[o], &other.carriers[o]);
                if a.labels.is_none() && b.labels.is_none() {
                    Carrier::anonymous(a.len() + b.len())
                } else {
                    let mut l = a.labels();
                    let mut used: HashSet<String> = l.iter().cloned().collect();
                    for s in b.labels() {
                        let mut s = format!("{s}'");
                        while used.contains(&s) {
                            s.push('\'');
                        }
                        used.insert(s.clone());
                        l.push(s);
                    }
                    Carrier::labeled(l)
                }
            })
            .collect();
        let actions = (0..self.cat.morphism_count())
            .map(|f| {
                let shift = self.size(self.cat.morphism(f).cod) as u32;
                let mut map = self.actions[f].clone();
                map.extend(other.actions[f].iter().map(|&y| y + shift));
                map
            })
            .collect();
        ESet::new(self.cat.clone(), carriers, actions)
    }

    /// The smallest sub-E-set containing `seeds`, with its inclusion.
    /// Sub-carriers keep the original element order and labels.
    pub fn generated_subeset(&self, seeds: &[(ObjId, u32)]) -> Result<(ESet, ESetMorphism)> {
        let n = self.cat.object_count();
        let mut inside: Vec<Vec<bool>> = (0..n).map(|o| vec![false; self.size(o)]).collect();
        let mut stack = Vec::new();
        for &(o, x) in seeds {
            if o >= n || x as usize >= self.size(o) {
                return Err(Error::UnknownElement(format!("seed {x}@{o}")));
            }
            if !inside[o][x as usize] {
                inside[o][x as usize] = true;
                stack.push((o, x));
            }
        }
        while let Some((o, x)) = stack.pop() {
            for f in self.cat.out_of(o) {
                let p = self.cat.morphism(f).cod;
                let y = self.act(f, x);
                if !inside[p][y as usize] {
                    inside[p][y as usize] = true;
                    stack.push((p, y));
                }
            }
        }
        let members: Vec<Vec<u32>> = inside
            .iter()
            .map(|v| (0..v.len() as u32).filter(|&i| v[i as usize]).collect())
            .collect();
        let mut position: Vec<Vec<u32>> = inside.iter().map(|v| vec![u32::MAX; v.len()]).collect();
        for o in 0..n {
            for (k, &x) in members[o].iter().enumerate() {
                position[o][x as usize] = k as u32;
            }
        }
        let carriers = (0..n)
            .map(|o| Carrier::labeled(members[o].iter().map(|&x| self.label(o, x).into_owned()).collect()))
            .collect();
        let actions = (0..self.cat.morphism_count())
            .map(|f| {
                let m = self.cat.morphism(f);
                members[m.dom]
                    .iter()
                    .map(|&x| position[m.cod][self.act(f, x) as usize])
                    .collect()
            })
            .collect();
        let sub = ESet::new(self.cat.clone(), carriers, actions)?;
        let inclusion = ESetMorphism::new(&sub, self, members)?;
        Ok((sub, inclusion))
    }

    /// The quotient by a congruence, with its projection.
    pub fn quotient(&self, c: &CongruenceFamily) -> Result<(ESet, ESetMorphism)> {
        c.check_on(self)?;
        let n = self.cat.object_count();
        let mut carriers = Vec::with_capacity(n);
        for o in 0..n {
            let classes = c.classes_of(o);
            let labels = classes
                .iter()
                .map(|cls| {
                    let parts: Vec<String> = cls.iter().map(|&x| self.label(o, x).into_owned()).collect();
                    format!("{{{}}}", parts.join(","))
                })
                .collect();
            carriers.push(Carrier::labeled(labels));
        }
        let actions = (0..self.cat.morphism_count())
            .map(|f| {
                let m = self.cat.morphism(f);
                let mut map = vec![0u32; c.class_count(m.dom)];
                for x in 0..self.size(m.dom) as u32 {
                    map[c.class_id(m.dom, x) as usize] = c.class_id(m.cod, self.act(f, x));
                }
                map
            })
            .collect();
        let q = ESet::new(self.cat.clone(), carriers, actions)?;
        let components = (0..n).map(|o| c.ids(o).to_vec()).collect();
        let proj = ESetMorphism::new(self, &q, components)?;
        Ok((q, proj))
    }
}

fn check_map(cat: &FiniteCategory, f: MorId, map: &[u32], dom: usize, cod: usize) -> Result<()> {
    if map.len() != dom || map.iter().any(|&y| y as usize >= cod) {
        return Err(Error::InvalidESet(format!(
            "action of `{}` is not a map between the carriers",
            cat.morphism(f).name
        )));
    }
    Ok(())
}

/// One compatible tuple, indexed by object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LimitElement {
    pub coords: Vec<u32>,
}

impl LimitElement {
    pub fn coordinate(&self, o: ObjId) -> u32 {
        self.coords[o]
    }
}

/// A map between carriers used as a constraint `x_cod = map[x_dom]`.
#[derive(Clone, Copy, Debug)]
pub struct Arrow<'a> {
    pub dom: usize,
    pub cod: usize,
    pub map: &'a [u32],
}

const UNSET: u32 = u32::MAX;

/// Enumerates all tuples `x` with `x[a.cod] == a.map[x[a.dom]]` for every
/// arrow, by backtracking with forced propagation along arrows. Objects with
/// the most incident arrows are branched on first. Output is sorted.
pub fn limit_tuples(sizes: &[usize], arrows: &[Arrow<'_>]) -> Vec<Vec<u32>> {
    let n = sizes.len();
    if sizes.iter().any(|&s| s == 0) {
        return Vec::new();
    }
    let mut out_arrows = vec![Vec::new(); n];
    let mut degree = vec![0usize; n];
    for (i, a) in arrows.iter().enumerate() {
        out_arrows[a.dom].push(i);
        degree[a.dom] += 1;
        degree[a.cod] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&o| (std::cmp::Reverse(out_arrows[o].len()), std::cmp::Reverse(degree[o]), o));

    struct Search<'s, 'a> {
        sizes: &'s [usize],
        arrows: &'s [Arrow<'a>],
        out_arrows: Vec<Vec<usize>>,
        order: Vec<usize>,
        assign: Vec<u32>,
        trail: Vec<usize>,
        stack: Vec<(usize, u32)>,
        found: Vec<Vec<u32>>,
    }

    impl Search<'_, '_> {
        fn propagate(&mut self, o: usize, v: u32) -> bool {
            self.stack.clear();
            self.stack.push((o, v));
            while let Some((p, x)) = self.stack.pop() {
                if self.assign[p] != UNSET {
                    if self.assign[p] != x {
                        return false;
                    }
                    continue;
                }
                self.assign[p] = x;
                self.trail.push(p);
                for &ai in &self.out_arrows[p] {
                    let a = self.arrows[ai];
                    self.stack.push((a.cod, a.map[x as usize]));
                }
            }
            true
        }

        fn run(&mut self, pos: usize) {
            if pos == self.order.len() {
                self.found.push(self.assign.clone());
                return;
            }
            let o = self.order[pos];
            if self.assign[o] != UNSET {
                self.run(pos + 1);
                return;
            }
            for v in 0..self.sizes[o] as u32 {
                let mark = self.trail.len();
                if self.propagate(o, v) {
                    self.run(pos + 1);
                }
                while self.trail.len() > mark {
                    let p = self.trail.pop().unwrap();
                    self.assign[p] = UNSET;
                }
            }
        }
    }

    let mut s = Search {
        sizes,
        arrows,
        out_arrows,
        order,
        assign: vec![UNSET; n],
        trail: Vec::new(),
        stack: Vec::new(),
        found: Vec::new(),
    };
    s.run(0);
    let mut found = s.found;
    found.sort();
    found
}

/// A natural transformation between two E-sets over the same category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ESetMorphism {
    components: Vec<Vec<u32>>,
}

impl ESetMorphism {
    pub fn new(source: &ESet, target: &ESet, components: Vec<Vec<u32>>) -> Result<Self> {
        let cat = source.category();
        if **cat != **target.category() {
            return Err(Error::InvalidMorphism("source and target live over different categories".into()));
        }
        if components.len() != cat.object_count() {
            return Err(Error::InvalidMorphism("one component per object is required".into()));
        }
        for (o, comp) in components.iter().enumerate() {
            if comp.len() != source.size(o) || comp.iter().any(|&y| y as usize >= target.size(o)) {
                return Err(Error::InvalidMorphism(format!(
                    "component at `{}` is not a map between the carriers",
                    cat.object_name(o)
                )));
            }
        }
        for &g in cat.generators() {
            let m = cat.morphism(g);
            for x in 0..source.size(m.dom) as u32 {
                let lhs = target.act(g, components[m.dom][x as usize]);
                let rhs = components[m.cod][source.act(g, x) as usize];
                if lhs != rhs {
                    return Err(Error::InvalidMorphism(format!(
                        "not natural along `{}` at element `{}`",
                        m.name,
                        source.label(m.dom, x)
                    )));
                }
            }
        }
        Ok(ESetMorphism { components })
    }

    pub fn identity(x: &ESet) -> Self {
        ESetMorphism {
            components: (0..x.category().object_count())
                .map(|o| (0..x.size(o) as u32).collect())
                .collect(),
        }
    }

    pub fn component(&self, o: ObjId) -> &[u32] {
        &self.components[o]
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn apply(&self, o: ObjId, x: u32) -> u32 {
        self.components[o][x as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ESetMorphism) -> ESetMorphism {
        ESetMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().map(|&x| b[x as usize]).collect())
                .collect(),
        }
    }

    /// Image of a limit element, coordinatewise.
    pub fn apply_limit(&self, x: &LimitElement) -> LimitElement {
        LimitElement {
            coords: x.coords.iter().enumerate().map(|(o, &v)| self.apply(o, v)).collect(),
        }
    }
}

/// The covariant hom-functor `hom(e0, -)`, acting by postcomposition.
pub fn hom_functor(cat: &Arc<FiniteCategory>, e0: ObjId) -> ESet {
    union_hom(cat, &[e0]).expect("a single object is a nonempty set").eset
}

/// The union of hom-functors over an object set, with the morphism each
/// element stands for.
#[derive(Clone, Debug)]
pub struct HomUnion {
    pub eset: ESet,
    /// `morphism_at[F][x]` is the morphism `E → F` that element `x` of `H(F)` is.
    pub morphism_at: Vec<Vec<MorId>>,
}

impl HomUnion {
    pub fn element_of(&self, f: MorId) -> Option<(ObjId, u32)> {
        let cod = self.eset.category().morphism(f).cod;
        self.morphism_at[cod].iter().position(|&g| g == f).map(|i| (cod, i as u32))
    }
}

/// Coordinatewise disjoint union of `hom(E, -)` for `E` in `a`, in the
/// order given.
pub fn union_hom(cat: &Arc<FiniteCategory>, a: &[ObjId]) -> Result<HomUnion> {
    if a.is_empty() {
        return Err(Error::EmptyObjectSet);
    }
    let n = cat.object_count();
    let mut seen = vec![false; n];
    for &e in a {
        if e >= n {
            return Err(Error::UnknownObject(e.to_string()));
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(Error::InvalidESet(format!("object `{}` listed twice", cat.object_name(e))));
        }
    }
    let morphism_at: Vec<Vec<MorId>> = (0..n)
        .map(|f| a.iter().flat_map(|&e| cat.hom(e, f).iter().copied()).collect())
        .collect();
    let mut position = vec![0u32; cat.morphism_count()];
    for list in &morphism_at {
        for (i, &g) in list.iter().enumerate() {
            position[g] = i as u32;
        }
    }
    let carriers = morphism_at
        .iter()
        .map(|list| Carrier::labeled(list.iter().map(|&g| cat.morphism(g).name.clone()).collect()))
        .collect();
    let actions = (0..cat.morphism_count())
        .map(|f| {
            let dom = cat.morphism(f).dom;
            morphism_at[dom].iter().map(|&g| position[cat.compose(f, g)]).collect()
        })
        .collect();
    let eset = ESet::new(cat.clone(), carriers, actions)?;
    Ok(HomUnion { eset, morphism_at })
}

/// The functor sending every object to a one-element set.
pub fn trivial_eset(cat: &Arc<FiniteCategory>) -> ESet {
    let carriers = vec![Carrier::labeled(vec!["*".to_string()]); cat.object_count()];
    let actions = vec![vec![0]; cat.morphism_count()];
    ESet::new(cat.clone(), carriers, actions).expect("the trivial functor is a functor")
}

/// Brute-force limit: filter the full cartesian product. Only for testing
/// and small inputs.
pub fn limit_by_product(x: &ESet) -> Vec<LimitElement> {
    let n = x.category().object_count();
    let sizes: Vec<usize> = (0..n).map(|o| x.size(o)).collect();
    let mut out = Vec::new();
    if sizes.iter().any(|&s| s == 0) {
        return out;
    }
    let mut cur = vec![0u32; n];
    loop {
        if x.is_compatible(&cur) {
            out.push(LimitElement { coords: cur.clone() });
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if (cur[i] as usize) < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}
