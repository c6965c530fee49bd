use std::collections::HashMap;

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type MorId = usize;

const NONE: u32 = u32::MAX;

/// A morphism carries its domain and codomain, so hom-sets for distinct
/// ordered pairs of objects are disjoint by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A validated finite category.
///
/// Composition is stored densely: `compose(a, b)` is `a ∘ b` (first `b`,
/// then `a`) and is defined exactly when `cod(b) == dom(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    homs: Vec<Vec<MorId>>,
    table: Vec<u32>,
    generators: Vec<MorId>,
    object_index: HashMap<String, ObjId>,
    morphism_index: HashMap<String, MorId>,
}

impl FiniteCategory {
    /// Builds and validates a category from its raw data.
    ///
    /// `compose(a, b)` is only called on composable pairs and must return
    /// `a ∘ b`.
    pub fn new<F>(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        mut compose: F,
    ) -> Result<Self>
    where
        F: FnMut(MorId, MorId) -> Option<MorId>,
    {
        let n = objects.len();
        let m = morphisms.len();
        let bad = |msg: String| Err(Error::InvalidCategory(msg));

        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return bad(format!("duplicate object `{o}`"));
            }
        }
        let mut morphism_index = HashMap::new();
        for (i, f) in morphisms.iter().enumerate() {
            if f.dom >= n || f.cod >= n {
                return bad(format!("morphism `{}` has an out-of-range endpoint", f.name));
            }
            if morphism_index.insert(f.name.clone(), i).is_some() {
                return bad(format!("duplicate morphism `{}`", f.name));
            }
        }
        if identities.len() != n {
            return bad(format!("expected {n} identities, got {}", identities.len()));
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= m || morphisms[id].dom != o || morphisms[id].cod != o {
                return bad(format!("identity of `{}` is not an endomorphism of it", objects[o]));
            }
        }

        let mut homs = vec![Vec::new(); n * n];
        for (i, f) in morphisms.iter().enumerate() {
            homs[f.dom * n + f.cod].push(i);
        }

        let mut table = vec![NONE; m * m];
        for a in 0..m {
            for b in 0..m {
                if morphisms[b].cod != morphisms[a].dom {
                    continue;
                }
                let c = match compose(a, b) {
                    Some(c) if c < m => c,
                    _ => {
                        return bad(format!(
                            "composite `{}` ∘ `{}` is missing",
                            morphisms[a].name, morphisms[b].name
                        ))
                    }
                };
                if morphisms[c].dom != morphisms[b].dom || morphisms[c].cod != morphisms[a].cod {
                    return bad(format!(
                        "composite `{}` ∘ `{}` = `{}` has the wrong endpoints",
                        morphisms[a].name, morphisms[b].name, morphisms[c].name
                    ));
                }
                table[a * m + b] = c as u32;
            }
        }

        let cat = FiniteCategory {
            objects,
            morphisms,
            identities,
            homs,
            table,
            generators: Vec::new(),
            object_index,
            morphism_index,
        };
        cat.check_laws()?;
        let generators = cat.compute_generators();
        Ok(FiniteCategory { generators, ..cat })
    }

    fn check_laws(&self) -> Result<()> {
        let m = self.morphisms.len();
        for f in 0..m {
            let Morphism { dom, cod, .. } = self.morphisms[f];
            if self.compose(self.identities[cod], f) != f || self.compose(f, self.identities[dom]) != f {
                return Err(Error::InvalidCategory(format!(
                    "identities are not neutral for `{}`",
                    self.morphisms[f].name
                )));
            }
        }
        for a in 0..m {
            for b in self.precomposable(a) {
                let ab = self.compose(a, b);
                for c in self.precomposable(b) {
                    if self.compose(ab, c) != self.compose(a, self.compose(b, c)) {
                        return Err(Error::InvalidCategory(format!(
                            "composition is not associative on (`{}`, `{}`, `{}`)",
                            self.morphisms[a].name, self.morphisms[b].name, self.morphisms[c].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    // Greedy generating set: a morphism is kept when the composites of the
    // ones kept so far do not already produce it. Candidates that are not
    // composites of two non-identities come first, then by name, so the
    // result does not depend on the storage order of morphisms.
    fn compute_generators(&self) -> Vec<MorId> {
        let m = self.morphisms.len();
        let mut reached = vec![false; m];
        for &id in &self.identities {
            reached[id] = true;
        }
        let mut composite = vec![false; m];
        for a in (0..m).filter(|&a| !reached[a]) {
            for b in self.precomposable(a).filter(|&b| !reached[b]) {
                composite[self.compose(a, b)] = true;
            }
        }
        let mut order: Vec<MorId> = (0..m).collect();
        order.sort_by(|&a, &b| (composite[a], &self.morphisms[a].name).cmp(&(composite[b], &self.morphisms[b].name)));
        let mut gens = Vec::new();
        for f in order {
            if reached[f] {
                continue;
            }
            gens.push(f);
            reached[f] = true;
            let mut frontier: Vec<MorId> = (0..m).filter(|&x| reached[x]).collect();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    for (p, q) in [(g, x), (x, g)] {
                        if self.composable(p, q) {
                            let c = self.compose(p, q);
                            if !reached[c] {
                                reached[c] = true;
                                frontier.push(c);
                            }
                        }
                    }
                }
            }
        }
        gens.sort_unstable();
        gens
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_id(&self, name: &str) -> Result<MorId> {
        self.morphism_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.morphisms[f].dom] == f
    }

    pub fn hom(&self, dom: ObjId, cod: ObjId) -> &[MorId] {
        &self.homs[dom * self.objects.len() + cod]
    }

    pub fn composable(&self, a: MorId, b: MorId) -> bool {
        self.morphisms[b].cod == self.morphisms[a].dom
    }

    /// `a ∘ b`. Panics when the pair is not composable.
    pub fn compose(&self, a: MorId, b: MorId) -> MorId {
        let c = self.table[a * self.morphisms.len() + b];
        assert!(c != NONE, "composing non-composable morphisms");
        c as MorId
    }

    /// Morphisms `b` with `a ∘ b` defined.
    pub fn precomposable(&self, a: MorId) -> impl Iterator<Item = MorId> + '_ {
        let dom = self.morphisms[a].dom;
        (0..self.objects.len()).flat_map(move |e| self.hom(e, dom).iter().copied())
    }

    /// Morphisms with domain `o`.
    pub fn out_of(&self, o: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.objects.len()).flat_map(move |f| self.hom(o, f).iter().copied())
    }

    /// A generating set under composition containing no identities.
    pub fn generators(&self) -> &[MorId] {
        &self.generators
    }

    /// The opposite category, with the same morphism names.
    pub fn opposite(&self) -> FiniteCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|f| Morphism { name: f.name.clone(), dom: f.cod, cod: f.dom })
            .collect();
        FiniteCategory::new(self.objects.clone(), morphisms, self.identities.clone(), |a, b| {
            Some(self.compose(b, a))
        })
        .expect("opposite of a valid category is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_category() -> FiniteCategory {
        let objects = vec!["E".to_string(), "F".to_string()];
        let morphisms = vec![
            Morphism { name: "1E".into(), dom: 0, cod: 0 },
            Morphism { name: "1F".into(), dom: 1, cod: 1 },
            Morphism { name: "a".into(), dom: 0, cod: 1 },
        ];
        FiniteCategory::new(objects, morphisms, vec![0, 1], |a, b| match (a, b) {
            (0, 0) => Some(0),
            (1, 1) => Some(1),
            (2, 0) | (1, 2) => Some(2),
            _ => None,
        })
        .unwrap()
    }

    #[test]
    fn arrow_category_basics() {
        let c = arrow_category();
        assert_eq!(c.hom(0, 1), &[2]);
        assert!(c.hom(1, 0).is_empty());
        assert_eq!(c.generators(), &[2]);
        assert!(c.is_identity(1));
        assert_eq!(c.out_of(0).collect::<Vec<_>>(), vec![0, 2]);
        let op = c.opposite();
        assert_eq!(op.hom(1, 0), &[2]);
    }

    #[test]
    fn rejects_missing_composite() {
        let objects = vec!["E".to_string()];
        let morphisms = vec![
            Morphism { name: "1".into(), dom: 0, cod: 0 },
            Morphism { name: "g".into(), dom: 0, cod: 0 },
        ];
        let err = FiniteCategory::new(objects, morphisms, vec![0], |a, b| match (a, b) {
            (0, x) | (x, 0) => Some(x),
            _ => None,
        });
        assert!(matches!(err, Err(Error::InvalidCategory(_))));
    }

    #[test]
    fn rejects_non_associative() {
        // {1, a, b} with a∘a = b, a∘b = a, b∘a = b, b∘b = b: (a a) a = b a = b but a (a a) = a b = a
        let objects = vec!["*".to_string()];
        let morphisms = ["1", "a", "b"]
            .iter()
            .map(|n| Morphism { name: n.to_string(), dom: 0, cod: 0 })
            .collect();
        let t = [[0, 1, 2], [1, 2, 1], [2, 2, 2]];
        let err = FiniteCategory::new(objects, morphisms, vec![0], |a, b| Some(t[a][b]));
        assert!(matches!(err, Err(Error::InvalidCategory(m)) if m.contains("associative")));
    }

    #[test]
    fn rejects_bad_identity() {
        let objects = vec!["*".to_string()];
        let morphisms = ["1", "z"]
            .iter()
            .map(|n| Morphism { name: n.to_string(), dom: 0, cod: 0 })
            .collect();
        // z is a zero, "1" is not neutral for it when 1∘z = 1
        let t = [[0, 0], [1, 1]];
        assert!(FiniteCategory::new(objects, morphisms, vec![0], |a, b| Some(t[a][b])).is_err());
    }

    #[test]
    fn empty_category_is_valid() {
        let c = FiniteCategory::new(vec![], vec![], vec![], |_, _| None).unwrap();
        assert_eq!(c.object_count(), 0);
        assert!(c.generators().is_empty());
    }
}
