//! JSON descriptions of the finite structures.
//!
//! Everything is referenced by name. Maps are `BTreeMap`s so emitted JSON is
//! deterministic. Parsing a category groups morphisms by `(dom, cod)` in
//! object order, so `parse(emit(parse(s)))` equals `parse(s)` exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::congruence::{CongruenceFamily, RelationFamily, TaggedPair};
use crate::dirsys::FiniteDirectedSystem;
use crate::error::{Error, Result};
use crate::eset::{Carrier, ESet};
use crate::structures::{FiniteCategory, FiniteGroup, FiniteMonoid, Morphism, ObjId, Poset};

/// Parses JSON text, reporting the location of syntax and shape errors.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn emit<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("JSON descriptions serialize")
}

fn split_pair(key: &str) -> Result<(&str, &str)> {
    let mut it = key.split(',');
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a.trim(), b.trim())),
        _ => Err(Error::Parse(format!("key `{key}` should have the form `A,B`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    /// `"E,F"` → names of the morphisms `E → F`.
    pub homs: BTreeMap<String, Vec<String>>,
    /// Identity per object; defaults to the first listed endomorphism.
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    /// `"g,f"` → name of `g ∘ f`. Composites with identities may be omitted.
    #[serde(default)]
    pub compose: BTreeMap<String, String>,
}

impl CategoryJson {
    pub fn from_category(c: &FiniteCategory) -> Self {
        let mut homs: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for m in c.morphisms() {
            homs.entry(format!("{},{}", c.object_name(m.dom), c.object_name(m.cod)))
                .or_default()
                .push(m.name.clone());
        }
        let identities = (0..c.object_count())
            .map(|o| (c.object_name(o).to_string(), c.morphism(c.identity(o)).name.clone()))
            .collect();
        let mut compose = BTreeMap::new();
        for a in 0..c.morphism_count() {
            for b in c.precomposable(a) {
                if !c.is_identity(a) && !c.is_identity(b) {
                    let ab = c.compose(a, b);
                    compose.insert(format!("{},{}", c.morphism(a).name, c.morphism(b).name), c.morphism(ab).name.clone());
                }
            }
        }
        CategoryJson { objects: c.objects().to_vec(), homs, identities, compose }
    }

    pub fn build(&self) -> Result<FiniteCategory> {
        let n = self.objects.len();
        let obj = |name: &str| {
            self.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        let mut keyed: Vec<(ObjId, ObjId, &Vec<String>)> = Vec::new();
        for (key, names) in &self.homs {
            let (e, f) = split_pair(key)?;
            keyed.push((obj(e)?, obj(f)?, names));
        }
        keyed.sort_by_key(|&(e, f, _)| (e, f));
        let mut morphisms = Vec::new();
        for (dom, cod, names) in keyed {
            for name in names {
                morphisms.push(Morphism { name: name.clone(), dom, cod });
            }
        }
        let mor = |name: &str| {
            morphisms
                .iter()
                .position(|m| m.name == name)
                .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
        };
        for o in self.identities.keys() {
            obj(o)?;
        }
        let mut identities = Vec::with_capacity(n);
        for (o, oname) in self.objects.iter().enumerate() {
            let id = match self.identities.get(oname) {
                Some(name) => mor(name)?,
                None => morphisms
                    .iter()
                    .position(|m| m.dom == o && m.cod == o)
                    .ok_or_else(|| Error::InvalidCategory(format!("`{oname}` has no endomorphism to serve as identity")))?,
            };
            identities.push(id);
        }
        let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (key, c) in &self.compose {
            let (a, b) = split_pair(key)?;
            table.insert((mor(a)?, mor(b)?), mor(c)?);
        }
        let is_id = |f: usize| identities.contains(&f);
        FiniteCategory::new(self.objects.clone(), morphisms.clone(), identities.clone(), |a, b| {
            if is_id(a) {
                Some(b)
            } else if is_id(b) {
                Some(a)
            } else {
                table.get(&(a, b)).copied()
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    /// Pairs `[a, b]` meaning `a ≤ b`; the order generated by them is used.
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

impl PosetJson {
    /// Emits the covering pairs.
    pub fn from_poset(j: &Poset) -> Self {
        PosetJson {
            elements: j.names().to_vec(),
            leq: j.covers().iter().map(|&(a, b)| (j.name(a).to_string(), j.name(b).to_string())).collect(),
        }
    }

    pub fn build(&self) -> Result<Poset> {
        let idx = |name: &str| {
            self.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::InvalidPoset(format!("unknown element `{name}`")))
        };
        let pairs = self.leq.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        Poset::new(self.elements.clone(), &pairs)
    }
}

/// A table entry given by element name or by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidJson {
    pub elements: Vec<String>,
    /// `table[a][b]` is the product `ab`.
    pub table: Vec<Vec<Entry>>,
    pub one: Entry,
    /// Inverse of each element, for groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<Entry>>,
}

impl MonoidJson {
    pub fn from_monoid(m: &FiniteMonoid) -> Self {
        let name = |a: usize| Entry::Name(m.name(a).to_string());
        MonoidJson {
            elements: m.elements().to_vec(),
            table: m.table().iter().map(|row| row.iter().map(|&c| name(c)).collect()).collect(),
            one: name(m.one()),
            inverse: None,
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        let mut j = Self::from_monoid(g.monoid());
        j.inverse = Some((0..g.monoid().len()).map(|a| Entry::Name(g.monoid().name(g.inverse(a)).to_string())).collect());
        j
    }

    fn resolve(&self, e: &Entry) -> Result<usize> {
        match e {
            Entry::Index(i) if *i < self.elements.len() => Ok(*i),
            Entry::Index(i) => Err(Error::InvalidMonoid(format!("index {i} out of range"))),
            Entry::Name(s) => self
                .elements
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::UnknownElement(s.clone())),
        }
    }

    pub fn build(&self) -> Result<FiniteMonoid> {
        let n = self.elements.len();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMonoid(format!("table must be {n} × {n}")));
        }
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|e| self.resolve(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteMonoid::new(self.elements.clone(), table, self.resolve(&self.one)?)
    }

    pub fn build_group(&self) -> Result<FiniteGroup> {
        let m = self.build()?;
        match &self.inverse {
            Some(inv) => {
                if inv.len() != m.len() {
                    return Err(Error::InvalidMonoid("one inverse per element is required".into()));
                }
                let inv = inv.iter().map(|e| self.resolve(e)).collect::<Result<Vec<_>>>()?;
                FiniteGroup::new(m, inv)
            }
            None => FiniteGroup::from_monoid(m),
        }
    }
}

/// Carriers and actions of an E-set over a category given separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionsJson {
    /// Object → element labels.
    pub carriers: BTreeMap<String, Vec<String>>,
    /// Morphism → (element → image). Generators suffice.
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

fn carrier_from_labels(labels: &[String]) -> Carrier {
    let anonymous = labels.iter().enumerate().all(|(i, l)| *l == i.to_string());
    if anonymous {
        Carrier::anonymous(labels.len())
    } else {
        Carrier::labeled(labels.to_vec())
    }
}

impl ActionsJson {
    pub fn from_eset(x: &ESet) -> Self {
        let cat = x.category();
        let carriers = (0..cat.object_count())
            .map(|o| (cat.object_name(o).to_string(), x.carrier(o).labels()))
            .collect();
        let actions = cat
            .generators()
            .iter()
            .map(|&g| {
                let m = cat.morphism(g);
                let map = (0..x.size(m.dom) as u32)
                    .map(|e| (x.label(m.dom, e).into_owned(), x.label(m.cod, x.act(g, e)).into_owned()))
                    .collect();
                (m.name.clone(), map)
            })
            .collect();
        ActionsJson { carriers, actions }
    }

    pub fn build(&self, cat: &Arc<FiniteCategory>) -> Result<ESet> {
        for o in self.carriers.keys() {
            cat.object_id(o)?;
        }
        let carriers: Vec<Carrier> = cat
            .objects()
            .iter()
            .map(|o| {
                self.carriers
                    .get(o)
                    .map(|l| carrier_from_labels(l))
                    .ok_or_else(|| Error::InvalidESet(format!("no carrier for `{o}`")))
            })
            .collect::<Result<_>>()?;
        for (o, c) in carriers.iter().enumerate() {
            let mut labels = c.labels();
            labels.sort();
            labels.dedup();
            if labels.len() != c.len() {
                return Err(Error::InvalidESet(format!("duplicate labels at `{}`", cat.object_name(o))));
            }
        }
        let mut given = Vec::new();
        for (name, map) in &self.actions {
            let f = cat.morphism_id(name)?;
            let m = cat.morphism(f);
            let (dom, cod) = (&carriers[m.dom], &carriers[m.cod]);
            let mut v = vec![u32::MAX; dom.len()];
            for (src, tgt) in map {
                let s = dom.index_of(src).ok_or_else(|| Error::UnknownElement(format!("`{src}` in action of `{name}`")))?;
                let t = cod.index_of(tgt).ok_or_else(|| Error::UnknownElement(format!("`{tgt}` in action of `{name}`")))?;
                v[s as usize] = t;
            }
            if v.contains(&u32::MAX) {
                return Err(Error::InvalidESet(format!("action of `{name}` is not total")));
            }
            given.push((f, v));
        }
        ESet::from_partial_actions(cat.clone(), carriers, given)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ESetJson {
    pub category: CategoryJson,
    pub carriers: BTreeMap<String, Vec<String>>,
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

impl ESetJson {
    pub fn from_eset(x: &ESet) -> Self {
        let a = ActionsJson::from_eset(x);
        ESetJson { category: CategoryJson::from_category(x.category()), carriers: a.carriers, actions: a.actions }
    }

    pub fn build(&self) -> Result<ESet> {
        let cat = Arc::new(self.category.build()?);
        ActionsJson { carriers: self.carriers.clone(), actions: self.actions.clone() }.build(&cat)
    }
}

/// Pairs of element labels per object.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub pairs: BTreeMap<String, Vec<(String, String)>>,
}

impl RelationJson {
    pub fn from_relation(x: &ESet, r: &RelationFamily) -> Self {
        let mut pairs: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for p in &r.pairs {
            pairs
                .entry(x.category().object_name(p.obj).to_string())
                .or_default()
                .push((x.label(p.obj, p.s).into_owned(), x.label(p.obj, p.t).into_owned()));
        }
        RelationJson { pairs }
    }

    pub fn build(&self, x: &ESet) -> Result<RelationFamily> {
        let mut out = Vec::new();
        // object order, then listed order
        for o in 0..x.category().object_count() {
            if let Some(list) = self.pairs.get(x.category().object_name(o)) {
                for (s, t) in list {
                    let (_, s) = x.element(x.category().object_name(o), s)?;
                    let (_, t) = x.element(x.category().object_name(o), t)?;
                    out.push(TaggedPair::new(o, s, t));
                }
            }
        }
        for o in self.pairs.keys() {
            x.category().object_id(o)?;
        }
        Ok(RelationFamily::new(out))
    }
}

/// Classes of element labels per object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceJson {
    pub classes: BTreeMap<String, Vec<Vec<String>>>,
}

impl CongruenceJson {
    pub fn from_congruence(x: &ESet, c: &CongruenceFamily) -> Self {
        let classes = (0..x.category().object_count())
            .map(|o| {
                let cls = c
                    .classes_of(o)
                    .iter()
                    .map(|cl| cl.iter().map(|&e| x.label(o, e).into_owned()).collect())
                    .collect();
                (x.category().object_name(o).to_string(), cls)
            })
            .collect();
        CongruenceJson { classes }
    }

    pub fn build(&self, x: &ESet) -> Result<CongruenceFamily> {
        let cat = x.category();
        let mut classes = Vec::with_capacity(cat.object_count());
        for o in 0..cat.object_count() {
            let name = cat.object_name(o);
            let given = self
                .classes
                .get(name)
                .ok_or_else(|| Error::NotCongruence(format!("no classes for `{name}`")))?;
            let cls = given
                .iter()
                .map(|cl| cl.iter().map(|l| x.element(name, l).map(|(_, e)| e)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            classes.push(cls);
        }
        CongruenceFamily::from_classes(x, &classes)
    }
}

/// A finite directed system: shared category, index poset, members, and
/// connecting maps for `i < j` keyed `"i,j"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub category: CategoryJson,
    pub index: PosetJson,
    pub members: BTreeMap<String, ActionsJson>,
    /// `"i,j"` → object → (element → image).
    #[serde(default)]
    pub connect: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

impl SystemJson {
    pub fn from_system(s: &FiniteDirectedSystem) -> Self {
        let j = s.index();
        let cat = s.category();
        let members = (0..j.len()).map(|i| (j.name(i).to_string(), ActionsJson::from_eset(s.member(i)))).collect();
        let mut connect = BTreeMap::new();
        for (a, b) in j.relation_pairs() {
            if a == b {
                continue;
            }
            let f = s.connect(a, b).expect("every i ≤ j has a map");
            let (xa, xb) = (s.member(a), s.member(b));
            let comps = (0..cat.object_count())
                .map(|o| {
                    let map = (0..xa.size(o) as u32)
                        .map(|e| (xa.label(o, e).into_owned(), xb.label(o, f.apply(o, e)).into_owned()))
                        .collect();
                    (cat.object_name(o).to_string(), map)
                })
                .collect();
            connect.insert(format!("{},{}", j.name(a), j.name(b)), comps);
        }
        SystemJson {
            category: CategoryJson::from_category(cat),
            index: PosetJson::from_poset(j),
            members,
            connect,
        }
    }

    pub fn build(&self) -> Result<FiniteDirectedSystem> {
        let cat = Arc::new(self.category.build()?);
        let index = self.index.build()?;
        for k in self.members.keys() {
            index.index_of(k)?;
        }
        let members = index
            .names()
            .iter()
            .map(|i| {
                self.members
                    .get(i)
                    .ok_or_else(|| Error::InvalidSystem(format!("no member at `{i}`")))?
                    .build(&cat)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut connect = Vec::new();
        for (key, comps) in &self.connect {
            let (a, b) = split_pair(key)?;
            let (a, b) = (index.index_of(a)?, index.index_of(b)?);
            let (xa, xb) = (&members[a], &members[b]);
            let mut v = Vec::with_capacity(cat.object_count());
            for o in 0..cat.object_count() {
                let name = cat.object_name(o);
                let map = comps
                    .get(name)
                    .ok_or_else(|| Error::InvalidSystem(format!("map {key} has no component at `{name}`")))?;
                let mut c = vec![u32::MAX; xa.size(o)];
                for (s, t) in map {
                    let (_, s) = xa.element(name, s)?;
                    let (_, t) = xb.element(name, t)?;
                    c[s as usize] = t;
                }
                if c.contains(&u32::MAX) {
                    return Err(Error::InvalidSystem(format!("map {key} is not total at `{name}`")));
                }
                v.push(c);
            }
            connect.push(((a, b), v));
        }
        FiniteDirectedSystem::new(index, members, connect)
    }
}
