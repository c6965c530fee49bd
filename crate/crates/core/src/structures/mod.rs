//! Finite categories, posets, monoids and groups, and the conversions between them.

mod category;
mod monoid;
mod poset;

pub use category::{FiniteCategory, MorId, Morphism, ObjId};
pub use monoid::{FiniteGroup, FiniteMonoid};
pub use poset::Poset;

/// Name of the unique morphism `E → F` of a poset category when `E ≤ F`.
pub fn lambda_name(e: &str, f: &str) -> String {
    format!("{e}->{f}")
}

/// The category with one morphism `E → F` exactly when `E ≤ F`.
///
/// Identities come first, then covering arrows, then the remaining
/// composites, so that the covering arrows become the generators.
pub fn poset_to_category(j: &Poset) -> FiniteCategory {
    let n = j.len();
    let covers = j.covers();
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|e| (e, e)).collect();
    pairs.extend(covers.iter().copied());
    for (a, b) in j.relation_pairs() {
        if a != b && !covers.contains(&(a, b)) {
            pairs.push((a, b));
        }
    }
    let mut id_of = vec![usize::MAX; n * n];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        id_of[a * n + b] = i;
    }
    let morphisms = pairs
        .iter()
        .map(|&(a, b)| Morphism { name: lambda_name(j.name(a), j.name(b)), dom: a, cod: b })
        .collect();
    FiniteCategory::new(j.names().to_vec(), morphisms, (0..n).collect(), |x, y| {
        // x ∘ y with y: a → b, x: b → c
        let (a, _) = pairs[y];
        let (_, c) = pairs[x];
        Some(id_of[a * n + c])
    })
    .expect("a poset category is a category")
}

/// The one-object category `*` whose morphisms are the elements of `m`.
pub fn monoid_to_category(m: &FiniteMonoid) -> FiniteCategory {
    let morphisms = m
        .elements()
        .iter()
        .map(|name| Morphism { name: name.clone(), dom: 0, cod: 0 })
        .collect();
    FiniteCategory::new(vec!["*".to_string()], morphisms, vec![m.one()], |a, b| Some(m.mul(a, b)))
        .expect("a monoid is a one-object category")
}

/// The poset of strongly connected classes of objects.
#[derive(Clone, Debug)]
pub struct PreorderQuotient {
    pub poset: Poset,
    /// Class index of each object.
    pub class_of: Vec<usize>,
    /// Objects of each class, ascending.
    pub members: Vec<Vec<ObjId>>,
}

/// Divides the objects by "morphisms exist both ways" and orders the classes
/// by existence of a morphism. Classes are numbered by least member and named
/// after it.
pub fn preorder_quotient(cat: &FiniteCategory) -> PreorderQuotient {
    let n = cat.object_count();
    let reach = |e: usize, f: usize| !cat.hom(e, f).is_empty();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<ObjId>> = Vec::new();
    for e in 0..n {
        if class_of[e] != usize::MAX {
            continue;
        }
        let c = members.len();
        let group: Vec<ObjId> = (e..n).filter(|&f| reach(e, f) && reach(f, e)).collect();
        for &f in &group {
            class_of[f] = c;
        }
        members.push(group);
    }
    let names = members.iter().map(|g| cat.object_name(g[0]).to_string()).collect();
    let poset = Poset::from_relation(names, |a, b| reach(members[a][0], members[b][0]))
        .expect("reachability between strongly connected classes is a partial order");
    PreorderQuotient { poset, class_of, members }
}
