//! Parameterized examples and counterexamples, each with a list of
//! machine-checked expectations.

mod lazy;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use lazy::{dyadic_group_system, parse_dyadic, pinje_system, Dyadic, PinjE, PinjVariant};

use crate::bitset::BitSet;
use crate::congruence::{minimal_improper_generators, trivial_eset_finitely_presented, MinimalGenerators, TaggedPair};
use crate::dirsys::{
    colimit_at_horizon, colimit_equal, eventual_fixedness_certificate, iota_at_horizon, stabilization_stage,
    ColimitElement, LazySystem, StagedSystem, Verdict,
};
use crate::division::{
    class_of_one_correspondence, condition_battery, left_congruences_enumerate, right_division_closure,
};
use crate::enumerate::bell;
use crate::error::{Error, Result};
use crate::eset::{hom_functor, union_hom, Carrier, ESet, ESetMorphism};
use crate::poset_analysis::{critical_elements, horizon_instability_probe, minimal_elements, minimal_gathering_set, Trend};
use crate::structures::{lambda_name, monoid_to_category, poset_to_category, FiniteMonoid, Poset};
use crate::words::{division_rounds, meeting_letters, single_generator_fgm0, MonoidXY, MonoidXYZW, WordMonoid};

/// One checked claim about an item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryReport {
    pub item: String,
    pub params: BTreeMap<String, String>,
    pub expectations: Vec<Expectation>,
    pub passed: bool,
}

/// Registry entry: name, parameters with defaults, and a one-line summary.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GalleryItem {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub summary: &'static str,
}

pub const ITEMS: &[GalleryItem] = &[
    GalleryItem { name: "dyadic", params: &[("h", "5")], summary: "Prüfer 2-group on G/H_n: no fixed points at any stage, one in the colimit" },
    GalleryItem { name: "pinje", params: &[("variant", "plusminus"), ("h", "6")], summary: "negative chain with ±1 or empty tails: ι fails to be injective or surjective" },
    GalleryItem { name: "monoid_xy", params: &[("k", "5")], summary: "x_n y = x_0 y: a two-element submonoid witnesses the meeting condition" },
    GalleryItem { name: "monoid_xyzw", params: &[("k", "5")], summary: "x_n y_n z = z, y_n w = w: right-division closure of {z, w} is everything" },
    GalleryItem { name: "rightzero_opposite", params: &[("s", "3")], summary: "opposite of 1 plus s right zeros: every equivalence is a left congruence" },
    GalleryItem { name: "maxchain_monoid", params: &[("k", "3")], summary: "{0..k} under max: left congruences are interval partitions" },
    GalleryItem { name: "field_mult", params: &[("p", "7")], summary: "multiplicative monoid of Z/p: right zero 0, units division-closed" },
    GalleryItem { name: "two_bottom_chain", params: &[("k", "5")], summary: "two bottoms under a chain 1 < … < k: the critical set is {1}" },
    GalleryItem { name: "diamond", params: &[], summary: "two bottoms, two middles, a top: both middles are critical" },
    GalleryItem { name: "gathering_drift", params: &[("k", "6")], summary: "two bottoms under 1 + 1/n, n ≤ k: the minimal gathering set drifts with k" },
    GalleryItem { name: "c2_collapse", params: &[], summary: "C2 swapping {a, b} until stage 3, then a point: stabilizes at stage 3" },
    GalleryItem { name: "maxchain_collapse", params: &[("k", "3")], summary: "max-monoid acting on itself, collapsing from the top one stage at a time" },
    GalleryItem { name: "cyclic_tower", params: &[("e", "3")], summary: "Z/2^e acting on cosets of a growing subgroup chain" },
];

fn expect(out: &mut Vec<Expectation>, claim: impl Into<String>, passed: bool, detail: impl Into<String>) {
    out.push(Expectation { claim: claim.into(), passed, detail: detail.into() });
}

fn param(params: &BTreeMap<String, String>, item: &GalleryItem, key: &str) -> Result<String> {
    let default = item
        .params
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.to_string())
        .expect("registered parameter");
    Ok(params.get(key).cloned().unwrap_or(default))
}

fn num(params: &BTreeMap<String, String>, item: &GalleryItem, key: &str) -> Result<usize> {
    let v = param(params, item, key)?;
    v.parse().map_err(|_| Error::Parse(format!("parameter {key}={v} is not a number")))
}

pub fn find(name: &str) -> Result<&'static GalleryItem> {
    ITEMS
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown gallery item `{name}`")))
}

/// Builds the item with the given parameters (missing ones take their
/// defaults) and checks its expectations.
pub fn run(name: &str, params: &BTreeMap<String, String>) -> Result<GalleryReport> {
    let item = find(name)?;
    for key in params.keys() {
        if !item.params.iter().any(|(k, _)| k == key) {
            return Err(Error::Parse(format!("`{name}` takes no parameter `{key}`")));
        }
    }
    let mut resolved = BTreeMap::new();
    for (k, _) in item.params {
        resolved.insert(k.to_string(), param(params, item, k)?);
    }
    let expectations = match name {
        "dyadic" => dyadic_expectations(num(params, item, "h")?)?,
        "pinje" => pinje_expectations(param(params, item, "variant")?.parse()?, num(params, item, "h")?)?,
        "monoid_xy" => monoid_xy_expectations(num(params, item, "k")?)?,
        "monoid_xyzw" => monoid_xyzw_expectations(num(params, item, "k")?)?,
        "rightzero_opposite" => rightzero_expectations(num(params, item, "s")?)?,
        "maxchain_monoid" => maxchain_expectations(num(params, item, "k")?)?,
        "field_mult" => field_expectations(num(params, item, "p")?)?,
        "two_bottom_chain" => two_bottom_expectations(num(params, item, "k")?)?,
        "diamond" => diamond_expectations(),
        "gathering_drift" => drift_expectations(num(params, item, "k")?)?,
        "c2_collapse" => c2_expectations(),
        "maxchain_collapse" => lazy_monoid_expectations(&maxchain_collapse(num(params, item, "k")?)?),
        "cyclic_tower" => lazy_monoid_expectations(&cyclic_tower(num(params, item, "e")?)?),
        _ => unreachable!("registry and dispatch agree"),
    };
    let passed = expectations.iter().all(|e| e.passed);
    Ok(GalleryReport { item: name.to_string(), params: resolved, expectations, passed })
}

fn verdict_text(v: &Verdict) -> String {
    serde_json::to_string(v).expect("verdicts serialize")
}

fn dyadic_expectations(h: usize) -> Result<Vec<Expectation>> {
    let d = dyadic_group_system(h)?;
    let mut out = Vec::new();
    let fixed_free = (0..=h + 1).all(|n| {
        let st = d.stage(n);
        st.limit.is_empty() && (st.sizes[0] == 1 || st.actions[0].iter().enumerate().all(|(k, &y)| y as usize != k))
    });
    expect(&mut out, "every stage has an empty fixed set", fixed_free, "generator moves every sampled coset below the horizon");
    let col = colimit_at_horizon(&d, h);
    expect(&mut out, "colimit truncation is a singleton", col.representatives[0].len() == 1, format!("{} classes", col.representatives[0].len()));
    let merged = (0..1u32 << h).all(|x| {
        colimit_equal(&d, ColimitElement { stage: 0, obj: 0, x }, ColimitElement { stage: 0, obj: 0, x: 0 }, h).is_proven()
    });
    expect(&mut out, format!("all cosets with denominator ≤ 2^{h} merge by stage {h}"), merged, "");
    let r = iota_at_horizon(&d, h);
    expect(
        &mut out,
        "ι has empty domain, singleton codomain, surjectivity refuted",
        r.domain.is_empty() && r.codomain.len() == 1 && r.surjective.is_refuted(),
        verdict_text(&r.surjective),
    );
    let probes: Vec<String> = (0..=h).map(|m| format!("1/{}", 1u64 << m)).collect();
    let rep = ColimitElement { stage: 0, obj: 0, x: 1 };
    let certs = eventual_fixedness_certificate(&d, rep, &probes, h)?;
    let exact = certs.iter().enumerate().all(|(m, (_, v))| *v == Verdict::Proven { stage: m });
    expect(&mut out, "probe 1/2^m is certified fixed at stage m", exact, format!("{} probes", probes.len()));
    let st = stabilization_stage(&d, &["1/2".to_string()], rep, h)?;
    expect(&mut out, "generator 1/2 alone stabilizes at stage 1", st.verdict == Verdict::Proven { stage: 1 }, verdict_text(&st.verdict));
    Ok(out)
}

fn pinje_expectations(variant: PinjVariant, h: usize) -> Result<Vec<Expectation>> {
    let p = pinje_system(variant, h)?;
    let mut out = Vec::new();
    let r = iota_at_horizon(&p, h);
    expect(&mut out, "limit of the colimit is a singleton", r.codomain.len() == 1, format!("{} points", r.codomain.len()));
    match variant {
        PinjVariant::PlusMinus => {
            let distinct = (0..=h).all(|n| p.stage(n).limit.len() == 2);
            expect(&mut out, "x+ and x- are distinct at every stage", distinct, "");
            let w = r.injective.witness().map(|w| w.elements.clone()).unwrap_or_default();
            let ok = r.injective.is_refuted() && w.len() == 3 && w[0] == "x-" && w[1] == "x+";
            expect(&mut out, "ι(x+) = ι(x-): injectivity refuted", ok, verdict_text(&r.injective));
            let merge = (0..h).all(|m| {
                let a = ColimitElement { stage: 0, obj: m, x: 0 };
                let b = ColimitElement { stage: 0, obj: m, x: 1 };
                colimit_equal(&p, a, b, h) == Verdict::Proven { stage: m + 1 }
            });
            expect(&mut out, "the ±1 at object -m merge at stage m + 1", merge, "");
        }
        PinjVariant::Empty => {
            expect(&mut out, "the colimit of limits is empty", r.domain.is_empty(), "");
            expect(&mut out, "surjectivity refuted", r.surjective.is_refuted(), verdict_text(&r.surjective));
        }
    }
    Ok(out)
}

pub fn monoid_xy(k: usize) -> Result<MonoidXY> {
    if !(1..=200).contains(&k) {
        return Err(Error::InvalidMonoid(format!("k = {k} outside 1..=200")));
    }
    Ok(MonoidXY { k: k as u32 })
}

pub fn monoid_xyzw(k: usize) -> Result<MonoidXYZW> {
    if !(1..=200).contains(&k) {
        return Err(Error::InvalidMonoid(format!("k = {k} outside 1..=200")));
    }
    Ok(MonoidXYZW { k: k as u32 })
}

/// Size of the smallest `M0` witnessing the meeting condition found for
/// `monoid_xy(k)`: 1 if a single word of length ≤ 2 works, 2 if `{y, x0 y}`
/// works, `None` otherwise.
pub fn monoid_xy_fgm0_size(m: &MonoidXY) -> Result<Option<usize>> {
    if single_generator_fgm0(m, 2, 5)?.is_some() {
        return Ok(Some(1));
    }
    let pair = vec![vec![m.y()], vec![m.x(0), m.y()]];
    Ok((meeting_letters(m, &pair, 4)?.len() as u32 == m.alphabet_len()).then_some(2))
}

fn monoid_xy_expectations(k: usize) -> Result<Vec<Expectation>> {
    let m = monoid_xy(k)?;
    let mut out = Vec::new();
    let x0y = vec![m.x(0), m.y()];
    let norm = (0..=m.k).all(|n| m.normalize(&[m.x(n), m.y()]) == x0y);
    expect(&mut out, "x_n y normalizes to x0 y for every n ≤ k", norm, m.render(&x0y));
    let size = monoid_xy_fgm0_size(&m)?;
    expect(&mut out, "smallest M0 witness has two generators {y, x0 y}", size == Some(2), format!("{size:?}"));
    let mut forms: Vec<Vec<u32>> = (0..=m.k).map(|n| m.normalize(&[m.x(n), m.x(0), m.y()])).collect();
    let normal = forms.iter().enumerate().all(|(n, w)| *w == vec![n as u32, m.x(0), m.y()]);
    forms.sort();
    forms.dedup();
    expect(
        &mut out,
        "the words x_n x0 y are normal and pairwise distinct",
        normal && forms.len() == k + 1,
        "recorded fact only; no left ideal argument is attempted",
    );
    Ok(out)
}

fn monoid_xyzw_expectations(k: usize) -> Result<Vec<Expectation>> {
    let m = monoid_xyzw(k)?;
    let mut out = Vec::new();
    let reached = division_rounds(&m, &[vec![m.z()], vec![m.w()]], 2, 4, 3)?;
    let all = reached.len() as u32 == m.alphabet_len();
    let worst = reached.values().max().copied().unwrap_or(0);
    expect(&mut out, "closure from {z, w} reaches every generator within 3 rounds", all && worst <= 3, format!("last round {worst}"));
    let ys = (0..=m.k).all(|n| reached.get(&m.y(n)) == Some(&1));
    expect(&mut out, "round 1 contains every y_n", ys, "");
    let xs = (0..=m.k).all(|n| reached.get(&m.x(n)) == Some(&2));
    expect(&mut out, "round 2 contains every x_n", xs, "");
    Ok(out)
}

/// `{1, z_1, …, z_s}` with every `z_i` a right zero, then reversed: in the
/// result each `z_i` is a left zero.
pub fn rightzero_opposite(s: usize) -> Result<FiniteMonoid> {
    if !(1..=64).contains(&s) {
        return Err(Error::InvalidMonoid(format!("s = {s} outside 1..=64")));
    }
    let names = std::iter::once("1".to_string()).chain((1..=s).map(|i| format!("z{i}"))).collect();
    let rz = FiniteMonoid::from_fn(names, 0, |a, b| if b == 0 { a } else { b })?;
    Ok(rz.opposite())
}

/// `{0, …, k}` under max, with identity 0.
pub fn maxchain_monoid(k: usize) -> Result<FiniteMonoid> {
    if !(1..=64).contains(&k) {
        return Err(Error::InvalidMonoid(format!("k = {k} outside 1..=64")));
    }
    FiniteMonoid::from_fn((0..=k).map(|i| i.to_string()).collect(), 0, |a, b| a.max(b))
}

/// Multiplicative monoid of the field `Z/p`.
pub fn field_mult(p: usize) -> Result<FiniteMonoid> {
    let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if !prime || p > 97 {
        return Err(Error::InvalidMonoid(format!("p = {p} is not a prime ≤ 97")));
    }
    FiniteMonoid::from_fn((0..p).map(|i| i.to_string()).collect(), 1, |a, b| a * b % p)
}

/// `0_1, 0_2 < 1 < 2 < … < k`.
pub fn two_bottom_chain(k: usize) -> Result<Poset> {
    if !(1..=64).contains(&k) {
        return Err(Error::InvalidPoset(format!("k = {k} outside 1..=64")));
    }
    let mut names = vec!["0_1".to_string(), "0_2".to_string()];
    names.extend((1..=k).map(|i| i.to_string()));
    let mut pairs = vec![(0, 2), (1, 2)];
    pairs.extend((2..k + 1).map(|i| (i, i + 1)));
    Poset::new(names, &pairs)
}

pub fn diamond() -> Poset {
    let names = ["b1", "b2", "m1", "m2", "t"].map(String::from).to_vec();
    Poset::new(names, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]).expect("diamond is a poset")
}

/// Two bottoms below the points `1 + 1/n`, `n = 1..=k`, ordered as reals.
pub fn gathering_drift(k: usize) -> Result<Poset> {
    if !(1..=64).contains(&k) {
        return Err(Error::InvalidPoset(format!("k = {k} outside 1..=64")));
    }
    let mut names = vec!["0_1".to_string(), "0_2".to_string()];
    // ascending: 1 + 1/k < … < 1 + 1/1
    names.extend((1..=k).rev().map(|n| format!("1+1/{n}")));
    let mut pairs = vec![(0, 2), (1, 2)];
    pairs.extend((2..k + 1).map(|i| (i, i + 1)));
    Poset::new(names, &pairs)
}

fn bits(n: usize, items: &[usize]) -> BitSet {
    BitSet::from_iter(n, items.iter().copied())
}

fn names(j: &Poset, items: &[usize]) -> Vec<String> {
    items.iter().map(|&e| j.name(e).to_string()).collect()
}

fn rightzero_expectations(s: usize) -> Result<Vec<Expectation>> {
    let m = rightzero_opposite(s)?;
    let mut out = Vec::new();
    if m.len() <= crate::division::ENUMERATION_MAX {
        let count = left_congruences_enumerate(&m)?.len() as u64;
        expect(&mut out, format!("left congruence count = Bell({})", s + 1), count == bell(s + 1), format!("{count}"));
    }
    let cat = Arc::new(monoid_to_category(&m));
    let h = hom_functor(&cat, 0);
    let gens = minimal_improper_generators(&h, s);
    let size = gens.witness().map(|r| r.len());
    expect(&mut out, "minimal improper generators have size s", size == Some(s), format!("{size:?}"));
    Ok(out)
}

fn maxchain_expectations(k: usize) -> Result<Vec<Expectation>> {
    let m = maxchain_monoid(k)?;
    let mut out = Vec::new();
    if m.len() <= crate::division::ENUMERATION_MAX {
        let congs = left_congruences_enumerate(&m)?;
        let intervals = congs.iter().all(|ids| ids.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1));
        expect(&mut out, format!("left congruence count = 2^{k}"), congs.len() == 1 << k, format!("{}", congs.len()));
        expect(&mut out, "every left congruence is an interval partition", intervals, "");
    }
    expect(&mut out, format!("{k} is the unique right zero"), m.right_zeros() == vec![k], "");
    let battery = condition_battery(&m);
    expect(&mut out, "{k} alone is right-division closed to M", battery.multdiv == vec![k], format!("{:?}", battery.multdiv));
    Ok(out)
}

fn field_expectations(p: usize) -> Result<Vec<Expectation>> {
    let m = field_mult(p)?;
    let mut out = Vec::new();
    expect(&mut out, "0 is the unique right zero", m.right_zeros() == vec![0], "");
    expect(&mut out, "right-division closure of {0} is M", right_division_closure(&m, &[0]).len() == p, "");
    let units: Vec<usize> = (1..p).collect();
    let c = class_of_one_correspondence(&m, &units)?;
    expect(
        &mut out,
        "units are division closed and recovered as the class of 1",
        c.right_division_closed_submonoid && c.recovers,
        format!("class of 1 has {} elements", c.class_of_one.len()),
    );
    Ok(out)
}

fn two_bottom_expectations(k: usize) -> Result<Vec<Expectation>> {
    let j = two_bottom_chain(k)?;
    let mut out = Vec::new();
    let a = minimal_elements(&j);
    let abit = bits(j.len(), &a);
    let crit = critical_elements(&j, &abit);
    expect(&mut out, "critical set is {1}", names(&j, &crit) == ["1"], format!("{:?}", names(&j, &crit)));
    let g = minimal_gathering_set(&j, &abit, j.len());
    let g = g.found().map(|g| names(&j, g));
    expect(&mut out, "minimal gathering set is {1}", g.as_deref() == Some(&["1".to_string()][..]), format!("{g:?}"));
    let cat = Arc::new(poset_to_category(&j));
    let hu = union_hom(&cat, &a)?;
    let found = minimal_improper_generators(&hu.eset, 2);
    let expected = vec![(lambda_name("0_1", "1"), lambda_name("0_2", "1"))];
    let rendered = found.witness().map(|r| render_pairs(&hu.eset, &r.pairs));
    expect(
        &mut out,
        "minimal improper generators of H are {(0_1->1, 0_2->1)}",
        rendered.as_ref().map(|r| r.iter().map(|(_, s, t)| (s.clone(), t.clone())).collect::<Vec<_>>()) == Some(expected),
        format!("{rendered:?}"),
    );
    let fp = trivial_eset_finitely_presented(&cat)?;
    let ok = fp.a == a && matches!(fp.generators, MinimalGenerators::Found(ref r) if r.len() == 1);
    expect(&mut out, "trivial E-set presented by H with one relation", ok, "");
    Ok(out)
}

/// `(object, s, t)` labels of tagged pairs.
pub fn render_pairs(x: &ESet, pairs: &[TaggedPair]) -> Vec<(String, String, String)> {
    pairs
        .iter()
        .map(|p| {
            (
                x.category().object_name(p.obj).to_string(),
                x.label(p.obj, p.s).into_owned(),
                x.label(p.obj, p.t).into_owned(),
            )
        })
        .collect()
}

fn diamond_expectations() -> Vec<Expectation> {
    let j = diamond();
    let mut out = Vec::new();
    let abit = bits(j.len(), &minimal_elements(&j));
    let crit = names(&j, &critical_elements(&j, &abit));
    expect(&mut out, "critical set is {m1, m2}", crit == ["m1", "m2"], format!("{crit:?}"));
    let g = minimal_gathering_set(&j, &abit, j.len()).found().map(|g| names(&j, g));
    expect(&mut out, "minimal gathering set is {m1, m2}", g == Some(vec!["m1".into(), "m2".into()]), format!("{g:?}"));
    out
}

fn drift_expectations(k: usize) -> Result<Vec<Expectation>> {
    let mut family = Vec::new();
    for n in 1..=k {
        let j = gathering_drift(n)?;
        let a = bits(j.len(), &minimal_elements(&j));
        family.push((n, j, a));
    }
    let report = horizon_instability_probe(&family, 3);
    let mut out = Vec::new();
    let last_ok = report
        .rows
        .iter()
        .all(|r| r.minimal_gathering_set == Some(vec![format!("1+1/{}", r.parameter)]));
    expect(&mut out, "minimal gathering set at parameter n is {1+1/n}", last_ok, "");
    if k >= 2 {
        expect(&mut out, "trend across the family is drifting (heuristic)", report.trend == Some(Trend::Drifting), format!("{:?}", report.trend));
    }
    Ok(out)
}

/// C2 swapping `{a, b}` for three stages, then collapsing to `{c}`.
pub fn c2_collapse() -> StagedSystem {
    let m = FiniteMonoid::from_fn(vec!["1".into(), "g".into()], 0, |a, b| a ^ b).expect("C2");
    let cat = Arc::new(monoid_to_category(&m));
    let ab = ESet::new(cat.clone(), vec![Carrier::labeled(vec!["a".into(), "b".into()])], vec![vec![0, 1], vec![1, 0]])
        .expect("swap action");
    let c = ESet::new(cat, vec![Carrier::labeled(vec!["c".into()])], vec![vec![0], vec![0]]).expect("point");
    StagedSystem::eventually_constant(
        "c2_collapse",
        vec![ab.clone(), ab.clone(), ab, c],
        vec![vec![vec![0, 1]], vec![vec![0, 1]], vec![vec![0, 0]]],
    )
    .expect("natural steps")
}

/// `MaxChain(k)` acting on itself, with stage `n` identifying everything
/// `≥ k - n`.
pub fn maxchain_collapse(k: usize) -> Result<StagedSystem> {
    let m = maxchain_monoid(k)?;
    let cat = Arc::new(monoid_to_category(&m));
    let cut = |n: usize| k.saturating_sub(n);
    let stage = |n: usize| {
        let c = cut(n);
        let labels = (0..=c).map(|i| if i < c || c == k { i.to_string() } else { format!("[{c},{k}]") }).collect();
        let actions = (0..=k).map(|a| (0..=c).map(|i| a.max(i).min(c) as u32).collect()).collect();
        ESet::new(cat.clone(), vec![Carrier::labeled(labels)], actions).expect("interval quotient")
    };
    let stages: Vec<ESet> = (0..=k).map(stage).collect();
    let steps = (0..k).map(|n| vec![(0..=cut(n)).map(|i| i.min(cut(n + 1)) as u32).collect()]).collect();
    StagedSystem::eventually_constant(&format!("maxchain_collapse(k={k})"), stages, steps)
}

/// `Z/2^e` acting on `Z/2^e / ⟨2^(e-n)⟩`.
pub fn cyclic_tower(e: usize) -> Result<StagedSystem> {
    if !(1..=8).contains(&e) {
        return Err(Error::InvalidSystem(format!("e = {e} outside 1..=8")));
    }
    let g = crate::structures::FiniteGroup::cyclic(1 << e)?;
    let cat = Arc::new(monoid_to_category(g.monoid()));
    let order = 1usize << e;
    let stages: Vec<ESet> = (0..=e)
        .map(|n| {
            let size = 1usize << (e - n);
            let actions = (0..order).map(|a| (0..size).map(|x| ((x + a) % size) as u32).collect()).collect();
            ESet::new(cat.clone(), vec![Carrier::anonymous(size)], actions).expect("coset action")
        })
        .collect();
    let steps = (0..e)
        .map(|n| {
            let next = 1usize << (e - n - 1);
            vec![(0..1usize << (e - n)).map(|x| (x % next) as u32).collect()]
        })
        .collect();
    StagedSystem::eventually_constant(&format!("cyclic_tower(e={e})"), stages, steps)
}

/// ι over a one-object finite category is injective and, the category
/// being finite, bijective at every horizon.
fn lazy_monoid_expectations(sys: &StagedSystem) -> Vec<Expectation> {
    let mut out = Vec::new();
    let bad: Vec<usize> = (1..=20)
        .filter(|&h| {
            let r = iota_at_horizon(sys, h);
            !(r.injective.is_proven() && r.surjective.is_proven())
        })
        .collect();
    expect(&mut out, "ι bijective at horizons 1..=20", bad.is_empty(), format!("failing horizons {bad:?}"));
    let naturality = (0..=20).all(|n| {
        let x = sys.eset(n);
        let y = sys.eset(n + 1);
        ESetMorphism::new(&x, &y, sys.stage(n).step.clone()).is_ok()
    });
    expect(&mut out, "steps are natural", naturality, "");
    out
}

fn c2_expectations() -> Vec<Expectation> {
    let s = c2_collapse();
    let mut out = lazy_monoid_expectations(&s);
    let rep = ColimitElement { stage: 0, obj: 0, x: 0 };
    match stabilization_stage(&s, &["g".to_string()], rep, 10) {
        Ok(st) => expect(
            &mut out,
            "stabilization stage is 3 with fixed element c",
            st.verdict == Verdict::Proven { stage: 3 } && st.element == Some((3, "c".into())),
            verdict_text(&st.verdict),
        ),
        Err(e) => expect(&mut out, "stabilization stage is 3 with fixed element c", false, e.to_string()),
    }
    out
}
