use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use limcolim::bitset::BitSet;
use limcolim::congruence::{
    congruence_closure, minimal_improper_generators, trivial_eset_finitely_presented, MinimalGenerators,
    RelationFamily, TaggedPair,
};
use limcolim::dirsys::{iota_at_horizon, stabilization_stage, ColimitElement, LazySystem};
use limcolim::division::{condition_battery, emultdiv_min, left_congruences_enumerate, multdiv_min, Search};
use limcolim::eset::ESet;
use limcolim::gallery::{self, render_pairs};
use limcolim::json::{self, CategoryJson, CongruenceJson, ESetJson, MonoidJson, PosetJson, RelationJson, SystemJson};
use limcolim::poset_analysis::{
    abovefin_check, capne_oracle, critical_elements, gathers, gathers_everywhere, minimal_elements,
    minimal_gathering_set, tgath_check, to_dot, CAPNE_MAX_ELEMENTS,
};
use limcolim::structures::{monoid_to_category, poset_to_category, preorder_quotient, FiniteCategory, FiniteGroup, FiniteMonoid, Poset};
use limcolim::{Error, Result};

use crate::{BenchCmd, CategoryCmd, Cli, CongruenceCmd, DirsysCmd, EsetCmd, GalleryCmd, Group, MonoidCmd, PosetCmd, Report, Source};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    raw.iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Parse(format!("parameter `{p}` should be key=value")))
        })
        .collect()
}

/// Gallery parameters with defaults filled in, as numbers where possible.
fn gallery_params(src: &Source) -> Result<(String, BTreeMap<String, String>)> {
    let name = src.gallery.clone().expect("checked by caller");
    let item = gallery::find(&name)?;
    let given = params(&src.params)?;
    let mut out = BTreeMap::new();
    for (k, d) in item.params {
        out.insert(k.to_string(), given.get(*k).cloned().unwrap_or_else(|| d.to_string()));
    }
    for k in given.keys() {
        if !out.contains_key(k) {
            return Err(Error::Parse(format!("`{name}` takes no parameter `{k}`")));
        }
    }
    Ok((name, out))
}

fn num(p: &BTreeMap<String, String>, key: &str) -> Result<usize> {
    p[key].parse().map_err(|_| Error::Parse(format!("parameter {key}={} is not a number", p[key])))
}

fn need_one(src: &Source) -> Result<()> {
    match (&src.file, &src.gallery) {
        (Some(_), Some(_)) => Err(Error::Parse("give either --file or --gallery, not both".into())),
        (None, None) => Err(Error::Parse("an input is required: --file or --gallery".into())),
        _ => Ok(()),
    }
}

fn load_poset(src: &Source) -> Result<Poset> {
    need_one(src)?;
    if let Some(f) = &src.file {
        return json::parse::<PosetJson>(&read(f)?)?.build();
    }
    let (name, p) = gallery_params(src)?;
    match name.as_str() {
        "two_bottom_chain" => gallery::two_bottom_chain(num(&p, "k")?),
        "gathering_drift" => gallery::gathering_drift(num(&p, "k")?),
        "diamond" => Ok(gallery::diamond()),
        _ => Err(Error::Parse(format!("gallery item `{name}` is not a poset"))),
    }
}

fn load_monoid(src: &Source) -> Result<FiniteMonoid> {
    need_one(src)?;
    if let Some(f) = &src.file {
        return json::parse::<MonoidJson>(&read(f)?)?.build();
    }
    let (name, p) = gallery_params(src)?;
    match name.as_str() {
        "rightzero_opposite" => gallery::rightzero_opposite(num(&p, "s")?),
        "maxchain_monoid" => gallery::maxchain_monoid(num(&p, "k")?),
        "field_mult" => gallery::field_mult(num(&p, "p")?),
        _ => Err(Error::Parse(format!("gallery item `{name}` is not a finite monoid"))),
    }
}

fn load_category(src: &Source) -> Result<FiniteCategory> {
    need_one(src)?;
    if let Some(f) = &src.file {
        return json::parse::<CategoryJson>(&read(f)?)?.build();
    }
    match load_poset(src) {
        Ok(j) => Ok(poset_to_category(&j)),
        Err(_) => load_monoid(src).map(|m| monoid_to_category(&m)),
    }
}

fn load_eset(src: &Source) -> Result<ESet> {
    match &src.file {
        Some(f) if src.gallery.is_none() => json::parse::<ESetJson>(&read(f)?)?.build(),
        _ => Err(Error::Parse("E-sets are read from --file".into())),
    }
}

fn load_lazy(src: &Source) -> Result<Box<dyn LazySystem>> {
    if src.gallery.is_none() {
        return Err(Error::Parse("lazy systems are named with --gallery".into()));
    }
    let (name, p) = gallery_params(src)?;
    Ok(match name.as_str() {
        "dyadic" => Box::new(gallery::dyadic_group_system(num(&p, "h")?)?),
        "pinje" => Box::new(gallery::pinje_system(p["variant"].parse()?, num(&p, "h")?)?),
        "c2_collapse" => Box::new(gallery::c2_collapse()),
        "maxchain_collapse" => Box::new(gallery::maxchain_collapse(num(&p, "k")?)?),
        "cyclic_tower" => Box::new(gallery::cyclic_tower(num(&p, "e")?)?),
        _ => return Err(Error::Parse(format!("gallery item `{name}` is not a lazy system"))),
    })
}

fn names_of(j: &Poset, items: &[usize]) -> Vec<String> {
    items.iter().map(|&e| j.name(e).to_string()).collect()
}

fn monoid_names(m: &FiniteMonoid, items: &[usize]) -> Vec<String> {
    items.iter().map(|&e| m.name(e).to_string()).collect()
}

fn search_json<T, F: Fn(&T) -> Value>(s: &Search<T>, f: F) -> Value {
    match s {
        Search::Found(t) => json!({"found": f(t)}),
        Search::Exhausted { budget } => json!({"exhausted": {"budget": budget}}),
    }
}

fn pairs_json(x: &ESet, r: &RelationFamily) -> Value {
    Value::Array(
        render_pairs(x, &r.pairs)
            .into_iter()
            .map(|(o, s, t)| json!({"object": o, "s": s, "t": t}))
            .collect(),
    )
}

fn generators_json(x: &ESet, g: &MinimalGenerators) -> Value {
    match g {
        MinimalGenerators::Found(r) => json!({"size": r.len(), "pairs": pairs_json(x, r)}),
        MinimalGenerators::Exhausted { budget, upper_bound } => json!({
            "exhausted": {"budget": budget},
            "upper_bound": {"size": upper_bound.len(), "pairs": pairs_json(x, upper_bound)},
        }),
    }
}

pub fn dispatch(cli: &Cli, echo: Vec<String>) -> Result<Report> {
    let report = |findings: Value| Report::new(echo.clone(), findings);
    match &cli.command {
        Group::Category(CategoryCmd::Validate { src }) => {
            let cat = Arc::new(load_category(src)?);
            let q = preorder_quotient(&cat);
            let classes: Vec<Vec<String>> = q
                .members
                .iter()
                .map(|g| g.iter().map(|&o| cat.object_name(o).to_string()).collect())
                .collect();
            let t = tgath_check(&cat);
            let fp = trivial_eset_finitely_presented(&cat)?;
            Ok(report(json!({
                "objects": cat.objects(),
                "morphisms": cat.morphism_count(),
                "generators": cat.generators().iter().map(|&g| cat.morphism(g).name.clone()).collect::<Vec<_>>(),
                "object_classes": classes,
                "conditions": t,
                "trivial_eset_presentation": {
                    "a": fp.a.iter().map(|&o| cat.object_name(o).to_string()).collect::<Vec<_>>(),
                    "relations": generators_json(&fp.h.eset, &fp.generators),
                },
            })))
        }
        Group::Category(CategoryCmd::Emultdiv { src, min: _ }) => {
            let cat = load_category(src)?;
            let budget = cli.budget.unwrap_or(cat.morphism_count());
            let s = emultdiv_min(&cat, budget);
            Ok(report(json!({
                "emultdiv": search_json(&s, |v: &Vec<usize>| json!(v.iter().map(|&f| cat.morphism(f).name.clone()).collect::<Vec<_>>())),
            })))
        }
        Group::Poset(cmd) => poset(cli, cmd, report),
        Group::Monoid(MonoidCmd::Battery { src, opposite }) => {
            let mut m = load_monoid(src)?;
            if *opposite {
                m = m.opposite();
            }
            let b = condition_battery(&m);
            Ok(report(json!({
                "opposite": opposite,
                "elements": m.elements(),
                "generators": monoid_names(&m, &b.generators),
                "right_zeros": monoid_names(&m, &b.right_zeros),
                "smallest_left_ideal": monoid_names(&m, &b.smallest_left_ideal),
                "left_ideal_generator": m.name(b.left_ideal_generator),
                "fgm0_generators": monoid_names(&m, &b.fgm0_generators),
                "fgm0_submonoid": monoid_names(&m, &b.fgm0_submonoid),
                "multdiv": monoid_names(&m, &b.multdiv),
            })))
        }
        Group::Monoid(MonoidCmd::Multdiv { src, min: _ }) => {
            let m = load_monoid(src)?;
            let s = multdiv_min(&m, cli.budget.unwrap_or(m.len()));
            Ok(report(json!({"multdiv": search_json(&s, |v: &Vec<usize>| json!(monoid_names(&m, v)))})))
        }
        Group::Monoid(MonoidCmd::Congruences { src }) => {
            let m = load_monoid(src)?;
            let congs = left_congruences_enumerate(&m)?;
            let rendered: Vec<Vec<Vec<String>>> = congs
                .iter()
                .map(|ids| {
                    let k = ids.iter().max().map_or(0, |&c| c as usize + 1);
                    (0..k)
                        .map(|c| (0..m.len()).filter(|&x| ids[x] as usize == c).map(|x| m.name(x).to_string()).collect())
                        .collect()
                })
                .collect();
            Ok(report(json!({"count": congs.len(), "left_congruences": rendered})))
        }
        Group::Eset(EsetCmd::Limit { src }) => {
            let x = load_eset(src)?;
            let cat = x.category();
            let points: Vec<BTreeMap<String, String>> = x
                .limit()
                .iter()
                .map(|p| {
                    (0..cat.object_count())
                        .map(|o| (cat.object_name(o).to_string(), x.label(o, p.coordinate(o)).into_owned()))
                        .collect()
                })
                .collect();
            Ok(report(json!({"size": points.len(), "limit": points})))
        }
        Group::Eset(EsetCmd::Quotient { src, relation }) => {
            let x = load_eset(src)?;
            let r = json::parse::<RelationJson>(&read(relation)?)?.build(&x)?;
            let c = congruence_closure(&x, &r)?.congruence;
            let (q, _) = x.quotient(&c)?;
            Ok(report(json!({
                "congruence": CongruenceJson::from_congruence(&x, &c),
                "quotient": ESetJson::from_eset(&q),
            })))
        }
        Group::Congruence(CongruenceCmd::Close { src, relation }) => {
            let x = load_eset(src)?;
            let r = json::parse::<RelationJson>(&read(relation)?)?.build(&x)?;
            let rep = congruence_closure(&x, &r)?;
            Ok(report(json!({
                "congruence": CongruenceJson::from_congruence(&x, &rep.congruence),
                "improper": rep.congruence.is_improper(),
                "merges": rep.merges,
                "initial_classes": rep.initial_classes,
                "final_classes": rep.final_classes,
            })))
        }
        Group::Congruence(CongruenceCmd::MinimalGens { src }) => {
            let x = load_eset(src)?;
            let budget = cli.budget.unwrap_or(x.total_size());
            let g = minimal_improper_generators(&x, budget);
            Ok(report(json!({"minimal_generators": generators_json(&x, &g)})))
        }
        Group::Dirsys(DirsysCmd::Iota { system, src }) => {
            if let Some(path) = system {
                if src.file.is_some() || src.gallery.is_some() {
                    return Err(Error::Parse("give either --system or --gallery".into()));
                }
                let s = json::parse::<SystemJson>(&read(path)?)?.build()?;
                let r = s.iota();
                let findings = json!({
                    "domain": r.domain_labels,
                    "codomain": r.codomain_labels,
                    "map": r.map.iter().enumerate().map(|(d, &c)| json!([r.domain_labels[d], r.codomain_labels[c]])).collect::<Vec<_>>(),
                    "bijective": r.is_bijective(),
                });
                return Ok(report(findings).verdict("injective", r.injective).verdict("surjective", r.surjective));
            }
            let sys = load_lazy(src)?;
            let h = cli.horizon;
            let r = iota_at_horizon(sys.as_ref(), h);
            let findings = json!({
                "system": sys.name(),
                "horizon": h,
                "domain": r.domain.iter().map(|(n, l)| format!("{l}@{n}")).collect::<Vec<_>>(),
                "codomain": r.codomain_labels,
                "map": r.map.iter().enumerate().map(|(d, &c)| json!([format!("{}@{}", r.domain[d].1, r.domain[d].0), r.codomain_labels[c]])).collect::<Vec<_>>(),
            });
            Ok(report(findings).verdict("injective", r.injective).verdict("surjective", r.surjective))
        }
        Group::Dirsys(DirsysCmd::Stabilize { src, gens, stage, element }) => {
            let sys = load_lazy(src)?;
            let size = sys.stage(*stage).sizes.first().copied().unwrap_or(0);
            let x = (0..size as u32)
                .find(|&x| sys.element_label(*stage, 0, x) == *element)
                .ok_or_else(|| Error::UnknownElement(format!("`{element}` at stage {stage}")))?;
            let st = stabilization_stage(sys.as_ref(), gens, ColimitElement { stage: *stage, obj: 0, x }, cli.horizon)?;
            let per: BTreeMap<String, _> = st.per_generator.iter().cloned().collect();
            let findings = json!({
                "system": sys.name(),
                "horizon": cli.horizon,
                "per_generator": per,
                "element": st.element.as_ref().map(|(k, l)| format!("{l}@{k}")),
            });
            Ok(report(findings).verdict("stabilization", st.verdict))
        }
        Group::Gallery(GalleryCmd::List) => Ok(report(json!({"items": gallery::ITEMS}))),
        Group::Gallery(GalleryCmd::Run { name, params: raw }) => {
            let r = gallery::run(name, &params(raw)?)?;
            let failed = !r.passed;
            let mut rep = report(serde_json::to_value(&r).expect("gallery reports serialize"));
            rep.refuted = failed;
            Ok(rep)
        }
        Group::Bench(BenchCmd::Closure { elements, pairs, morphisms }) => bench(cli, *elements, *pairs, *morphisms, report),
    }
}

fn poset<F: Fn(Value) -> Report>(cli: &Cli, cmd: &PosetCmd, report: F) -> Result<Report> {
    let j = match cmd {
        PosetCmd::Analyze { src } | PosetCmd::Gather { src, .. } | PosetCmd::Critical { src } | PosetCmd::Dot { src } => {
            load_poset(src)?
        }
    };
    let n = j.len();
    let a = minimal_elements(&j);
    let abit = BitSet::from_iter(n, a.iter().copied());
    let crit = critical_elements(&j, &abit);
    let budget = cli.budget.unwrap_or(n);
    match cmd {
        PosetCmd::Critical { .. } => Ok(report(json!({"critical": names_of(&j, &crit)}))),
        PosetCmd::Dot { .. } => {
            let g = minimal_gathering_set(&j, &abit, budget);
            let mut r = report(Value::Null);
            r.raw = Some(to_dot(&j, &a, &crit, g.found().unwrap_or(&[])));
            Ok(r)
        }
        PosetCmd::Gather { b, e, .. } => {
            let bs = b.iter().map(|x| j.index_of(x)).collect::<Result<Vec<_>>>()?;
            let bbit = BitSet::from_iter(n, bs.iter().copied());
            let es: Vec<usize> = match e {
                Some(e) => vec![j.index_of(e)?],
                None => (0..n).collect(),
            };
            let per: BTreeMap<String, Value> = es
                .iter()
                .map(|&e| {
                    let g = gathers(&j, &abit, &bbit, e);
                    let classes: Vec<Vec<String>> = g.classes.iter().map(|c| names_of(&j, c)).collect();
                    (j.name(e).to_string(), json!({"gathers": g.gathers, "classes": classes}))
                })
                .collect();
            let all = per.values().all(|v| v["gathers"] == json!(true));
            Ok(report(json!({"a": names_of(&j, &a), "b": b, "gathers": all, "under": per})))
        }
        PosetCmd::Analyze { .. } => {
            let g = minimal_gathering_set(&j, &abit, budget);
            let cbit = BitSet::from_iter(n, crit.iter().copied());
            let capne = if n <= CAPNE_MAX_ELEMENTS { capne_oracle(&j).ok() } else { None };
            let cat = poset_to_category(&j);
            let t = tgath_check(&cat);
            Ok(report(json!({
                "elements": j.names(),
                "minimal": names_of(&j, &a),
                "every_element_above_minimal": abovefin_check(&j).holds,
                "critical": names_of(&j, &crit),
                "critical_gathers_everywhere": gathers_everywhere(&j, &abit, &cbit),
                "minimal_gathering_set": g.found().map(|v| names_of(&j, v)),
                "downset_intersections_nonempty": capne.map(|(ok, _)| ok),
                "conditions_hold": t.a_finite && t.every_element_above_a && t.b_finite && t.b_gathers_a_everywhere,
            })))
        }
    }
}

fn bench<F: Fn(Value) -> Report>(cli: &Cli, n: usize, pairs: usize, m: usize, report: F) -> Result<Report> {
    if m == 0 || n == 0 || n % m != 0 {
        return Err(Error::Parse(format!("--elements {n} must be a positive multiple of --morphisms {m}")));
    }
    let g = FiniteGroup::cyclic(m)?;
    let cat = Arc::new(monoid_to_category(g.monoid()));
    let shift = n / m;
    let actions: Vec<Vec<u32>> = (0..m).map(|a| (0..n).map(|x| ((x + a * shift) % n) as u32).collect()).collect();
    let x = ESet::new(cat, vec![limcolim::eset::Carrier::anonymous(n)], actions)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let seed_pairs: Vec<TaggedPair> = (0..pairs)
        .map(|_| TaggedPair::new(0, rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
        .collect();
    let r = RelationFamily::new(seed_pairs);
    let start = Instant::now();
    let rep = congruence_closure(&x, &r)?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let mut out = report(json!({
        "elements": n,
        "morphisms": m,
        "seed_pairs": pairs,
        "seed": cli.seed,
        "merges": rep.merges,
        "initial_classes": rep.initial_classes,
        "final_classes": rep.final_classes,
        "accounting_exact": rep.merges == rep.initial_classes - rep.final_classes,
    }));
    out.timing_ms = Some(elapsed);
    Ok(out)
}
