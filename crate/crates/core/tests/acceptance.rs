//! Acceptance criteria 1–13. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use limcolim::bitset::BitSet;
use limcolim::congruence::{
    congruence_closure, greedy_improper_generators, minimal_improper_generators, minimal_improper_support,
    RelationFamily, TaggedPair,
};
use limcolim::dirsys::{
    eventual_fixedness_certificate, iota_at_horizon, ColimitElement, LazySystem, Verdict,
};
use limcolim::division::{components, hiccup_check, left_congruence_closure, right_division_closure};
use limcolim::enumerate::naturally_labeled_posets;
use limcolim::eset::{hom_functor, union_hom, Carrier, ESet};
use limcolim::gallery::{
    c2_collapse, cyclic_tower, dyadic_group_system, maxchain_collapse, maxchain_monoid, monoid_xy,
    monoid_xy_fgm0_size, monoid_xyzw, pinje_system, render_pairs, rightzero_opposite, two_bottom_chain, PinjVariant,
};
use limcolim::poset_analysis::{critical_elements, gathers, minimal_elements, minimal_gathering_set};
use limcolim::random::{random_category, random_directed_poset, random_directed_system, random_eset, random_monoid, random_poset, random_relation, Limits};
use limcolim::structures::{monoid_to_category, poset_to_category, FiniteGroup, FiniteMonoid, Poset};
use limcolim::words::{division_rounds, WordMonoid};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

// ---------------------------------------------------------------- oracles

/// Least equivalence per object containing the pairs and closed under every
/// morphism, by fixpoint iteration on boolean matrices.
fn closure_oracle(x: &ESet, pairs: &[TaggedPair]) -> Vec<Vec<u32>> {
    let cat = x.category();
    let objs = cat.object_count();
    let mut rel: Vec<Vec<Vec<bool>>> = (0..objs)
        .map(|o| {
            let n = x.size(o);
            (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()
        })
        .collect();
    for p in pairs {
        rel[p.obj][p.s as usize][p.t as usize] = true;
    }
    loop {
        let mut changed = false;
        for o in 0..objs {
            let n = x.size(o);
            for i in 0..n {
                for j in 0..n {
                    if rel[o][i][j] && !rel[o][j][i] {
                        rel[o][j][i] = true;
                        changed = true;
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if rel[o][i][k] && rel[o][k][j] && !rel[o][i][j] {
                            rel[o][i][j] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        for f in 0..cat.morphism_count() {
            let m = cat.morphism(f);
            for i in 0..x.size(m.dom) {
                for j in 0..x.size(m.dom) {
                    if rel[m.dom][i][j] {
                        let (a, b) = (x.act(f, i as u32) as usize, x.act(f, j as u32) as usize);
                        if !rel[m.cod][a][b] {
                            rel[m.cod][a][b] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    rel.iter()
        .map(|r| {
            let n = r.len();
            let mut ids = vec![u32::MAX; n];
            let mut next = 0;
            for i in 0..n {
                if ids[i] == u32::MAX {
                    for j in i..n {
                        if r[i][j] {
                            ids[j] = next;
                        }
                    }
                    next += 1;
                }
            }
            ids
        })
        .collect()
}

fn canonical(ids: &[u32]) -> Vec<u32> {
    let mut map = HashMap::new();
    ids.iter()
        .map(|&c| {
            let k = map.len() as u32;
            *map.entry(c).or_insert(k)
        })
        .collect()
}

/// Compatible tuples, by walking the full product and checking every
/// morphism (not just generators).
fn limit_oracle(x: &ESet) -> Vec<Vec<u32>> {
    let cat = x.category();
    let objs = cat.object_count();
    let sizes: Vec<usize> = (0..objs).map(|o| x.size(o)).collect();
    if sizes.iter().any(|&s| s == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t = vec![0u32; objs];
    loop {
        let ok = (0..cat.morphism_count()).all(|f| {
            let m = cat.morphism(f);
            x.act(f, t[m.dom]) == t[m.cod]
        });
        if ok {
            out.push(t.clone());
        }
        let mut k = objs;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            t[k] += 1;
            if (t[k] as usize) < sizes[k] {
                break;
            }
            t[k] = 0;
        }
    }
}

/// Whether `B` gathers `A` under `E`, by graph search: two elements of
/// `A ∩ down(E)` are adjacent when both lie below a common `F ∈ B ∩ down(E)`.
fn gathers_oracle(j: &Poset, a: &[usize], b: &[usize], e: usize) -> bool {
    let below: Vec<usize> = a.iter().copied().filter(|&x| j.leq(x, e)).collect();
    if below.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; below.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for k in 0..below.len() {
            if seen[k] {
                continue;
            }
            let linked = b.iter().any(|&f| j.leq(f, e) && j.leq(below[i], f) && j.leq(below[k], f));
            if linked {
                seen[k] = true;
                stack.push(k);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Set partitions of `0..n` as restricted growth strings.
fn partitions_oracle(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur[i] = c;
            rec(i + 1, max.max(c), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 0, &mut cur, &mut out);
    out
}

fn is_left_congruence_oracle(m: &FiniteMonoid, ids: &[u32]) -> bool {
    let n = m.len();
    (0..n).all(|a| (0..n).all(|b| ids[a] != ids[b] || (0..n).all(|u| ids[m.mul(u, a)] == ids[m.mul(u, b)])))
}

fn bell_oracle(n: usize) -> usize {
    partitions_oracle(n).len()
}

// -------------------------------------------------------------- criteria

fn corpus(seed: u64, count: usize) -> Vec<(ESet, RelationFamily)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let cat = Arc::new(random_category(&mut rng, Limits::default()));
            let x = random_eset(&mut rng, &cat, Limits::default());
            let k = rng.gen_range(0..=6);
            let r = random_relation(&mut rng, &x, k);
            (x, r)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    let data = corpus(1, 500);
    for (x, r) in &data {
        let got = congruence_closure(x, r).expect("valid pairs").congruence;
        let want = closure_oracle(x, &r.pairs);
        for o in 0..x.category().object_count() {
            if canonical(got.ids(o)) != want[o] {
                bad += 1;
                break;
            }
        }
    }
    let t = start.elapsed();
    outcome(bad == 0 && t < Duration::from_secs(10), format!("500 E-sets, {bad} mismatches, {:.2?}", t))
}

fn criterion_2() -> Outcome {
    let mut bad = 0;
    let mut skipped = 0;
    for (x, _) in corpus(1, 500) {
        if x.product_size() > 1_000_000 {
            skipped += 1;
            continue;
        }
        let got: Vec<Vec<u32>> = x.limit().into_iter().map(|p| p.coords).collect();
        if got != limit_oracle(&x) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} E-sets, {bad} mismatches, {skipped} over the size cap", 500 - skipped))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = Vec::new();
    for case in 0..200 {
        let cat = Arc::new(random_category(&mut rng, Limits::default()));
        let y = random_eset(&mut rng, &cat, Limits::default());
        let index = random_directed_poset(&mut rng, 5);
        let s = random_directed_system(&mut rng, &y, index);
        let r = s.iota();
        let lim_top = limit_oracle(s.member(s.top()));
        if !r.is_bijective() || r.codomain.len() != lim_top.len() || r.domain.len() != lim_top.len() {
            bad.push(case);
        }
    }
    outcome(bad.is_empty(), format!("200 systems, failures {bad:?}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut finite_bad = 0;
    for _ in 0..200 {
        let m = random_monoid(&mut rng, 5);
        let cat = Arc::new(monoid_to_category(&m));
        let y = random_eset(&mut rng, &cat, Limits::default());
        let index = random_directed_poset(&mut rng, 5);
        let s = random_directed_system(&mut rng, &y, index);
        if !s.iota().injective.is_proven() {
            finite_bad += 1;
        }
    }
    let mut lazy: Vec<Box<dyn LazySystem>> = vec![Box::new(c2_collapse())];
    for k in 1..=4 {
        lazy.push(Box::new(maxchain_collapse(k).unwrap()));
        lazy.push(Box::new(cyclic_tower(k).unwrap()));
    }
    for h in [1, 5, 10, 20] {
        lazy.push(Box::new(dyadic_group_system(h).unwrap()));
    }
    let mut lazy_bad = Vec::new();
    for sys in &lazy {
        for h in 1..=20 {
            if !iota_at_horizon(sys.as_ref(), h).injective.is_proven() {
                lazy_bad.push(format!("{}@{h}", sys.name()));
            }
        }
    }
    outcome(
        finite_bad == 0 && lazy_bad.is_empty(),
        format!("200 monoid systems ({finite_bad} failures), {} lazy systems × 20 horizons, failures {lazy_bad:?}", lazy.len()),
    )
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    for h in 1..=20 {
        let d = dyadic_group_system(h).unwrap();
        let r = iota_at_horizon(&d, h);
        if !(r.domain.is_empty() && r.codomain.len() == 1 && r.surjective.is_refuted()) {
            bad.push(format!("h={h}: iota"));
        }
        let mut probes = Vec::new();
        let mut expected = Vec::new();
        for m in 0..=h {
            for a in [1u64, 3, 5] {
                if m >= 3 || a < (1 << m) || m == 0 {
                    let a = if m == 0 { 0 } else { a % (1 << m) };
                    if m > 0 && a % 2 == 0 {
                        continue;
                    }
                    probes.push(format!("{a}/{}", 1u64 << m));
                    expected.push(m);
                }
            }
        }
        let rep = ColimitElement { stage: 0, obj: 0, x: 1 };
        let got = eventual_fixedness_certificate(&d, rep, &probes, h).unwrap();
        for ((p, v), m) in got.iter().zip(&expected) {
            if *v != (Verdict::Proven { stage: *m }) {
                bad.push(format!("h={h}: probe {p} gave {v:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("h = 1..=20, failures {bad:?}"))
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    for h in 1..=15 {
        let p = pinje_system(PinjVariant::PlusMinus, h).unwrap();
        let r = iota_at_horizon(&p, h);
        let w = r.injective.witness().map(|w| w.elements.clone()).unwrap_or_default();
        if !(r.injective.is_refuted() && w.len() == 3 && w[0] == "x-" && w[1] == "x+") {
            bad.push(format!("plusminus h={h}"));
        }
        let e = pinje_system(PinjVariant::Empty, h).unwrap();
        let r = iota_at_horizon(&e, h);
        if !(r.domain.is_empty() && r.codomain.len() == 1 && r.surjective.is_refuted()) {
            bad.push(format!("empty h={h}"));
        }
    }
    outcome(bad.is_empty(), format!("h = 1..=15, failures {bad:?}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    let mut gathering_sets = 0usize;
    for case in 0..500 {
        let n = rng.gen_range(1..=10);
        let j = random_poset(&mut rng, n);
        let refl = (0..n).all(|e| j.leq(e, e));
        let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(j.leq(a, b) && j.leq(b, c)) || j.leq(a, c))));
        let a = minimal_elements(&j);
        let abit = BitSet::from_iter(n, a.iter().copied());
        let crit = critical_elements(&j, &abit);
        let crit_gathers = (0..n).all(|e| gathers_oracle(&j, &a, &crit, e));
        // every gathering set, by exhaustive search, contains the critical set
        let mut contained = true;
        for mask in 0u32..(1 << n) {
            let b: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if (0..n).all(|e| gathers_oracle(&j, &a, &b, e)) {
                gathering_sets += 1;
                let bbit = BitSet::from_iter(n, b.iter().copied());
                let agrees = (0..n).all(|e| gathers(&j, &abit, &bbit, e).gathers);
                if !agrees || !crit.iter().all(|c| b.contains(c)) {
                    contained = false;
                }
            }
        }
        if !(refl && trans && crit_gathers && contained) {
            bad.push(case);
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(30),
        format!("500 posets, {gathering_sets} gathering sets checked, failures {bad:?}, {:.2?}", t),
    )
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for k in 1..=6 {
        let j = two_bottom_chain(k).unwrap();
        let a = minimal_elements(&j);
        let abit = BitSet::from_iter(j.len(), a.iter().copied());
        let crit: Vec<&str> = critical_elements(&j, &abit).iter().map(|&e| j.name(e)).collect();
        let cat = Arc::new(poset_to_category(&j));
        let h = union_hom(&cat, &a).unwrap();
        let g = minimal_improper_generators(&h.eset, 3);
        let pairs = g.witness().map(|r| render_pairs(&h.eset, &r.pairs));
        let want = vec![("1".to_string(), "0_1->1".to_string(), "0_2->1".to_string())];
        if crit != ["1"] || pairs.as_ref() != Some(&want) {
            bad.push(format!("k={k}: critical {crit:?}, generators {pairs:?}"));
        }
    }
    outcome(bad.is_empty(), format!("chain lengths 1..=6, failures {bad:?}"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for n in 1..=7 {
        for lt in naturally_labeled_posets(n) {
            let j = Poset::from_relation((0..n).map(|i| format!("p{i}")).collect(), |a, b| a == b || lt[a][b]).unwrap();
            let a = minimal_elements(&j);
            if a.len() > 3 {
                continue;
            }
            checked += 1;
            let abit = BitSet::from_iter(n, a.iter().copied());
            let gather = minimal_gathering_set(&j, &abit, n).found().map(|b| b.len());
            let cat = Arc::new(poset_to_category(&j));
            let h = union_hom(&cat, &a).unwrap();
            let support = minimal_improper_support(&h.eset, n).map(|s| s.len());
            if gather != support || gather.is_none() {
                bad.push(format!("{:?}: gathering {gather:?}, support {support:?}", j.covers()));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} posets, {} mismatches {:?}, {:.2?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>(), start.elapsed()),
    )
}

fn criterion_10() -> Outcome {
    let mut bad = Vec::new();
    for k in 1..=5 {
        let m = maxchain_monoid(k).unwrap();
        let count = partitions_oracle(m.len()).iter().filter(|p| is_left_congruence_oracle(&m, p)).count();
        if count != 1 << k {
            bad.push(format!("MaxChain({k}): {count}"));
        }
    }
    for s in 1..=4 {
        let m = rightzero_opposite(s).unwrap();
        let count = partitions_oracle(m.len()).iter().filter(|p| is_left_congruence_oracle(&m, p)).count();
        let cat = Arc::new(monoid_to_category(&m));
        let gens = minimal_improper_generators(&hom_functor(&cat, 0), s).witness().map(|r| r.len());
        if count != bell_oracle(s + 1) || gens != Some(s) {
            bad.push(format!("RZ({s})^op: {count} congruences, generators {gens:?}"));
        }
    }
    outcome(bad.is_empty(), format!("failures {bad:?}"))
}

fn random_generating_family(rng: &mut ChaCha8Rng, x: &ESet) -> RelationFamily {
    let n = x.size(0) as u32;
    let mut pairs = Vec::new();
    loop {
        let r = RelationFamily::new(pairs.clone());
        if congruence_closure(x, &r).unwrap().congruence.is_improper() {
            return r;
        }
        pairs.push(TaggedPair::new(0, rng.gen_range(0..n), rng.gen_range(0..n)));
    }
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tables = BTreeSet::new();
    let mut bad = Vec::new();
    let mut instances = 0;
    while instances < 1000 {
        let m = random_monoid(&mut rng, 5);
        tables.insert(m.table());
        instances += 1;
        let cat = Arc::new(monoid_to_category(&m));
        let h = hom_functor(&cat, 0);
        let mut families = vec![greedy_improper_generators(&h), random_generating_family(&mut rng, &h)];
        if let Some(r) = minimal_improper_generators(&h, m.len()).witness() {
            families.push(r.clone());
        }
        for r in &families {
            if right_division_closure(&m, &components(r)).len() != m.len() {
                bad.push(format!("{:?}", m.table()));
            }
        }
    }
    let mut hiccups = 0;
    let mut fixed_classes = 0;
    while hiccups < 500 {
        let m = random_monoid(&mut rng, 5);
        let k = rng.gen_range(0..=3);
        let pairs: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..m.len()), rng.gen_range(0..m.len()))).collect();
        let ids = left_congruence_closure(&m, &pairs);
        hiccups += 1;
        for (a, improper) in hiccup_check(&m, &ids) {
            fixed_classes += 1;
            // independent check: close C ∪ {(a, 1)} with the oracle
            let x = hom_functor(&Arc::new(monoid_to_category(&m)), 0);
            let mut tp: Vec<TaggedPair> = (0..m.len())
                .flat_map(|u| (0..m.len()).map(move |v| (u, v)))
                .filter(|&(u, v)| ids[u] == ids[v])
                .map(|(u, v)| TaggedPair::new(0, u as u32, v as u32))
                .collect();
            tp.push(TaggedPair::new(0, a as u32, m.one() as u32));
            let oracle = closure_oracle(&x, &tp)[0].iter().all(|&c| c == 0);
            if !improper || !oracle {
                bad.push(format!("hiccup {:?} at {a}", m.table()));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{instances} tables ({} distinct), {hiccups} (M, C) instances with {fixed_classes} fixed classes, failures {}",
            tables.len(),
            bad.len()
        ),
    )
}

fn criterion_12() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for k in 1..=50 {
        let m = monoid_xyzw(k).unwrap();
        let r = division_rounds(&m, &[vec![m.z()], vec![m.w()]], 2, 4, 3).unwrap();
        if r.len() as u32 != m.alphabet_len() || r.values().any(|&round| round > 3) {
            bad.push(format!("xyzw k={k}"));
        }
        let xy = monoid_xy(k).unwrap();
        if monoid_xy_fgm0_size(&xy).unwrap() != Some(2) {
            bad.push(format!("xy k={k}"));
        }
    }
    outcome(bad.is_empty(), format!("k = 1..=50, failures {bad:?}, {:.2?}", start.elapsed()))
}

fn criterion_13() -> Outcome {
    let n = 1_000_000usize;
    let g = FiniteGroup::cyclic(10).unwrap();
    let cat = Arc::new(monoid_to_category(g.monoid()));
    let actions = (0..10).map(|a| (0..n).map(|x| ((x + a * (n / 10)) % n) as u32).collect()).collect();
    let x = ESet::new(cat, vec![Carrier::anonymous(n)], actions).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pairs = (0..500_000).map(|_| TaggedPair::new(0, rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))).collect();
    let r = RelationFamily::new(pairs);
    let start = Instant::now();
    let rep = congruence_closure(&x, &r).unwrap();
    let t = start.elapsed();
    let exact = rep.merges == rep.initial_classes - rep.final_classes;
    // classes of the result are unions of 10-element orbits, so the final
    // count is recomputed from the ids directly
    let recount = rep.congruence.class_count(0);
    outcome(
        exact && recount == rep.final_classes && t < Duration::from_secs(5),
        format!(
            "{} merges = {} - {} classes, {:.2?}",
            rep.merges, rep.initial_classes, rep.final_classes, t
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("congruence closure matches the fixpoint oracle", criterion_1),
        ("limits match the filtered product", criterion_2),
        ("ι bijective on random finite systems", criterion_3),
        ("ι injective over monoids, finite and lazy", criterion_4),
        ("dyadic system: empty domain, singleton codomain, exact probe stages", criterion_5),
        ("negative chain: injectivity and surjectivity refuted", criterion_6),
        ("posets: order axioms, critical set inside every gathering set", criterion_7),
        ("two-bottoms chain: critical {1}, one generating relation", criterion_8),
        ("gathering sets and generator supports agree", criterion_9),
        ("left congruence counts and generator sizes", criterion_10),
        ("division closure of generator components; adjoining (a, 1)", criterion_11),
        ("word-level gallery claims", criterion_12),
        ("closure performance and merge accounting", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} [{}] {name}: {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
