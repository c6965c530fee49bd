use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use limcolim::bitset::BitSet;
use limcolim::congruence::{congruence_closure, congruence_closure_with, WorklistOrder};
use limcolim::dirsys::{colimit_equal, ColimitElement, LazySystem, Verdict};
use limcolim::division::{is_left_congruence, is_right_division_closed_submonoid, left_congruence_closure};
use limcolim::eset::ESet;
use limcolim::gallery::{cyclic_tower, dyadic_group_system, maxchain_collapse};
use limcolim::json::{self, CategoryJson, ESetJson, MonoidJson, PosetJson, RelationJson, SystemJson};
use limcolim::poset_analysis::{gathers, minimal_elements};
use limcolim::random::{
    random_category, random_directed_poset, random_directed_system, random_eset, random_monoid, random_poset,
    random_relation, Limits,
};
use limcolim::structures::{poset_to_category, preorder_quotient, FiniteCategory, Poset};

fn eset_from(rng: &mut ChaCha8Rng) -> ESet {
    let cat = Arc::new(random_category(rng, Limits::default()));
    random_eset(rng, &cat, Limits::default())
}

fn subset(rng: &mut ChaCha8Rng, n: usize) -> BitSet {
    BitSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_ignores_worklist_order(seed in any::<u64>(), shuffle in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = eset_from(&mut rng);
        let k = rng.gen_range(0..=6);
        let r = random_relation(&mut rng, &x, k);
        let fifo = congruence_closure_with(&x, &r, WorklistOrder::Fifo).unwrap();
        for order in [WorklistOrder::Lifo, WorklistOrder::Shuffled(shuffle)] {
            let other = congruence_closure_with(&x, &r, order).unwrap();
            prop_assert_eq!(&other.congruence, &fifo.congruence);
            prop_assert_eq!(other.merges, fifo.merges);
        }
    }

    #[test]
    fn closure_is_functorial_and_contains_relation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = eset_from(&mut rng);
        let k = rng.gen_range(0..=6);
        let r = random_relation(&mut rng, &x, k);
        let rep = congruence_closure(&x, &r).unwrap();
        prop_assert!(rep.congruence.check_on(&x).is_ok());
        for p in &r.pairs {
            prop_assert!(rep.congruence.related(p.obj, p.s, p.t));
        }
        prop_assert_eq!(rep.merges, rep.initial_classes - rep.final_classes);
    }

    #[test]
    fn quotient_identifies_exactly_the_closure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = eset_from(&mut rng);
        let k = rng.gen_range(0..=4);
        let r = random_relation(&mut rng, &x, k);
        let c = congruence_closure(&x, &r).unwrap().congruence;
        let (_, proj) = x.quotient(&c).unwrap();
        for o in 0..x.category().object_count() {
            for s in 0..x.size(o) as u32 {
                for t in 0..x.size(o) as u32 {
                    prop_assert_eq!(proj.apply(o, s) == proj.apply(o, t), c.related(o, s, t));
                }
            }
        }
    }

    #[test]
    fn limits_are_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = eset_from(&mut rng);
        let k = rng.gen_range(0..=4);
        let r = random_relation(&mut rng, &x, k);
        let c = congruence_closure(&x, &r).unwrap().congruence;
        let (q, proj) = x.quotient(&c).unwrap();
        for p in x.limit() {
            prop_assert!(q.is_compatible(&proj.apply_limit(&p).coords));
        }
    }

    #[test]
    fn insertions_commute_with_connecting_maps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = eset_from(&mut rng);
        let index = random_directed_poset(&mut rng, 5);
        let s = random_directed_system(&mut rng, &y, index);
        let n = s.index().len();
        let top = s.top();
        for i in 0..n {
            prop_assert!(s.connect(i, i).unwrap().components().iter().enumerate()
                .all(|(o, c)| c.iter().enumerate().all(|(x, &v)| v as usize == x && o < usize::MAX)));
            for j in 0..n {
                if !s.index().leq(i, j) {
                    continue;
                }
                for o in 0..y.category().object_count() {
                    for x in 0..s.member(i).size(o) as u32 {
                        let via_j = s.connect(j, top).unwrap().apply(o, s.connect(i, j).unwrap().apply(o, x));
                        prop_assert_eq!(s.connect(i, top).unwrap().apply(o, x), via_j);
                        for k in 0..n {
                            if s.index().leq(j, k) {
                                let two = s.connect(j, k).unwrap().apply(o, s.connect(i, j).unwrap().apply(o, x));
                                prop_assert_eq!(s.connect(i, k).unwrap().apply(o, x), two);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn products_commute_with_directed_colimits(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = Arc::new(poset_to_category(&Poset::antichain(2)));
        let y = random_eset(&mut rng, &cat, Limits::default());
        let index = random_directed_poset(&mut rng, 5);
        let s = random_directed_system(&mut rng, &y, index);
        prop_assert!(s.iota().is_bijective());
    }

    #[test]
    fn monoid_systems_are_injective(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, 5);
        let cat = Arc::new(limcolim::structures::monoid_to_category(&m));
        let y = random_eset(&mut rng, &cat, Limits::default());
        let index = random_directed_poset(&mut rng, 4);
        let s = random_directed_system(&mut rng, &y, index);
        prop_assert!(s.iota().injective.is_proven());
    }

    #[test]
    fn verdicts_are_never_retracted(pick in 0usize..3, k in 1usize..4, a in 0u32..8, b in 0u32..8, h in 0usize..12) {
        let sys: Box<dyn LazySystem> = match pick {
            0 => Box::new(dyadic_group_system(k + 2).unwrap()),
            1 => Box::new(maxchain_collapse(k).unwrap()),
            _ => Box::new(cyclic_tower(k).unwrap()),
        };
        let size = sys.stage(0).sizes[0] as u32;
        let (a, b) = (ColimitElement { stage: 0, obj: 0, x: a % size }, ColimitElement { stage: 0, obj: 0, x: b % size });
        let v = colimit_equal(sys.as_ref(), a, b, h);
        for later in h..h + 6 {
            let w = colimit_equal(sys.as_ref(), a, b, later);
            match &v {
                Verdict::Proven { .. } => prop_assert_eq!(&w, &v),
                Verdict::RefutedWithinHorizon { .. } => prop_assert!(w.is_refuted()),
                Verdict::Unknown { .. } => {}
            }
        }
    }

    #[test]
    fn order_axioms_and_category_round_trip(seed in any::<u64>(), n in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_poset(&mut rng, n);
        for a in 0..n {
            prop_assert!(j.leq(a, a));
            for b in 0..n {
                prop_assert!(!(j.leq(a, b) && j.leq(b, a)) || a == b);
                for c in 0..n {
                    prop_assert!(!(j.leq(a, b) && j.leq(b, c)) || j.leq(a, c));
                }
            }
        }
        let q = preorder_quotient(&poset_to_category(&j));
        prop_assert_eq!(PosetJson::from_poset(&q.poset), PosetJson::from_poset(&j));
    }

    #[test]
    fn gathering_laws(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_poset(&mut rng, n);
        let a = if rng.gen_bool(0.5) {
            BitSet::from_iter(n, minimal_elements(&j))
        } else {
            subset(&mut rng, n)
        };
        let b1 = subset(&mut rng, n);
        let b2 = subset(&mut rng, n);
        // reflexivity: B gathers A under each of its own elements
        for e in b1.iter() {
            prop_assert!(gathers(&j, &a, &b1, e).gathers);
        }
        // transitivity through B2
        let b1_under_b2 = b2.iter().all(|f| gathers(&j, &a, &b1, f).gathers);
        for e in 0..n {
            if b1_under_b2 && gathers(&j, &a, &b2, e).gathers {
                prop_assert!(gathers(&j, &a, &b1, e).gathers);
            }
        }
    }

    #[test]
    fn left_congruence_closure_is_least(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, 5);
        let k = rng.gen_range(0..=3);
        let pairs: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..m.len()), rng.gen_range(0..m.len()))).collect();
        let ids = left_congruence_closure(&m, &pairs);
        prop_assert!(is_left_congruence(&m, &ids));
        for &(a, b) in &pairs {
            prop_assert_eq!(ids[a], ids[b]);
        }
        // every left congruence containing the pairs is coarser
        for other in limcolim::division::left_congruences_enumerate(&m).unwrap() {
            if pairs.iter().all(|&(a, b)| other[a] == other[b]) {
                for x in 0..m.len() {
                    for y in 0..m.len() {
                        prop_assert!(ids[x] != ids[y] || other[x] == other[y]);
                    }
                }
            }
        }
    }

    #[test]
    fn division_closed_submonoids_are_not_mixed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, 5);
        for mask in 0u32..(1 << m.len()) {
            let n_set: Vec<usize> = (0..m.len()).filter(|&i| mask & (1 << i) != 0).collect();
            if !is_right_division_closed_submonoid(&m, &n_set) {
                continue;
            }
            // relate (as, at) for all a and s, t in N
            let mut pairs = Vec::new();
            for a in 0..m.len() {
                for &s in &n_set {
                    for &t in &n_set {
                        pairs.push((m.mul(a, s), m.mul(a, t)));
                    }
                }
            }
            let ids = left_congruence_closure(&m, &pairs);
            for &x in &n_set {
                for y in (0..m.len()).filter(|y| !n_set.contains(y)) {
                    prop_assert_ne!(ids[x], ids[y]);
                }
            }
        }
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = random_category(&mut rng, Limits::default());
        let cj = CategoryJson::from_category(&cat);
        let back: CategoryJson = json::parse(&json::emit(&cj)).unwrap();
        prop_assert_eq!(CategoryJson::from_category(&back.build().unwrap()), cj.clone());
        associative(&back.build().unwrap())?;

        let cat = Arc::new(cat);
        let x = random_eset(&mut rng, &cat, Limits::default());
        let xj = ESetJson::from_eset(&x);
        let back: ESetJson = json::parse(&json::emit(&xj)).unwrap();
        prop_assert_eq!(ESetJson::from_eset(&back.build().unwrap()), xj);

        let r = random_relation(&mut rng, &x, 3);
        let rj = RelationJson::from_relation(&x, &r);
        let back: RelationJson = json::parse(&json::emit(&rj)).unwrap();
        prop_assert_eq!(RelationJson::from_relation(&x, &back.build(&x).unwrap()), rj);

        let m = random_monoid(&mut rng, 5);
        let mj = MonoidJson::from_monoid(&m);
        let back: MonoidJson = json::parse(&json::emit(&mj)).unwrap();
        prop_assert_eq!(back.build().unwrap().table(), m.table());

        let j = random_poset(&mut rng, 6);
        let pj = PosetJson::from_poset(&j);
        let back: PosetJson = json::parse(&json::emit(&pj)).unwrap();
        prop_assert_eq!(PosetJson::from_poset(&back.build().unwrap()), pj);

        let index = random_directed_poset(&mut rng, 4);
        let s = random_directed_system(&mut rng, &x, index);
        let sj = SystemJson::from_system(&s);
        let back: SystemJson = json::parse(&json::emit(&sj)).unwrap();
        prop_assert_eq!(SystemJson::from_system(&back.build().unwrap()), sj);
    }
}

fn associative(c: &FiniteCategory) -> Result<(), TestCaseError> {
    let n = c.morphism_count();
    for a in 0..n {
        for b in 0..n {
            if !c.composable(a, b) {
                continue;
            }
            for d in 0..n {
                if c.composable(b, d) {
                    prop_assert_eq!(c.compose(c.compose(a, b), d), c.compose(a, c.compose(b, d)));
                }
            }
        }
    }
    Ok(())
}
