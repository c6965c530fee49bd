use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::eset::{limit_tuples, Arrow, ESet, ESetMorphism};
use crate::structures::{FiniteCategory, ObjId};

use super::verdict::{Verdict, Witness};

/// The finite part of the (possibly infinite) indexing category that the
/// stages are materialized on: some objects and generating arrows between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub objects: Vec<String>,
    pub arrows: Vec<WindowArrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowArrow {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// A point of the limit of one stage, with its coordinates on the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitPoint {
    pub label: String,
    pub coords: Vec<u32>,
}

/// One stage of a lazy system restricted to the window.
#[derive(Clone, Debug)]
pub struct Stage {
    /// Carrier size per window object.
    pub sizes: Vec<usize>,
    /// Action per window arrow.
    pub actions: Vec<Vec<u32>>,
    /// Connecting map into the next stage, per window object.
    pub step: Vec<Vec<u32>>,
    /// The limit of this stage over the whole indexing category.
    pub limit: Vec<LimitPoint>,
    /// Image of each limit point in the next stage's limit. Needed because
    /// distinct limit points may agree on the window.
    pub limit_step: Vec<usize>,
}

/// Structural facts a system knows about itself, used to turn horizon
/// observations into final verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificates {
    /// Reason ι is injective for this system, if known.
    pub injective: Option<String>,
    /// Reason ι is surjective for this system, if known.
    pub surjective: Option<String>,
    /// From this stage on, the maps between stage limits are injective, so
    /// distinct limit classes observed there stay distinct.
    pub limit_steps_injective_from: Option<usize>,
    /// Every stage has an empty limit.
    pub limits_empty: bool,
}

/// A directed system indexed by ℕ, produced on demand.
pub trait LazySystem: Send + Sync {
    fn name(&self) -> String;
    fn window(&self) -> &Window;
    fn stage(&self, n: usize) -> Arc<Stage>;
    fn element_label(&self, n: usize, obj: ObjId, x: u32) -> String;
    /// Action of an element of the acting monoid, named by `probe`, on an
    /// element of stage `n`.
    fn act(&self, n: usize, probe: &str, obj: ObjId, x: u32) -> Result<u32>;
    fn certificates(&self) -> Certificates;
}

/// Stage cache shared by the system implementations; safe for concurrent
/// queries.
#[derive(Debug, Default)]
pub struct StageCache {
    stages: Mutex<HashMap<usize, Arc<Stage>>>,
}

impl StageCache {
    pub fn get_or_build<F: FnOnce() -> Stage>(&self, n: usize, build: F) -> Arc<Stage> {
        if let Some(s) = self.stages.lock().unwrap().get(&n) {
            return s.clone();
        }
        let s = Arc::new(build());
        self.stages.lock().unwrap().entry(n).or_insert(s).clone()
    }
}

type StageBuilder = dyn Fn(usize) -> (ESet, Vec<Vec<u32>>) + Send + Sync;

/// A lazy system over a finite category whose stages are E-sets produced by
/// a builder. Each stage comes with the components of its step into the
/// next one; naturality is checked when the stage is first built.
pub struct StagedSystem {
    name: String,
    cat: Arc<FiniteCategory>,
    window: Window,
    build: Box<StageBuilder>,
    stable_from: Option<usize>,
    cache: StageCache,
    esets: Mutex<HashMap<usize, ESet>>,
}

impl std::fmt::Debug for StagedSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StagedSystem").field("name", &self.name).finish()
    }
}

impl StagedSystem {
    pub fn new<F>(name: &str, cat: Arc<FiniteCategory>, build: F) -> Self
    where
        F: Fn(usize) -> (ESet, Vec<Vec<u32>>) + Send + Sync + 'static,
    {
        let window = Window {
            objects: cat.objects().to_vec(),
            arrows: cat
                .generators()
                .iter()
                .map(|&g| {
                    let m = cat.morphism(g);
                    WindowArrow { name: m.name.clone(), dom: m.dom, cod: m.cod }
                })
                .collect(),
        };
        StagedSystem {
            name: name.to_string(),
            cat,
            window,
            build: Box::new(build),
            stable_from: None,
            cache: StageCache::default(),
            esets: Mutex::new(HashMap::new()),
        }
    }

    /// Stages `stages[0..]` joined by `steps[n]: stages[n] → stages[n+1]`;
    /// from the last stage on the system is constant with identity steps.
    pub fn eventually_constant(name: &str, stages: Vec<ESet>, steps: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        if stages.is_empty() || steps.len() + 1 != stages.len() {
            return Err(Error::InvalidSystem("need k stages and k - 1 steps".into()));
        }
        let cat = stages[0].category().clone();
        for (n, comps) in steps.iter().enumerate() {
            ESetMorphism::new(&stages[n], &stages[n + 1], comps.clone())
                .map_err(|e| Error::InvalidSystem(format!("step {n}: {e}")))?;
        }
        let last = stages.len() - 1;
        let mut sys = StagedSystem::new(name, cat, move |n| {
            let k = n.min(last);
            let step = if n < last {
                steps[n].clone()
            } else {
                ESetMorphism::identity(&stages[last]).components().to_vec()
            };
            (stages[k].clone(), step)
        });
        sys.stable_from = Some(last);
        Ok(sys)
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.cat
    }

    pub fn eset(&self, n: usize) -> ESet {
        if let Some(x) = self.esets.lock().unwrap().get(&n) {
            return x.clone();
        }
        let (x, _) = (self.build)(n);
        self.esets.lock().unwrap().insert(n, x.clone());
        x
    }
}

impl LazySystem for StagedSystem {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn stage(&self, n: usize) -> Arc<Stage> {
        self.cache.get_or_build(n, || {
            let (x, step) = (self.build)(n);
            let next = self.eset(n + 1);
            ESetMorphism::new(&x, &next, step.clone()).expect("builder produced a natural step");
            let limit: Vec<LimitPoint> = x
                .limit()
                .into_iter()
                .map(|p| {
                    let parts: Vec<String> = p
                        .coords
                        .iter()
                        .enumerate()
                        .map(|(o, &v)| x.label(o, v).into_owned())
                        .collect();
                    LimitPoint { label: format!("({})", parts.join(",")), coords: p.coords }
                })
                .collect();
            let next_limit = next.limit();
            let limit_step = limit
                .iter()
                .map(|p: &LimitPoint| {
                    let img: Vec<u32> = p.coords.iter().enumerate().map(|(o, &v)| step[o][v as usize]).collect();
                    next_limit.iter().position(|q| q.coords == img).expect("natural maps preserve limits")
                })
                .collect();
            let sizes = (0..self.cat.object_count()).map(|o| x.size(o)).collect();
            let actions = self.cat.generators().iter().map(|&g| x.action(g).to_vec()).collect();
            Stage { sizes, actions, step, limit, limit_step }
        })
    }

    fn element_label(&self, n: usize, obj: ObjId, x: u32) -> String {
        self.eset(n).label(obj, x).into_owned()
    }

    fn act(&self, n: usize, probe: &str, obj: ObjId, x: u32) -> Result<u32> {
        let f = self.cat.morphism_id(probe).map_err(|_| Error::BadProbe {
            probe: probe.to_string(),
            reason: "not a morphism of the category".into(),
        })?;
        let m = self.cat.morphism(f);
        if m.dom != obj || m.cod != obj {
            return Err(Error::BadProbe {
                probe: probe.to_string(),
                reason: "not an endomorphism of the object".into(),
            });
        }
        Ok(self.eset(n).act(f, x))
    }

    fn certificates(&self) -> Certificates {
        Certificates {
            injective: Some("finite category".into()),
            surjective: Some("finite category".into()),
            limit_steps_injective_from: self.stable_from,
            limits_empty: false,
        }
    }
}

/// An element of a colimit, represented at a stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColimitElement {
    pub stage: usize,
    pub obj: ObjId,
    pub x: u32,
}

/// The colimit seen through stages `0..=horizon`. On an ℕ-chain the
/// classes are the fibres over stage `horizon`.
#[derive(Clone, Debug)]
pub struct LazyColimit {
    pub horizon: usize,
    /// Per window object, the least `(stage, element)` in each class;
    /// class `c` is element `c` of stage `horizon`.
    pub representatives: Vec<Vec<ColimitElement>>,
}

/// Image of `x` from stage `n` at stage `m ≥ n`.
pub fn push_forward(sys: &dyn LazySystem, n: usize, obj: ObjId, x: u32, m: usize) -> u32 {
    let mut y = x;
    for k in n..m {
        y = sys.stage(k).step[obj][y as usize];
    }
    y
}

pub fn colimit_at_horizon(sys: &dyn LazySystem, h: usize) -> LazyColimit {
    let objs = sys.window().objects.len();
    let top = sys.stage(h);
    let mut representatives: Vec<Vec<Option<ColimitElement>>> =
        (0..objs).map(|o| vec![None; top.sizes[o]]).collect();
    for o in 0..objs {
        // images of every element of stage n at stage h, pushed one step at a time
        let mut images: Vec<Vec<u32>> = Vec::with_capacity(h + 1);
        for n in 0..=h {
            let st = sys.stage(n);
            images.push((0..st.sizes[o] as u32).collect());
        }
        for n in (0..h).rev() {
            let st = sys.stage(n);
            let next = images[n + 1].clone();
            images[n] = st.step[o].iter().map(|&y| next[y as usize]).collect();
        }
        for (n, imgs) in images.iter().enumerate() {
            for (x, &c) in imgs.iter().enumerate() {
                let slot = &mut representatives[o][c as usize];
                if slot.is_none() {
                    *slot = Some(ColimitElement { stage: n, obj: o, x: x as u32 });
                }
            }
        }
    }
    LazyColimit {
        horizon: h,
        representatives: representatives
            .into_iter()
            .map(|v| v.into_iter().map(|e| e.expect("stage h elements represent themselves")).collect())
            .collect(),
    }
}

/// Decides equality of two colimit representatives within the horizon:
/// `Proven` at the least stage where their images meet, else `Unknown`.
pub fn colimit_equal(sys: &dyn LazySystem, a: ColimitElement, b: ColimitElement, h: usize) -> Verdict {
    if a.obj != b.obj {
        return Verdict::Unknown { horizon: h };
    }
    let start = a.stage.max(b.stage);
    for k in start..=h {
        if push_forward(sys, a.stage, a.obj, a.x, k) == push_forward(sys, b.stage, b.obj, b.x, k) {
            return Verdict::Proven { stage: k };
        }
    }
    Verdict::Unknown { horizon: h }
}

/// The comparison map observed at a horizon.
#[derive(Clone, Debug)]
pub struct LazyIotaReport {
    pub horizon: usize,
    /// Limit classes at the horizon: least stage and label of a representative.
    pub domain: Vec<(usize, String)>,
    /// Limit of the stage at the horizon over the window.
    pub codomain: Vec<Vec<u32>>,
    pub codomain_labels: Vec<String>,
    pub map: Vec<usize>,
    pub injective: Verdict,
    pub surjective: Verdict,
}

pub fn iota_at_horizon(sys: &dyn LazySystem, h: usize) -> LazyIotaReport {
    let window = sys.window();
    let objs = window.objects.len();
    let top = sys.stage(h);
    let certs = sys.certificates();

    // limit of the colimit, approximated by the stage at the horizon
    let arrows: Vec<Arrow<'_>> = window
        .arrows
        .iter()
        .zip(&top.actions)
        .map(|(a, map)| Arrow { dom: a.dom, cod: a.cod, map })
        .collect();
    let codomain = limit_tuples(&top.sizes, &arrows);
    let codomain_labels: Vec<String> = codomain
        .iter()
        .map(|c| {
            let parts: Vec<String> = (0..objs).map(|o| sys.element_label(h, o, c[o])).collect();
            format!("({})", parts.join(","))
        })
        .collect();

    // colimit of limits: classes are the limit points of the horizon stage;
    // earlier points are pushed forward to find the least representative
    let mut domain: Vec<Option<(usize, String)>> = vec![None; top.limit.len()];
    for n in 0..=h {
        let st = sys.stage(n);
        for (i, p) in st.limit.iter().enumerate() {
            let mut d = i;
            for k in n..h {
                d = sys.stage(k).limit_step[d];
            }
            if domain[d].is_none() {
                domain[d] = Some((n, p.label.clone()));
            }
        }
    }
    let domain: Vec<(usize, String)> = domain.into_iter().map(Option::unwrap).collect();
    let map: Vec<usize> = top
        .limit
        .iter()
        .map(|p| codomain.binary_search(&p.coords).expect("limit points are compatible on the window"))
        .collect();

    let mut injective = Verdict::Unknown { horizon: h };
    let mut seen: Vec<Option<usize>> = vec![None; codomain.len()];
    let mut collision = None;
    for (d, &c) in map.iter().enumerate() {
        match seen[c] {
            Some(e) if collision.is_none() => collision = Some((e, d, c)),
            Some(_) => {}
            None => seen[c] = Some(d),
        }
    }
    let final_inequality = certs.limit_steps_injective_from.is_some_and(|s| s <= h);
    if let Some((e, d, c)) = collision {
        if final_inequality {
            injective = Verdict::RefutedWithinHorizon {
                horizon: h,
                witness: Witness::new(
                    "collision",
                    vec![domain[e].1.clone(), domain[d].1.clone(), codomain_labels[c].clone()],
                ),
            };
        }
    } else if certs.injective.is_some() || certs.limits_empty {
        injective = Verdict::Proven { stage: 0 };
    }

    let unhit = seen.iter().position(Option::is_none);
    let surjective = if certs.surjective.is_some() && unhit.is_none() {
        Verdict::Proven { stage: h }
    } else if let (Some(c), true) = (unhit, certs.limits_empty) {
        Verdict::RefutedWithinHorizon {
            horizon: h,
            witness: Witness::new("not_hit", vec![codomain_labels[c].clone()]),
        }
    } else {
        Verdict::Unknown { horizon: h }
    };

    LazyIotaReport { horizon: h, domain, codomain, codomain_labels, map, injective, surjective }
}

/// Least stage `k` in `rep.stage..=h` at which `probe` fixes the image of
/// `rep`, per probe; `Unknown` when none exists within the horizon.
pub fn eventual_fixedness_certificate(
    sys: &dyn LazySystem,
    rep: ColimitElement,
    probes: &[String],
    h: usize,
) -> Result<Vec<(String, Verdict)>> {
    let mut out = Vec::with_capacity(probes.len());
    for g in probes {
        let mut verdict = Verdict::Unknown { horizon: h };
        let mut y = rep.x;
        for k in rep.stage..=h {
            if k > rep.stage {
                y = sys.stage(k - 1).step[rep.obj][y as usize];
            }
            if sys.act(k, g, rep.obj, y)? == y {
                verdict = Verdict::Proven { stage: k };
                break;
            }
        }
        out.push((g.clone(), verdict));
    }
    Ok(out)
}

/// Result of the stabilization-stage search.
#[derive(Clone, Debug)]
pub struct Stabilization {
    pub verdict: Verdict,
    pub per_generator: Vec<(String, Verdict)>,
    /// The image of the representative at the certified stage.
    pub element: Option<(usize, String)>,
}

/// For a representative known to be fixed in the colimit, finds the common
/// stage at which every generator fixes its image, and verifies the image
/// there. Only for one-object windows.
pub fn stabilization_stage(
    sys: &dyn LazySystem,
    gens: &[String],
    rep: ColimitElement,
    h: usize,
) -> Result<Stabilization> {
    if sys.window().objects.len() != 1 {
        return Err(Error::InvalidSystem("stabilization needs a one-object system".into()));
    }
    let per_generator = eventual_fixedness_certificate(sys, rep, gens, h)?;
    let mut k = rep.stage;
    for (_, v) in &per_generator {
        match v {
            Verdict::Proven { stage } => k = k.max(*stage),
            _ => {
                return Ok(Stabilization { verdict: Verdict::Unknown { horizon: h }, per_generator, element: None });
            }
        }
    }
    let y = push_forward(sys, rep.stage, rep.obj, rep.x, k);
    for g in gens {
        if sys.act(k, g, rep.obj, y)? != y {
            return Err(Error::InvalidSystem(format!("`{g}` moves the image at stage {k}")));
        }
    }
    Ok(Stabilization {
        verdict: Verdict::Proven { stage: k },
        per_generator,
        element: Some((k, sys.element_label(k, rep.obj, y))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eset::Carrier;
    use crate::structures::{monoid_to_category, FiniteMonoid};

    fn c2_collapse() -> StagedSystem {
        let m = FiniteMonoid::from_fn(vec!["1".into(), "g".into()], 0, |a, b| a ^ b).unwrap();
        let cat = Arc::new(monoid_to_category(&m));
        let ab = ESet::new(cat.clone(), vec![Carrier::labeled(vec!["a".into(), "b".into()])], vec![vec![0, 1], vec![1, 0]])
            .unwrap();
        let c = ESet::new(cat, vec![Carrier::labeled(vec!["c".into()])], vec![vec![0], vec![0]]).unwrap();
        StagedSystem::eventually_constant(
            "c2",
            vec![ab.clone(), ab.clone(), ab, c],
            vec![vec![vec![0, 1]], vec![vec![0, 1]], vec![vec![0, 0]]],
        )
        .unwrap()
    }

    #[test]
    fn c2_stabilizes_at_three() {
        let s = c2_collapse();
        let rep = ColimitElement { stage: 0, obj: 0, x: 0 };
        let st = stabilization_stage(&s, &["g".to_string()], rep, 10).unwrap();
        assert_eq!(st.verdict, Verdict::Proven { stage: 3 });
        assert_eq!(st.element, Some((3, "c".to_string())));
        let early = stabilization_stage(&s, &["g".to_string()], rep, 2).unwrap();
        assert!(early.verdict.is_unknown());
        let id = eventual_fixedness_certificate(&s, rep, &["1".to_string()], 5).unwrap();
        assert_eq!(id[0].1, Verdict::Proven { stage: 0 });
    }

    #[test]
    fn c2_iota_bijective_after_collapse() {
        let s = c2_collapse();
        let r = iota_at_horizon(&s, 5);
        assert!(r.injective.is_proven());
        assert!(r.surjective.is_proven());
        assert_eq!(r.domain, vec![(3, "(c)".to_string())]);
        let col = colimit_at_horizon(&s, 5);
        assert_eq!(col.representatives[0], vec![ColimitElement { stage: 0, obj: 0, x: 0 }]);
        let a = ColimitElement { stage: 0, obj: 0, x: 0 };
        let b = ColimitElement { stage: 1, obj: 0, x: 1 };
        assert_eq!(colimit_equal(&s, a, b, 5), Verdict::Proven { stage: 3 });
        assert!(colimit_equal(&s, a, b, 2).is_unknown());
    }

    #[test]
    fn bad_probe() {
        let s = c2_collapse();
        assert!(matches!(s.act(0, "h", 0, 0), Err(Error::BadProbe { .. })));
    }
}
