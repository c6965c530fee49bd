//! Lazy counterexample systems over infinite indexing categories.

use std::sync::Arc;

use crate::dirsys::{Certificates, LazySystem, LimitPoint, Stage, StageCache, Window, WindowArrow};
use crate::error::{Error, Result};
use crate::structures::ObjId;

/// The Prüfer 2-group `Z(2^∞)` acting on `G / H_n` with `H_n = ⟨2^-n⟩`,
/// sampled on the cosets of `⟨2^-h⟩`: element `k` of stage `n` stands for
/// `k/2^h + H_n`, so stage `n` has `2^(h - min(n, h))` elements.
#[derive(Debug)]
pub struct Dyadic {
    h: u32,
    window: Window,
    cache: StageCache,
}

pub fn dyadic_group_system(h: usize) -> Result<Dyadic> {
    if !(1..=30).contains(&h) {
        return Err(Error::InvalidSystem(format!("dyadic horizon {h} outside 1..=30")));
    }
    Ok(Dyadic {
        h: h as u32,
        window: Window {
            objects: vec!["*".into()],
            arrows: vec![WindowArrow { name: format!("1/{}", 1u64 << h), dom: 0, cod: 0 }],
        },
        cache: StageCache::default(),
    })
}

/// Parses `a/b` with `b` a power of two, or an integer, as `(a, m)` meaning
/// `a/2^m` reduced.
pub fn parse_dyadic(probe: &str) -> Option<(u64, u32)> {
    let (a, m) = match probe.split_once('/') {
        None => (probe.trim().parse::<u64>().ok()?, 0),
        Some((a, b)) => {
            let a = a.trim().parse::<u64>().ok()?;
            let b = b.trim();
            let m = if let Some(e) = b.strip_prefix("2^") {
                e.parse::<u32>().ok()?
            } else {
                let b = b.parse::<u64>().ok()?;
                if b == 0 || !b.is_power_of_two() {
                    return None;
                }
                b.trailing_zeros()
            };
            (a, m)
        }
    };
    if m > 62 {
        return None;
    }
    let mut a = a % (1u64 << m);
    let mut m = m;
    while m > 0 && a % 2 == 0 {
        a /= 2;
        m -= 1;
    }
    Some((if m == 0 { 0 } else { a }, m))
}

impl Dyadic {
    pub fn horizon(&self) -> usize {
        self.h as usize
    }

    fn size(&self, n: usize) -> u64 {
        1u64 << (self.h - (n as u32).min(self.h))
    }
}

impl LazySystem for Dyadic {
    fn name(&self) -> String {
        format!("dyadic(h={})", self.h)
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn stage(&self, n: usize) -> Arc<Stage> {
        self.cache.get_or_build(n, || {
            let size = self.size(n);
            let next = self.size(n + 1);
            Stage {
                sizes: vec![size as usize],
                actions: vec![(0..size).map(|k| ((k + 1) % size) as u32).collect()],
                step: vec![(0..size).map(|k| (k % next) as u32).collect()],
                // G acts transitively on every G/H_n, which is infinite
                limit: Vec::new(),
                limit_step: Vec::new(),
            }
        })
    }

    fn element_label(&self, _n: usize, _obj: ObjId, x: u32) -> String {
        let (mut a, mut m) = (x as u64, self.h);
        if a == 0 {
            return "0".into();
        }
        while a % 2 == 0 {
            a /= 2;
            m -= 1;
        }
        format!("{a}/{}", 1u64 << m)
    }

    fn act(&self, n: usize, probe: &str, _obj: ObjId, x: u32) -> Result<u32> {
        let bad = |reason: String| Error::BadProbe { probe: probe.to_string(), reason };
        let (a, m) = parse_dyadic(probe).ok_or_else(|| bad("expected a dyadic rational a/2^m".into()))?;
        if m > self.h {
            return Err(bad(format!("denominator 2^{m} exceeds the sampled 2^{}", self.h)));
        }
        let size = self.size(n);
        let shift = (a << (self.h - m)) % size;
        Ok(((x as u64 + shift) % size) as u32)
    }

    fn certificates(&self) -> Certificates {
        Certificates {
            injective: Some("every stage has an empty limit".into()),
            surjective: None,
            limit_steps_injective_from: Some(0),
            limits_empty: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinjVariant {
    PlusMinus,
    Empty,
}

impl std::str::FromStr for PinjVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plusminus" => Ok(PinjVariant::PlusMinus),
            "empty" => Ok(PinjVariant::Empty),
            _ => Err(Error::Parse(format!("variant `{s}`: expected plusminus or empty"))),
        }
    }
}

/// Over the chain `… ≤ -2 ≤ -1 ≤ 0`, stage `n` puts `{-1, +1}` (or `∅`) on
/// the objects `-m` with `m ≥ n` and a singleton `{0}` elsewhere. Arrows
/// inside the `{±1}` part are identities, all others land in `0`. The
/// window holds the objects `0, -1, …, -(h-1)`.
#[derive(Debug)]
pub struct PinjE {
    variant: PinjVariant,
    window: Window,
    cache: StageCache,
}

pub fn pinje_system(variant: PinjVariant, h: usize) -> Result<PinjE> {
    if !(1..=64).contains(&h) {
        return Err(Error::InvalidSystem(format!("depth {h} outside 1..=64")));
    }
    let objects = (0..h).map(|m| if m == 0 { "0".to_string() } else { format!("-{m}") }).collect::<Vec<_>>();
    let arrows = (0..h.saturating_sub(1))
        .map(|m| WindowArrow { name: format!("{}->{}", objects[m + 1], objects[m]), dom: m + 1, cod: m })
        .collect();
    Ok(PinjE { variant, window: Window { objects, arrows }, cache: StageCache::default() })
}

impl PinjE {
    pub fn variant(&self) -> PinjVariant {
        self.variant
    }

    fn wide(&self) -> usize {
        match self.variant {
            PinjVariant::PlusMinus => 2,
            PinjVariant::Empty => 0,
        }
    }

    fn size(&self, n: usize, m: usize) -> usize {
        if m >= n {
            self.wide()
        } else {
            1
        }
    }
}

impl LazySystem for PinjE {
    fn name(&self) -> String {
        let v = match self.variant {
            PinjVariant::PlusMinus => "plusminus",
            PinjVariant::Empty => "empty",
        };
        format!("pinje({v}, h={})", self.window.objects.len())
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn stage(&self, n: usize) -> Arc<Stage> {
        self.cache.get_or_build(n, || {
            let objs = self.window.objects.len();
            let sizes: Vec<usize> = (0..objs).map(|m| self.size(n, m)).collect();
            let actions = self
                .window
                .arrows
                .iter()
                .map(|a| {
                    if a.cod >= n {
                        (0..sizes[a.dom] as u32).collect()
                    } else {
                        vec![0; sizes[a.dom]]
                    }
                })
                .collect();
            let step = (0..objs)
                .map(|m| if m > n { (0..sizes[m] as u32).collect() } else { vec![0; sizes[m]] })
                .collect();
            let (limit, limit_step) = match self.variant {
                PinjVariant::PlusMinus => {
                    let point = |label: &str, v: u32| LimitPoint {
                        label: label.into(),
                        coords: (0..objs).map(|m| if m >= n { v } else { 0 }).collect(),
                    };
                    (vec![point("x-", 0), point("x+", 1)], vec![0, 1])
                }
                PinjVariant::Empty => (Vec::new(), Vec::new()),
            };
            Stage { sizes, actions, step, limit, limit_step }
        })
    }

    fn element_label(&self, n: usize, obj: ObjId, x: u32) -> String {
        if obj < n {
            "0".into()
        } else if x == 0 {
            "-1".into()
        } else {
            "+1".into()
        }
    }

    fn act(&self, _n: usize, probe: &str, _obj: ObjId, _x: u32) -> Result<u32> {
        Err(Error::BadProbe { probe: probe.to_string(), reason: "the chain category has no endomorphisms besides identities".into() })
    }

    fn certificates(&self) -> Certificates {
        Certificates {
            injective: None,
            surjective: None,
            limit_steps_injective_from: Some(0),
            limits_empty: self.variant == PinjVariant::Empty,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirsys::{eventual_fixedness_certificate, iota_at_horizon, ColimitElement};

    #[test]
    fn dyadic_probe_parsing() {
        assert_eq!(parse_dyadic("1/4"), Some((1, 2)));
        assert_eq!(parse_dyadic("2/8"), Some((1, 2)));
        assert_eq!(parse_dyadic("3/2^3"), Some((3, 3)));
        assert_eq!(parse_dyadic("1"), Some((0, 0)));
        assert_eq!(parse_dyadic("1/3"), None);
    }

    #[test]
    fn dyadic_quarter_fixed_at_two() {
        let d = dyadic_group_system(5).unwrap();
        let rep = ColimitElement { stage: 0, obj: 0, x: 3 };
        let v = eventual_fixedness_certificate(&d, rep, &["1/4".into(), "0".into()], 5).unwrap();
        assert_eq!(v[0].1.clone(), crate::dirsys::Verdict::Proven { stage: 2 });
        assert_eq!(v[1].1.clone(), crate::dirsys::Verdict::Proven { stage: 0 });
        assert!(d.act(0, "1/64", 0, 0).is_err());
        assert_eq!(d.element_label(0, 0, 12), "3/8");
    }

    #[test]
    fn pinje_collapses() {
        let p = pinje_system(PinjVariant::PlusMinus, 4).unwrap();
        let r = iota_at_horizon(&p, 4);
        assert!(r.injective.is_refuted());
        assert_eq!(r.codomain.len(), 1);
        let e = pinje_system(PinjVariant::Empty, 4).unwrap();
        let r = iota_at_horizon(&e, 4);
        assert!(r.domain.is_empty());
        assert!(r.surjective.is_refuted());
    }
}
