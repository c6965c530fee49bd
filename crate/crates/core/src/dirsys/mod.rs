//! Directed systems of E-sets, their colimits, and the comparison map from
//! the colimit of limits to the limit of the colimit.

mod finite;
mod lazy;
mod verdict;

pub use finite::{ColimitData, FiniteDirectedSystem, IotaReport};
pub use lazy::{
    colimit_at_horizon, colimit_equal, eventual_fixedness_certificate, iota_at_horizon, push_forward,
    stabilization_stage,
    Certificates, ColimitElement, LazyColimit, LazyIotaReport, LazySystem, LimitPoint, Stabilization,
    Stage, StageCache, StagedSystem, Window, WindowArrow,
};
pub use verdict::{Verdict, Witness};
