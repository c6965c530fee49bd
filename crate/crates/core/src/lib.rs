//! Limits, directed colimits and the comparison map between them for
//! set-valued functors on finite and lazily presented categories.

pub mod bitset;
pub mod dirsys;
pub mod division;
pub mod congruence;
pub mod enumerate;
pub mod error;
pub mod eset;
pub mod gallery;
pub mod json;
pub mod poset_analysis;
pub mod random;
pub mod structures;
pub mod union_find;
pub mod words;

pub use error::{Error, Result};
