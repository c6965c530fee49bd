use thiserror::Error;

/// Errors raised while building or querying the structures in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("invalid E-set: {0}")]
    InvalidESet(String),

    #[error("invalid E-set morphism: {0}")]
    InvalidMorphism(String),

    #[error("not a congruence: {0}")]
    NotCongruence(String),

    #[error("invalid directed system: {0}")]
    InvalidSystem(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("empty object set")]
    EmptyObjectSet,

    #[error("size guard: {0}")]
    TooLarge(String),

    #[error("probe `{probe}`: {reason}")]
    BadProbe { probe: String, reason: String },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
