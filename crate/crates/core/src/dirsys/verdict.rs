use serde::Serialize;

/// Evidence attached to a refutation: a short kind tag and the labels of
/// the elements involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: String,
    pub elements: Vec<String>,
}

impl Witness {
    pub fn new(kind: &str, elements: Vec<String>) -> Self {
        Witness { kind: kind.to_string(), elements }
    }
}

/// Three-valued outcome of a horizon-bounded question. `Proven` and
/// `RefutedWithinHorizon` are final: a larger horizon never retracts them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    Proven { stage: usize },
    RefutedWithinHorizon { horizon: usize, witness: Witness },
    Unknown { horizon: usize },
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::RefutedWithinHorizon { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::RefutedWithinHorizon { witness, .. } => Some(witness),
            _ => None,
        }
    }
}
