use std::fmt;

use crate::search::ConstantKind;

pub type Result<T> = std::result::Result<T, Error>;

/// Why an exhaustive search gave up before certifying its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// The explored node count passed `SearchBudget::max_nodes`.
    NodeBudget,
    /// A sequence avoiding the predicate reached `SearchBudget::max_length`.
    LengthCap,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconclusiveReason::NodeBudget => f.write_str("node budget exhausted"),
            InconclusiveReason::LengthCap => f.write_str("length cap reached"),
        }
    }
}

/// A failed hypothesis of the subsequence theorem checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum YzHypothesis {
    /// Some nonzero element occurs more often than 0.
    ZeroNotMaximal { zero_multiplicity: usize, max_multiplicity: usize },
    /// The sequence is shorter than `|G| + D(G) - 1`.
    TooShort { length: usize, required: usize },
    /// `D(G)` must be at least 1.
    InvalidDavenport(usize),
}

impl fmt::Display for YzHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YzHypothesis::ZeroNotMaximal { zero_multiplicity, max_multiplicity } => {
                write!(f, "maximal multiplicity {max_multiplicity} is not attained by 0 (v_0 = {zero_multiplicity})")
            }
            YzHypothesis::TooShort { length, required } => {
                write!(f, "length {length} is below |G| + D(G) - 1 = {required}")
            }
            YzHypothesis::InvalidDavenport(d) => write!(f, "D(G) = {d} is not a valid Davenport constant"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element has {found} components but the group has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("residue {residue} out of range for factor of order {order}")]
    ResidueOutOfRange { residue: u64, order: u32 },
    #[error("weight set is empty")]
    EmptyWeightSet,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table of {cells} cells exceeds the budget of {budget}")]
    Capacity { cells: usize, budget: usize },
    #[error("oracle refuses |S| = {len}, |A| = {weights} (bound |S| <= {max_len}, |A| <= {max_weights})")]
    OracleBound { len: usize, weights: usize, max_len: usize, max_weights: usize },
    #[error("{kind} search inconclusive ({reason}) after {nodes} nodes; value >= {lower_bound}")]
    Inconclusive { kind: ConstantKind, reason: InconclusiveReason, lower_bound: usize, nodes: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(YzHypothesis),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(String),
}
