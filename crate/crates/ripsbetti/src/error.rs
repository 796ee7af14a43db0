//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A pair of points fell inside the ambiguity band around the distance
    /// threshold. Edge classification would not be numerically trustworthy,
    /// so the build aborts rather than guessing.
    #[error("ambiguous distance: pair ({u},{v}) has dist {dist} within the ambiguity band of threshold {threshold}")]
    AmbiguousDistance { u: u32, v: u32, dist: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("face enumeration budget exceeded: more than {budget} faces")]
    BudgetExceeded { budget: usize },

    #[error("face {0:?} is not present in the complex")]
    FaceNotPresent(Vec<u32>),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("optional-edge policy violation: {0}")]
    PolicyViolation(String),

    #[error("dimension {p} out of range for complex with dim cap {dim_cap}")]
    DimensionOutOfRange { p: usize, dim_cap: usize },

    #[error("invalid cycle basis: {0}")]
    InvalidBasis(String),

    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),

    #[error("not a two-clique graph: intra-part pair ({0},{1}) is missing")]
    NotTwoClique(u32, u32),

    #[error("margin violation on pair ({u},{v}): {detail}")]
    MarginViolation { u: u32, v: u32, detail: String },

    #[error("edge set mismatch: {missing} missing, {extra} extra; first few: missing {missing_sample:?}, extra {extra_sample:?}")]
    EdgeSetMismatch {
        missing: usize,
        extra: usize,
        missing_sample: Vec<(u32, u32)>,
        extra_sample: Vec<(u32, u32)>,
    },

    #[error("set contains a 3-term arithmetic progression ({0}, {1}, {2})")]
    NotAp3Free(u64, u64, u64),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("cluster too loose: {0}")]
    ClusterTooLoose(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AmbiguousDistance { .. } => "AmbiguousDistance",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::FaceNotPresent(_) => "FaceNotPresent",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::PolicyViolation(_) => "PolicyViolation",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::InvalidBasis(_) => "InvalidBasis",
            Error::NotASubcomplex(_) => "NotASubcomplex",
            Error::NotTwoClique(_, _) => "NotTwoClique",
            Error::MarginViolation { .. } => "MarginViolation",
            Error::EdgeSetMismatch { .. } => "EdgeSetMismatch",
            Error::NotAp3Free(_, _, _) => "NotAp3Free",
            Error::CapExceeded(_) => "CapExceeded",
            Error::PreconditionUnmet(_) => "PreconditionUnmet",
            Error::ClusterTooLoose(_) => "ClusterTooLoose",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }

    /// CLI exit code for this error: 2 for input problems, 3 for budget or
    /// margin failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. }
            | Error::MarginViolation { .. }
            | Error::EdgeSetMismatch { .. }
            | Error::CapExceeded(_) => 3,
            _ => 2,
        }
    }
}
