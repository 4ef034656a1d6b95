use thiserror::Error;

use crate::exp_family::Family;

/// Errors raised by the evidence computations and the tests built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("observation {index} does not match family {family}: {reason}")]
    ObservationMismatch {
        index: usize,
        family: Family,
        reason: String,
    },

    #[error("observation {index} contains a non-finite value")]
    NonFinite { index: usize },

    #[error("family mismatch: {left} vs {right}")]
    FamilyMismatch { left: Family, right: Family },

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("both samples are empty")]
    BothEmpty,

    #[error("empty dataset")]
    EmptyData,

    #[error("concentration alpha must be finite and > 0; got {0}")]
    InvalidAlpha(f64),

    #[error("exact enumeration supports 1..={cap} points; got {n}")]
    SizeCap { n: usize, cap: usize },

    #[error("log Bayes factor must be finite; got {0}")]
    NonFiniteBayesFactor(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

pub type Result<T> = std::result::Result<T, Error>;
