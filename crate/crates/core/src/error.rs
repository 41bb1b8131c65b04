use thiserror::Error;

/// Errors raised by dataset construction, metrics, and the estimator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spike time {value} at position {index} is not finite")]
    NonFiniteSpike { index: usize, value: f64 },

    #[error("spike times decrease at position {index} ({prev} > {next})")]
    UnsortedSpikes { index: usize, prev: f64, next: f64 },

    #[error("window width must be positive and finite, got {0}")]
    InvalidWindow(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid design: n_s = {n_s}, n_c = {n_c} (need n_s >= 2, n_c >= 1, n >= 2)")]
    InvalidDesign { n_s: usize, n_c: usize },

    #[error("trial {trial}: label {label} outside 1..={n_s}")]
    LabelOutOfRange {
        trial: usize,
        label: usize,
        n_s: usize,
    },

    #[error("unbalanced design: label {label} occurs {count} times, expected {expected}")]
    Unbalanced {
        label: usize,
        count: usize,
        expected: usize,
    },

    #[error("expected {expected} trials, got {got}")]
    TrialCount { expected: usize, got: usize },

    #[error("spike at {time} s lies outside the analysis window [0, {window})")]
    SpikeOutsideWindow { time: f64, window: f64 },

    #[error("distance between trials {i} and {j}: {source}")]
    MetricPair {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("h = {h} out of range 1..={n}")]
    HOutOfRange { h: usize, n: usize },

    #[error("h grid is empty")]
    EmptyGrid,

    #[error("dataset collection is empty")]
    EmptyCollection,

    #[error("label vector has length {got}, distance matrix has {expected} rows")]
    LabelsLength { expected: usize, got: usize },

    #[error("hypergeometric draws {m} exceed population {population}")]
    HypergeometricDomain { m: u64, population: u64 },

    #[error("malformed input{}: {message}", trial.map(|t| format!(" (trial {t})")).unwrap_or_default())]
    Malformed {
        trial: Option<usize>,
        message: String,
    },
}

impl Error {
    /// True for errors caused by unreadable or syntactically broken input,
    /// as opposed to well-formed input that violates a design invariant.
    pub fn is_malformed(&self) -> bool {
        match self {
            Error::Malformed { .. } | Error::NonFiniteSpike { .. } => true,
            Error::MetricPair { source, .. } => source.is_malformed(),
            _ => false,
        }
    }

    pub(crate) fn malformed(trial: Option<usize>, message: impl Into<String>) -> Self {
        Error::Malformed {
            trial,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
