use std::path::PathBuf;

/// Errors raised by the optimiser, its operators and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("gene {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("unknown algorithm `{0}` (expected gas3 or gas3km)")]
    UnknownAlgorithm(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("recombination needs at least one male parent")]
    NoMales,

    #[error("species formation needs at least one female")]
    NoFemales,

    #[error("evaluation budget exhausted ({consumed} of {limit})")]
    BudgetExhausted { consumed: u64, limit: u64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
