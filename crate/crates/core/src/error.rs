use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join_violations(.0))]
    InvalidParameters(Vec<Violation>),

    /// `(m-1)p + (N-m)q = 0` while `v > 0`: no transmission rate can match the prevalence.
    #[error("degenerate model: no within- or between-community edges can carry infection")]
    DegenerateModel,

    #[error("calibrated alpha = {0} exceeds 1; prevalence is too high for this network")]
    AlphaOutOfRange(f64),

    #[error("exact distribution needs divisible sizes: {0}")]
    Divisibility(String),

    #[error("group-size range is empty")]
    EmptyRange,

    #[error("group-size range {start}..={end} is outside 1..={population}")]
    RangeOutOfBounds {
        start: usize,
        end: usize,
        population: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("at least one replicate is required")]
    NoReplicates,

    #[error("input contains no edges")]
    EmptyInput,

    #[error("degenerate partition: {0}")]
    DegeneratePartition(&'static str),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
