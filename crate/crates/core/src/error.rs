use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: argument {value} is outside the supported domain")]
    Domain { function: &'static str, value: f64 },

    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is empty")]
    Empty,

    #[error("entry ({row}, {col}) = {value} is not finite")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("entry ({row}, {col}) = {value} is outside [0, 1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, deviating from {target} by more than {tolerance}")]
    RowSum {
        row: usize,
        sum: f64,
        target: f64,
        tolerance: f64,
    },

    #[error("entry ({row}, {col}) = {value} violates the sign constraint of an intensity matrix")]
    InvalidRate { row: usize, col: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}x{expected}, found {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not J1-embeddable: diagonal entry p[{state}][{state}] is zero")]
    NotJ1Embeddable { state: usize },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("no simulated path from state {state} had at most one jump")]
    NoRetainedPaths { state: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
