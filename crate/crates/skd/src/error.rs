//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside its mathematical domain (probability out of
    /// [0,1], alphabet too small, non-positive temperature, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A vector that must be a probability distribution is not one.
    #[error("not a probability distribution: {0}")]
    NotStochastic(String),

    /// Shapes of two related objects disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The binary channel is useless (rows identical, p0 + p1 = 1); the
    /// quantity requested diverges or is undefined there.
    #[error("degenerate channel: p0 + p1 = 1 (rows identical, capacity 0)")]
    DegenerateChannel,

    /// A confusion matrix does not follow any supported channel pattern
    /// within the requested tolerance.
    #[error("channel pattern mismatch: {0}")]
    PatternMismatch(String),

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (bound gap {gap:.3e})")]
    NoConvergence { iterations: usize, gap: f64 },

    /// A text payload (CSV matrix, JSON config, ...) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
