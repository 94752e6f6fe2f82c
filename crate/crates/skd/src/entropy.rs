//! Entropy primitives in bits, with the 0·log 0 = 0 convention.
//!
//! Probabilities below [`ZERO_EPS`] are treated as exact zeros inside log
//! terms so degenerate distributions evaluate without producing NaN.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probabilities at or below this threshold are treated as exact zeros
/// inside logarithms.
pub const ZERO_EPS: f64 = 1e-12;

/// Tolerance on |sum − 1| for a vector to count as a probability
/// distribution.
pub const PROB_SUM_TOL: f64 = 1e-9;

fn check_probability(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "{name} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Binary entropy H_b(p) = −p·log2(p) − (1−p)·log2(1−p), in bits.
///
/// H_b(0) = H_b(1) = 0 by the 0·log 0 = 0 convention.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability(p, "p")?;
    Ok(plog2p(p) + plog2p(1.0 - p))
}

/// −p·log2(p) with 0·log 0 = 0.
fn plog2p(p: f64) -> f64 {
    if p <= ZERO_EPS {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy of a distribution given as a raw slice, in bits.
///
/// The slice must be entrywise non-negative and sum to 1 within
/// [`PROB_SUM_TOL`].
pub fn entropy(dist: &[f64]) -> Result<f64> {
    validate_distribution(dist)?;
    Ok(entropy_unchecked(dist))
}

pub(crate) fn entropy_unchecked(dist: &[f64]) -> f64 {
    dist.iter().map(|&p| plog2p(p)).sum()
}

pub(crate) fn validate_distribution(dist: &[f64]) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::NotStochastic("empty vector".into()));
    }
    if let Some(&bad) = dist.iter().find(|&&p| !p.is_finite() || p < 0.0) {
        return Err(Error::NotStochastic(format!("entry {bad} is negative or non-finite")));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::NotStochastic(format!(
            "entries sum to {sum}, expected 1 within {PROB_SUM_TOL:e}"
        )));
    }
    Ok(())
}

/// A validated probability distribution: non-negative entries summing to 1
/// within [`PROB_SUM_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        validate_distribution(&entries)?;
        Ok(Self(entries))
    }

    /// Uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        Self(vec![1.0 / n as f64; n])
    }

    /// One-hot distribution with all mass on `index`.
    pub fn one_hot(n: usize, index: usize) -> Self {
        assert!(index < n);
        let mut v = vec![0.0; n];
        v[index] = 1.0;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_unchecked(&self.0)
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(v: ProbVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
