//! Discrete memoryless channels as row-stochastic matrices, plus structural
//! classification into the standard channel families.
//!
//! A [`ChannelMatrix`] maps true labels (rows) to predicted labels (columns);
//! a normalized confusion matrix is exactly such a channel.

use serde::{Serialize, Serializer};

use crate::entropy::{validate_distribution, ProbVector};
use crate::error::{Error, Result};

/// Tolerance under which file input rows must sum to 1 unless renormalizing.
pub const PARSE_SUM_TOL: f64 = 1e-6;

/// Default structural-pattern tolerance for empirical confusion matrices.
/// Synthetic constructions should classify with tolerance 0.
pub const DEFAULT_CLASSIFY_TOL: f64 = 0.02;

/// Row-stochastic channel transition matrix. Row `i` holds the conditional
/// distribution of the predicted label given true label `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    rows: Vec<ProbVector>,
}

impl ChannelMatrix {
    /// Builds a channel from raw rows, validating shape and stochasticity.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "a channel needs at least 2 inputs, got {}",
                rows.len()
            )));
        }
        let width = rows[0].len();
        if width < 2 {
            return Err(Error::DimensionMismatch(format!(
                "a channel needs at least 2 outputs, got {width}"
            )));
        }
        let mut checked = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {width}",
                    row.len()
                )));
            }
            checked.push(ProbVector::new(row).map_err(|e| match e {
                Error::NotStochastic(msg) => Error::NotStochastic(format!("row {i}: {msg}")),
                other => other,
            })?);
        }
        Ok(Self { rows: checked })
    }

    /// Q-ary symmetric channel: diagonal `p`, off-diagonal `(1−p)/(n−1)`.
    pub fn qary_symmetric(n: usize, p: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "q-ary symmetric channel needs n >= 2, got {n}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p must lie in [0, 1], got {p}")));
        }
        let off = (1.0 - p) / (n - 1) as f64;
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { p } else { off }).collect())
            .collect();
        Self::new(rows)
    }

    /// Binary asymmetric channel `[[p0, 1−p0], [1−p1, p1]]`.
    pub fn bac(p0: f64, p1: f64) -> Result<Self> {
        for (name, p) in [("p0", p0), ("p1", p1)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Self::new(vec![vec![p0, 1.0 - p0], vec![1.0 - p1, p1]])
    }

    /// Z-channel: the null input is never corrupted (`p0 = 1`).
    pub fn z(p1: f64) -> Result<Self> {
        Self::bac(1.0, p1)
    }

    /// Binary symmetric channel (`p0 = p1 = p`).
    pub fn bsc(p: f64) -> Result<Self> {
        Self::bac(p, p)
    }

    pub fn n_inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_square(&self) -> bool {
        self.n_inputs() == self.n_outputs()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.rows[i].as_slice()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].as_slice()[j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    /// Parses a matrix from CSV text: one row per line, comma-separated
    /// decimals. Rows must sum to 1 within [`PARSE_SUM_TOL`] unless
    /// `renormalize` is set; accepted rows are scaled to an exact sum of 1.
    pub fn from_csv_str(text: &str, renormalize: bool) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: '{}' is not a number", lineno + 1, tok.trim()))
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Self::from_rows_lenient(rows, renormalize)
    }

    /// Parses a matrix from a JSON array of arrays, with the same
    /// stochasticity policy as [`Self::from_csv_str`].
    pub fn from_json_str(text: &str, renormalize: bool) -> Result<Self> {
        let rows: Vec<Vec<f64>> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix json: {e}")))?;
        Self::from_rows_lenient(rows, renormalize)
    }

    fn from_rows_lenient(rows: Vec<Vec<f64>>, renormalize: bool) -> Result<Self> {
        let mut normalized = Vec::with_capacity(rows.len());
        for (i, mut row) in rows.into_iter().enumerate() {
            if let Some(&bad) = row.iter().find(|&&x| !x.is_finite() || x < 0.0) {
                return Err(Error::NotStochastic(format!(
                    "row {i}: entry {bad} is negative or non-finite"
                )));
            }
            let sum: f64 = row.iter().sum();
            if !renormalize && (sum - 1.0).abs() > PARSE_SUM_TOL {
                return Err(Error::NotStochastic(format!(
                    "row {i} sums to {sum}; rerun with --renormalize to accept"
                )));
            }
            if sum <= 0.0 {
                return Err(Error::NotStochastic(format!("row {i} sums to {sum}")));
            }
            if sum != 1.0 {
                row.iter_mut().for_each(|x| *x /= sum);
            }
            normalized.push(row);
        }
        Self::new(normalized)
    }

    /// One row per line, comma-separated, full float precision.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Classifies this channel as the most specific matching family under
    /// L∞ deviation `tol`.
    ///
    /// Precedence: Z > BSC > BAC > q-ary symmetric > strongly symmetric >
    /// weakly symmetric > general. Non-square matrices are always general.
    pub fn classify(&self, tol: f64) -> ChannelKind {
        assert!(tol >= 0.0, "classification tolerance must be non-negative");
        if !self.is_square() {
            return ChannelKind::General;
        }
        if self.n_inputs() == 2 {
            let (p0, p1) = (self.get(0, 0), self.get(1, 1));
            if (p0 - 1.0).abs() <= tol {
                return ChannelKind::ZChannel { p1 };
            }
            if (p0 - p1).abs() <= tol {
                return ChannelKind::Bsc { p: 0.5 * (p0 + p1) };
            }
            return ChannelKind::Bac { p0, p1 };
        }
        if let Some(p) = self.qary_parameter(tol) {
            return ChannelKind::QarySymmetric { n: self.n_inputs(), p };
        }
        if self.rows_are_permutations(tol) {
            if self.columns_are_permutations(tol) {
                return ChannelKind::StrongSymmetric;
            }
            if self.column_sums_equal(tol) {
                return ChannelKind::WeaklySymmetric;
            }
        }
        ChannelKind::General
    }

    /// Extracted diagonal probability if the matrix matches the q-ary
    /// symmetric pattern within `tol`; `None` otherwise.
    ///
    /// Uses the mean of the diagonal as the estimate (taking the common
    /// value directly when the diagonal is constant, so that exactly
    /// patterned matrices round-trip bit-for-bit).
    pub(crate) fn qary_parameter(&self, tol: f64) -> Option<f64> {
        let n = self.n_inputs();
        let first = self.get(0, 0);
        let p = if (0..n).all(|i| self.get(i, i) == first) {
            first
        } else {
            (0..n).map(|i| self.get(i, i)).sum::<f64>() / n as f64
        };
        if !(0.0..=1.0).contains(&p) {
            return None;
        }
        let off = (1.0 - p) / (n - 1) as f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { p } else { off };
                if (self.get(i, j) - want).abs() > tol {
                    return None;
                }
            }
        }
        Some(p)
    }

    pub(crate) fn rows_are_permutations(&self, tol: f64) -> bool {
        let mut base: Vec<f64> = self.row(0).to_vec();
        base.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (1..self.n_inputs()).all(|i| {
            let mut r: Vec<f64> = self.row(i).to_vec();
            r.sort_by(|a, b| a.partial_cmp(b).unwrap());
            r.iter().zip(&base).all(|(a, b)| (a - b).abs() <= tol)
        })
    }

    fn columns_are_permutations(&self, tol: f64) -> bool {
        let col = |j: usize| -> Vec<f64> {
            let mut c: Vec<f64> = (0..self.n_inputs()).map(|i| self.get(i, j)).collect();
            c.sort_by(|a, b| a.partial_cmp(b).unwrap());
            c
        };
        let base = col(0);
        (1..self.n_outputs()).all(|j| col(j).iter().zip(&base).all(|(a, b)| (a - b).abs() <= tol))
    }

    fn column_sums_equal(&self, tol: f64) -> bool {
        let sums: Vec<f64> = (0..self.n_outputs())
            .map(|j| (0..self.n_inputs()).map(|i| self.get(i, j)).sum())
            .collect();
        let mean = sums.iter().sum::<f64>() / sums.len() as f64;
        sums.iter().all(|s| (s - mean).abs() <= tol)
    }

    /// Mean Shannon entropy of the rows, in bits. For a (weakly) symmetric
    /// channel all rows have the same entropy and this is exactly it.
    pub(crate) fn mean_row_entropy(&self) -> f64 {
        self.rows.iter().map(|r| r.entropy()).sum::<f64>() / self.n_inputs() as f64
    }
}

impl Serialize for ChannelMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows.iter().map(|r| r.as_slice()))
    }
}

/// Structural channel family with the parameters that reconstruct it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ChannelKind {
    ZChannel { p1: f64 },
    Bsc { p: f64 },
    Bac { p0: f64, p1: f64 },
    QarySymmetric { n: usize, p: f64 },
    StrongSymmetric,
    WeaklySymmetric,
    General,
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChannelKind::ZChannel { p1 } => write!(f, "Z-channel (p1 = {p1:.6})"),
            ChannelKind::Bsc { p } => write!(f, "binary symmetric channel (p = {p:.6})"),
            ChannelKind::Bac { p0, p1 } => {
                write!(f, "binary asymmetric channel (p0 = {p0:.6}, p1 = {p1:.6})")
            }
            ChannelKind::QarySymmetric { n, p } => {
                write!(f, "{n}-ary symmetric channel (p = {p:.6})")
            }
            ChannelKind::StrongSymmetric => write!(f, "strongly symmetric channel"),
            ChannelKind::WeaklySymmetric => write!(f, "weakly symmetric channel"),
            ChannelKind::General => write!(f, "general channel"),
        }
    }
}

/// Re-checks that `dist` is a valid distribution; used by callers that build
/// rows incrementally.
pub fn validate_row(dist: &[f64]) -> Result<()> {
    validate_distribution(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rows_close(got: &ChannelMatrix, want: &[&[f64]], tol: f64) {
        for (i, row) in want.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                assert!(
                    (got.get(i, j) - cell).abs() <= tol,
                    "entry ({i}, {j}): got {}, want {cell}",
                    got.get(i, j)
                );
            }
        }
    }

    #[test]
    fn qary_two_is_bsc_matrix() {
        let m = ChannelMatrix::qary_symmetric(2, 0.9).unwrap();
        rows_close(&m, &[&[0.9, 0.1], &[0.1, 0.9]], 1e-15);
    }

    #[test]
    fn qary_noiseless_is_identity() {
        let m = ChannelMatrix::qary_symmetric(4, 1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn qary_off_diagonal_value() {
        let m = ChannelMatrix::qary_symmetric(4, 0.86).unwrap();
        assert_eq!(m.get(0, 0), 0.86);
        assert!((m.get(0, 1) - 0.14 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn qary_rejects_small_alphabet() {
        assert!(ChannelMatrix::qary_symmetric(1, 0.9).is_err());
    }

    #[test]
    fn z_channel_matrix() {
        let m = ChannelMatrix::z(0.94).unwrap();
        assert_eq!(m.row(0), &[1.0, 0.0]);
        rows_close(&m, &[&[1.0, 0.0], &[0.06, 0.94]], 1e-15);
    }

    #[test]
    fn bsc_half_is_flat() {
        let m = ChannelMatrix::bsc(0.5).unwrap();
        assert!(m.rows().all(|r| r == [0.5, 0.5]));
    }

    #[test]
    fn bac_matrix_layout() {
        let m = ChannelMatrix::bac(0.94, 0.89).unwrap();
        rows_close(&m, &[&[0.94, 0.06], &[0.11, 0.89]], 1e-15);
    }

    #[test]
    fn classify_identity_3x3_is_qary() {
        let m = ChannelMatrix::qary_symmetric(3, 1.0).unwrap();
        assert_eq!(m.classify(0.0), ChannelKind::QarySymmetric { n: 3, p: 1.0 });
    }

    #[test]
    fn classify_z_channel() {
        let m = ChannelMatrix::new(vec![vec![1.0, 0.0], vec![0.06, 0.94]]).unwrap();
        assert_eq!(m.classify(0.0), ChannelKind::ZChannel { p1: 0.94 });
    }

    #[test]
    fn classify_bac() {
        let m = ChannelMatrix::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        assert_eq!(m.classify(0.001), ChannelKind::Bac { p0: 0.9, p1: 0.8 });
    }

    #[test]
    fn classify_identity_2x2_prefers_z() {
        let m = ChannelMatrix::qary_symmetric(2, 1.0).unwrap();
        assert_eq!(m.classify(0.0), ChannelKind::ZChannel { p1: 1.0 });
    }

    #[test]
    fn classify_strong_symmetric_circulant() {
        let m = ChannelMatrix::new(vec![
            vec![0.5, 0.3, 0.2],
            vec![0.2, 0.5, 0.3],
            vec![0.3, 0.2, 0.5],
        ])
        .unwrap();
        assert_eq!(m.classify(0.0), ChannelKind::StrongSymmetric);
    }

    #[test]
    fn classify_weakly_but_not_strongly_symmetric() {
        // Rows are permutations of (0.5, 0.3, 0.2, 0), all column sums are 1,
        // but column 0 = (0.5, 0.5, 0, 0) is not a permutation of a row.
        let m = ChannelMatrix::new(vec![
            vec![0.5, 0.3, 0.2, 0.0],
            vec![0.5, 0.3, 0.0, 0.2],
            vec![0.0, 0.2, 0.5, 0.3],
            vec![0.0, 0.2, 0.3, 0.5],
        ])
        .unwrap();
        assert_eq!(m.classify(0.0), ChannelKind::WeaklySymmetric);
    }

    #[test]
    fn classify_general_non_square() {
        let m = ChannelMatrix::new(vec![
            vec![0.5, 0.25, 0.25],
            vec![0.25, 0.5, 0.25],
        ])
        .unwrap();
        assert_eq!(m.classify(0.1), ChannelKind::General);
    }

    #[test]
    fn csv_round_trip() {
        let m = ChannelMatrix::bac(0.94, 0.89).unwrap();
        let parsed = ChannelMatrix::from_csv_str(&m.to_csv_string(), false).unwrap();
        assert_eq!(m, parsed);
    }

    #[test]
    fn csv_rejects_non_stochastic_without_renormalize() {
        let text = "0.9,0.2\n0.1,0.9\n";
        assert!(ChannelMatrix::from_csv_str(text, false).is_err());
        let m = ChannelMatrix::from_csv_str(text, true).unwrap();
        let sum: f64 = m.row(0).iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_parse() {
        let m = ChannelMatrix::from_json_str("[[1.0, 0.0], [0.06, 0.94]]", false).unwrap();
        rows_close(&m, &[&[1.0, 0.0], &[0.06, 0.94]], 1e-15);
        assert_eq!(m.classify(0.0), ChannelKind::ZChannel { p1: 0.94 });
    }

    proptest! {
        #[test]
        fn constructors_are_row_stochastic(n in 2usize..7, p in 0.0f64..=1.0) {
            let m = ChannelMatrix::qary_symmetric(n, p).unwrap();
            for row in m.rows() {
                let sum: f64 = row.iter().sum();
                prop_assert!((sum - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn bac_constructor_row_stochastic(p0 in 0.0f64..=1.0, p1 in 0.0f64..=1.0) {
            let m = ChannelMatrix::bac(p0, p1).unwrap();
            for row in m.rows() {
                let sum: f64 = row.iter().sum();
                prop_assert!((sum - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn classify_round_trips_bac(p0 in 0.0f64..0.999, p1 in 0.0f64..=1.0) {
            // p0 < 1 keeps the matrix out of the Z pattern; unequal
            // diagonals keep it out of the BSC pattern.
            prop_assume!((p0 - p1).abs() > 1e-9);
            let m = ChannelMatrix::bac(p0, p1).unwrap();
            prop_assert_eq!(m.classify(0.0), ChannelKind::Bac { p0, p1 });
        }

        #[test]
        fn classify_round_trips_z(p1 in 0.0f64..=1.0) {
            let m = ChannelMatrix::z(p1).unwrap();
            prop_assert_eq!(m.classify(0.0), ChannelKind::ZChannel { p1 });
        }

        #[test]
        fn classify_round_trips_qary(n in 3usize..7, p in 0.0f64..=1.0) {
            let m = ChannelMatrix::qary_symmetric(n, p).unwrap();
            prop_assert_eq!(m.classify(0.0), ChannelKind::QarySymmetric { n, p });
        }

        #[test]
        fn classify_round_trips_bsc(p in 0.0f64..0.999) {
            let m = ChannelMatrix::bsc(p).unwrap();
            prop_assert_eq!(m.classify(0.0), ChannelKind::Bsc { p });
        }
    }
}
