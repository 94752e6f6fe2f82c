//! Deterministic synthetic datasets with controllable subclass structure.
//!
//! Each subclass is an isotropic Gaussian around its center. The generator
//! can neutralize a designated shortcut feature in part of the positive
//! class's test split by resampling that coordinate from the other classes'
//! marginal, which makes "the most discriminative feature disappears at
//! test time" a measurable event: a model that learned only the shortcut
//! degrades, a model that learned subclass-level features does not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labelbits::ClassHierarchy;

/// Stream id for dataset generation within a seed's ChaCha8 space.
const STREAM_DATA: u64 = 0x5d;

/// Train/test membership tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Test => write!(f, "test"),
        }
    }
}

/// One labeled feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    /// Global subclass index in hierarchy order.
    pub subclass: usize,
    /// Class index in hierarchy order.
    pub class: usize,
    pub split: Split,
}

/// Specification of a synthetic dataset.
///
/// Training-sample counts live in the hierarchy (they double as the
/// label-bit weights); `test_counts` go per subclass in the same global
/// order as `subclass_centers`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub hierarchy: ClassHierarchy,
    pub dim: usize,
    /// Per-subclass mean vectors, in global subclass order.
    pub subclass_centers: Vec<Vec<f64>>,
    /// Standard deviation of the isotropic noise around each center.
    pub noise_scale: f64,
    /// Per-subclass test-sample counts, in global subclass order.
    pub test_counts: Vec<u64>,
    /// Class whose test samples are subject to shortcut-feature dropout;
    /// also the positive class for F1 evaluation.
    pub positive_class: String,
    /// Index of the shortcut feature to neutralize, if any.
    pub dropout_feature: Option<usize>,
    /// Fraction of positive-class test samples whose shortcut coordinate is
    /// resampled from the other classes' marginal.
    pub dropout_fraction: f64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let n_sub = self.hierarchy.n_subclasses();
        if self.subclass_centers.len() != n_sub {
            return Err(Error::DimensionMismatch(format!(
                "{} centers for {} subclasses",
                self.subclass_centers.len(),
                n_sub
            )));
        }
        if self.test_counts.len() != n_sub {
            return Err(Error::DimensionMismatch(format!(
                "{} test counts for {} subclasses",
                self.test_counts.len(),
                n_sub
            )));
        }
        if let Some(bad) = self.subclass_centers.iter().find(|c| c.len() != self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "center {bad:?} has {} coordinates, dim is {}",
                bad.len(),
                self.dim
            )));
        }
        if !(self.noise_scale.is_finite() && self.noise_scale >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise_scale must be non-negative, got {}",
                self.noise_scale
            )));
        }
        if !(0.0..=1.0).contains(&self.dropout_fraction) {
            return Err(Error::InvalidArgument(format!(
                "dropout_fraction must lie in [0, 1], got {}",
                self.dropout_fraction
            )));
        }
        if self.hierarchy.class_index(&self.positive_class).is_none() {
            return Err(Error::InvalidArgument(format!(
                "positive_class '{}' is not a class of the hierarchy",
                self.positive_class
            )));
        }
        if let Some(f) = self.dropout_feature {
            if f >= self.dim {
                return Err(Error::InvalidArgument(format!(
                    "dropout_feature {f} out of range for dim {}",
                    self.dim
                )));
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: Self =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("spec json: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// The documented benchmark: a skewed binary detection task in the
    /// shape of the colorectal-polyp problem. The majority class `hp` is a
    /// single Gaussian; the minority positive class `ssa` has two
    /// subclasses that share the shortcut feature 0 but differ in the two
    /// secondary features 1 and 2 (each subclass elevates one of them).
    /// Half of the `ssa` test samples lose the shortcut, so class-label
    /// training (which dilutes the secondary features into their mixture
    /// average) generalizes worse than subclass training, which learns
    /// each secondary feature separately. Training counts keep the 2.18:1
    /// skew of the motivating dataset.
    pub fn benchmark() -> Self {
        let hierarchy = ClassHierarchy::from_parts(&[
            ("hp", &[("hp", 61)]),
            ("ssa", &[("ssa_easy", 14), ("ssa_hard", 14)]),
        ])
        .expect("static hierarchy");
        Self {
            hierarchy,
            dim: 4,
            subclass_centers: vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![2.0, 3.0, 0.0, 0.0],
                vec![2.0, 0.0, 3.0, 0.0],
            ],
            noise_scale: 1.0,
            test_counts: vec![400, 200, 200],
            positive_class: "ssa".into(),
            dropout_feature: Some(0),
            dropout_fraction: 0.5,
        }
    }

    /// The benchmark with the positive subclasses made identical (both at
    /// the mixture mean): no subclass information exists, so subclass
    /// distillation can have no edge over class-level distillation.
    pub fn degenerate_benchmark() -> Self {
        let mut spec = Self::benchmark();
        let shared = vec![2.0, 1.5, 1.5, 0.0];
        spec.subclass_centers[1] = shared.clone();
        spec.subclass_centers[2] = shared;
        spec
    }
}

/// Generated samples with their label vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub dim: usize,
    pub samples: Vec<Sample>,
    pub subclass_ids: Vec<String>,
    pub class_ids: Vec<String>,
    pub subclass_to_class: Vec<usize>,
}

impl SyntheticDataset {
    pub fn n_subclasses(&self) -> usize {
        self.subclass_ids.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_ids.len()
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.split == split)
    }

    /// CSV rows: `feature..., subclass_id, class_id, split`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            for x in &s.features {
                out.push_str(&format!("{x},"));
            }
            out.push_str(&format!(
                "{},{},{}\n",
                self.subclass_ids[s.subclass], self.class_ids[s.class], s.split
            ));
        }
        out
    }
}

/// Box–Muller standard normal source over a ChaCha8 stream.
struct Gaussian {
    spare: Option<f64>,
}

impl Gaussian {
    fn new() -> Self {
        Self { spare: None }
    }

    fn next(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
        let u2: f64 = rng.random();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Samples the dataset described by `spec`, deterministically in `seed`.
///
/// Test samples of the positive class are subject to shortcut dropout: for
/// each positive subclass, `round(dropout_fraction × test_count)` of its
/// test samples get the dropout coordinate replaced by a draw from the
/// remaining classes' marginal on that coordinate (subclass chosen with
/// probability proportional to training count).
pub fn generate(spec: &SyntheticSpec, seed: u64) -> Result<SyntheticDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_DATA);
    let mut gauss = Gaussian::new();

    let hierarchy = &spec.hierarchy;
    let owner = hierarchy.subclass_to_class();
    let subclass_ids: Vec<String> = hierarchy.subclass_ids().iter().map(|s| s.to_string()).collect();
    let class_ids: Vec<String> = hierarchy.class_ids().iter().map(|s| s.to_string()).collect();
    let positive = hierarchy.class_index(&spec.positive_class).expect("validated");
    let train_counts: Vec<u64> = hierarchy
        .classes()
        .iter()
        .flat_map(|c| c.subclasses.iter().map(|s| s.samples))
        .collect();

    // Donor pool for shortcut neutralization: every subclass outside the
    // positive class, weighted by training count.
    let donors: Vec<(usize, u64)> = (0..subclass_ids.len())
        .filter(|&g| owner[g] != positive)
        .map(|g| (g, train_counts[g].max(1)))
        .collect();
    if spec.dropout_feature.is_some() && spec.dropout_fraction > 0.0 && donors.is_empty() {
        return Err(Error::InvalidArgument(
            "dropout needs at least one class besides the positive class".into(),
        ));
    }
    let donor_total: u64 = donors.iter().map(|(_, w)| w).sum();

    let mut samples = Vec::new();
    for (g, center) in spec.subclass_centers.iter().enumerate() {
        let class = owner[g];
        for (split, count) in [(Split::Train, train_counts[g]), (Split::Test, spec.test_counts[g])] {
            let dropped = match (split, spec.dropout_feature) {
                (Split::Test, Some(_)) if class == positive => {
                    (spec.dropout_fraction * count as f64).round() as u64
                }
                _ => 0,
            };
            for k in 0..count {
                let mut features: Vec<f64> = center
                    .iter()
                    .map(|&c| c + spec.noise_scale * gauss.next(&mut rng))
                    .collect();
                if k < dropped {
                    let feat = spec.dropout_feature.expect("dropped > 0 implies a feature");
                    let mut pick = rng.random_range(0..donor_total);
                    let donor = donors
                        .iter()
                        .find(|(_, w)| {
                            if pick < *w {
                                true
                            } else {
                                pick -= w;
                                false
                            }
                        })
                        .expect("weights cover the range")
                        .0;
                    features[feat] = spec.subclass_centers[donor][feat]
                        + spec.noise_scale * gauss.next(&mut rng);
                }
                samples.push(Sample { features, subclass: g, class, split });
            }
        }
    }
    Ok(SyntheticDataset {
        dim: spec.dim,
        samples,
        subclass_ids,
        class_ids,
        subclass_to_class: owner,
    })
}

/// Rescales per-subclass training counts by a per-class factor, rounding to
/// the nearest integer. Errors if any subclass count would reach 0.
pub fn imbalance(spec: &SyntheticSpec, ratios: &[f64]) -> Result<SyntheticSpec> {
    if ratios.len() != spec.hierarchy.n_classes() {
        return Err(Error::DimensionMismatch(format!(
            "{} ratios for {} classes",
            ratios.len(),
            spec.hierarchy.n_classes()
        )));
    }
    if let Some(&bad) = ratios.iter().find(|&&r| !(r.is_finite() && r > 0.0)) {
        return Err(Error::InvalidArgument(format!("ratios must be positive, got {bad}")));
    }
    let classes = spec
        .hierarchy
        .classes()
        .iter()
        .zip(ratios)
        .map(|(class, &ratio)| {
            let subclasses = class
                .subclasses
                .iter()
                .map(|sub| {
                    let scaled = (sub.samples as f64 * ratio).round() as u64;
                    if scaled == 0 {
                        return Err(Error::InvalidArgument(format!(
                            "scaling subclass '{}' by {ratio} yields 0 samples",
                            sub.id
                        )));
                    }
                    Ok(crate::labelbits::Subclass { id: sub.id.clone(), samples: scaled })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(crate::labelbits::HierClass { id: class.id.clone(), subclasses })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = spec.clone();
    out.hierarchy = ClassHierarchy::new(classes)?;
    Ok(out)
}
