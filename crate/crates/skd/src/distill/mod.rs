//! Desk-scale subclass knowledge distillation: temperature softmax, the
//! teacher/student losses, subclass-to-class aggregation, exact-gradient
//! toy networks, and the multi-arm experiment driver.
//!
//! Losses are in nats (natural log) because they face the optimizer; all
//! information-theoretic reporting elsewhere in the crate stays in bits.

mod metrics;
mod net;
mod train;

pub use metrics::{evaluate, Metrics};
pub use net::{gradient_check, GradCheckSample, ToyNet};
pub use train::{
    distill_student, run_experiment, train_teacher, AggregateStats, ArmStats, ExperimentReport,
    GapStats, RunRecord,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labelbits::ClassHierarchy;

/// Probability floor inside logarithms of the loss functions.
pub const LOG_FLOOR: f64 = 1e-12;

/// Hyperparameters for teacher/student training and the experiment driver.
///
/// Defaults follow the tuned operating point of the subclass tasks:
/// temperature 5 and task balance 0.45.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistillConfig {
    /// Softmax temperature τ for the distillation term.
    pub temperature: f64,
    /// Task balance λ: weight of the supervised cross-entropy term; 1 − λ
    /// goes to the distillation term.
    pub task_balance: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Hidden layer widths of the student network.
    pub hidden_sizes: Vec<usize>,
    /// Hidden layer widths of the teacher network.
    pub teacher_hidden_sizes: Vec<usize>,
    pub seed: u64,
    /// Number of independently seeded runs in an experiment.
    pub runs: usize,
    /// Scale the KL term by τ² so its gradient magnitude stays comparable
    /// across temperatures. Setting this to false uses the raw KL.
    pub scale_kl_by_temperature_sq: bool,
    /// Average losses over a batch instead of summing them.
    pub mean_reduction: bool,
    /// Allow a teacher smaller than the student (normally rejected, since
    /// distillation compresses a larger model into a smaller one).
    pub allow_small_teacher: bool,
}

impl Default for DistillConfig {
    fn default() -> Self {
        Self {
            temperature: 5.0,
            task_balance: 0.45,
            epochs: 300,
            learning_rate: 0.05,
            batch_size: 16,
            hidden_sizes: vec![6],
            teacher_hidden_sizes: vec![32],
            seed: 0,
            runs: 20,
            scale_kl_by_temperature_sq: true,
            mean_reduction: true,
            allow_small_teacher: false,
        }
    }
}

fn require_positive(value: f64, name: &str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {value}")))
    }
}

impl DistillConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive(self.temperature, "temperature")?;
        if !(0.0..=1.0).contains(&self.task_balance) {
            return Err(Error::InvalidArgument(format!(
                "task_balance must lie in [0, 1], got {}",
                self.task_balance
            )));
        }
        require_positive(self.learning_rate, "learning_rate")?;
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch_size must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidArgument("runs must be at least 1".into()));
        }
        if !self.allow_small_teacher {
            let teacher: usize = self.teacher_hidden_sizes.iter().sum();
            let student: usize = self.hidden_sizes.iter().sum();
            if teacher < student || self.teacher_hidden_sizes.len() < self.hidden_sizes.len() {
                return Err(Error::InvalidArgument(format!(
                    "teacher ({:?}) is smaller than the student ({:?}); set allow_small_teacher to override",
                    self.teacher_hidden_sizes, self.hidden_sizes
                )));
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config json: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Softmax of `logits / temperature`, computed with max-subtraction.
pub fn softmax_with_temperature(logits: &[f64], temperature: f64) -> Result<Vec<f64>> {
    require_positive(temperature, "temperature")?;
    if logits.is_empty() {
        return Err(Error::InvalidArgument("empty logits".into()));
    }
    Ok(softmax_unchecked(logits, temperature))
}

pub(crate) fn softmax_unchecked(logits: &[f64], temperature: f64) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits
        .iter()
        .map(|&z| ((z - max) / temperature).exp())
        .collect();
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= sum);
    out
}

/// Cross-entropy −Σ target_i ln(probs_i) against a one-hot target, in nats.
/// Probabilities are floored at [`LOG_FLOOR`] inside the log.
pub fn cross_entropy(probs: &[f64], target: &[f64]) -> Result<f64> {
    if probs.len() != target.len() {
        return Err(Error::DimensionMismatch(format!(
            "probs has {} entries, target has {}",
            probs.len(),
            target.len()
        )));
    }
    let ones = target.iter().filter(|&&t| t == 1.0).count();
    if ones != 1 || target.iter().any(|&t| t != 0.0 && t != 1.0) {
        return Err(Error::InvalidArgument("target is not a one-hot vector".into()));
    }
    let idx = target.iter().position(|&t| t == 1.0).unwrap();
    Ok(-probs[idx].max(LOG_FLOOR).ln())
}

pub(crate) fn cross_entropy_index(probs: &[f64], target: usize) -> f64 {
    -probs[target].max(LOG_FLOOR).ln()
}

/// Distillation loss: KL(σ(teacher/τ) ‖ σ(student/τ)), scaled by τ², in nats.
///
/// Zero exactly when the tempered distributions coincide. The τ² factor
/// keeps the gradient magnitude comparable across temperatures; see
/// [`DistillConfig::scale_kl_by_temperature_sq`] for the unscaled variant
/// used in training when that flag is off.
pub fn skd_loss(teacher_logits: &[f64], student_logits: &[f64], temperature: f64) -> Result<f64> {
    skd_loss_scaled(teacher_logits, student_logits, temperature, true)
}

pub(crate) fn skd_loss_scaled(
    teacher_logits: &[f64],
    student_logits: &[f64],
    temperature: f64,
    scale_by_temperature_sq: bool,
) -> Result<f64> {
    if teacher_logits.len() != student_logits.len() {
        return Err(Error::DimensionMismatch(format!(
            "teacher emits {} logits, student {}",
            teacher_logits.len(),
            student_logits.len()
        )));
    }
    require_positive(temperature, "temperature")?;
    let p = softmax_unchecked(teacher_logits, temperature);
    let q = softmax_unchecked(student_logits, temperature);
    let kl = kl_divergence(&p, &q);
    let scale = if scale_by_temperature_sq { temperature * temperature } else { 1.0 };
    Ok(scale * kl)
}

/// KL(p ‖ q) in nats with the [`LOG_FLOOR`] convention, clamped at 0.
pub(crate) fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    let kl: f64 = p
        .iter()
        .zip(q)
        .map(|(&pi, &qi)| {
            if pi <= LOG_FLOOR {
                0.0
            } else {
                pi * (pi / qi.max(LOG_FLOOR)).ln()
            }
        })
        .sum();
    kl.max(0.0)
}

/// Student objective λ·ce + (1−λ)·skd. λ = 1 is plain supervised training,
/// λ = 0 pure distillation.
pub fn student_objective(ce: f64, skd: f64, task_balance: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&task_balance) {
        return Err(Error::InvalidArgument(format!(
            "task_balance must lie in [0, 1], got {task_balance}"
        )));
    }
    Ok(task_balance * ce + (1.0 - task_balance) * skd)
}

/// Sums subclass probabilities within each class, in hierarchy order.
pub fn aggregate_to_class(subclass_probs: &[f64], hierarchy: &ClassHierarchy) -> Result<Vec<f64>> {
    if subclass_probs.len() != hierarchy.n_subclasses() {
        return Err(Error::DimensionMismatch(format!(
            "{} subclass probabilities for a hierarchy with {} subclasses",
            subclass_probs.len(),
            hierarchy.n_subclasses()
        )));
    }
    let owner = hierarchy.subclass_to_class();
    let mut out = vec![0.0; hierarchy.n_classes()];
    for (p, &class) in subclass_probs.iter().zip(&owner) {
        out[class] += p;
    }
    Ok(out)
}
