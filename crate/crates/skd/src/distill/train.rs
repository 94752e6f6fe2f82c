//! Teacher/student training loops and the multi-arm experiment driver.
//!
//! Training is plain mini-batch gradient descent in double precision,
//! deterministic in the configured seed: network initialization and batch
//! shuffling draw from fixed ChaCha8 streams, and independent runs own
//! disjoint seeds (`base seed + run index`), so serial and parallel
//! execution produce identical results.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::labelbits::{analyze_confusion, skd_information_gain, LabelBitsReport};
use crate::synthdata::{generate, Split, SyntheticDataset, SyntheticSpec};

use super::metrics::{evaluate, within_class_subclass_confusions, Metrics};
use super::net::ToyNet;
use super::{softmax_unchecked, DistillConfig};

/// Stream base shared by the public teacher/student trainers, so that pure
/// supervised distillation (λ = 1) on a matching architecture reproduces
/// plain training bit-for-bit.
const STREAM_TRAIN: u64 = 0x10;
/// Internal stream bases for the baseline and class-distillation arms.
const STREAM_BASELINE: u64 = 0x20;
const STREAM_KD: u64 = 0x30;

/// Which labels supervise the cross-entropy term.
#[derive(Clone, Copy, PartialEq)]
enum LabelSpace {
    Subclass,
    Class,
}

struct TrainPlan<'a> {
    data: &'a SyntheticDataset,
    labels: LabelSpace,
    /// Tempered teacher target distribution per training sample, already in
    /// the student's output space. `None` trains without distillation.
    teacher_targets: Option<Vec<Vec<f64>>>,
    task_balance: f64,
    temperature: f64,
    scale_kl: bool,
    mean_reduction: bool,
    epochs: usize,
    learning_rate: f64,
    batch_size: usize,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn train_loop(mut net: ToyNet, plan: &TrainPlan<'_>, mut shuffle_rng: ChaCha8Rng) -> ToyNet {
    let train: Vec<&crate::synthdata::Sample> = plan.data.split(Split::Train).collect();
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut grads = net.zero_gradients();
    for _ in 0..plan.epochs {
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(plan.batch_size) {
            grads.weights.iter_mut().for_each(|g| g.iter_mut().for_each(|x| *x = 0.0));
            grads.biases.iter_mut().for_each(|g| g.iter_mut().for_each(|x| *x = 0.0));
            for &idx in batch {
                let sample = train[idx];
                let label = match plan.labels {
                    LabelSpace::Subclass => sample.subclass,
                    LabelSpace::Class => sample.class,
                };
                let trace = net.forward_cached(&sample.features);
                let dlogits = match &plan.teacher_targets {
                    None => {
                        // Pure supervised cross-entropy at temperature 1.
                        let probs = softmax_unchecked(trace.logits(), 1.0);
                        probs
                            .iter()
                            .enumerate()
                            .map(|(j, &p)| p - f64::from(j == label))
                            .collect::<Vec<f64>>()
                    }
                    Some(targets) => distill_logit_gradient(
                        trace.logits(),
                        &targets[idx],
                        label,
                        plan.temperature,
                        plan.task_balance,
                        plan.scale_kl,
                    ),
                };
                net.backward(&trace, &dlogits, &mut grads);
            }
            let scale = if plan.mean_reduction { 1.0 / batch.len() as f64 } else { 1.0 };
            net.apply_gradients(&grads, plan.learning_rate, scale);
        }
    }
    net
}

/// Gradient of λ·CE + (1−λ)·KL at the student logits when the tempered
/// teacher target distribution is already materialized.
fn distill_logit_gradient(
    student_logits: &[f64],
    target: &[f64],
    label: usize,
    temperature: f64,
    task_balance: f64,
    scale_kl: bool,
) -> Vec<f64> {
    let mut grad = vec![0.0; student_logits.len()];
    if task_balance > 0.0 {
        let probs = softmax_unchecked(student_logits, 1.0);
        for (j, g) in grad.iter_mut().enumerate() {
            *g += task_balance * (probs[j] - f64::from(j == label));
        }
    }
    if task_balance < 1.0 {
        let q = softmax_unchecked(student_logits, temperature);
        let kappa = if scale_kl { temperature } else { 1.0 / temperature };
        for (j, g) in grad.iter_mut().enumerate() {
            *g += (1.0 - task_balance) * kappa * (q[j] - target[j]);
        }
    }
    grad
}

fn require_train_samples(data: &SyntheticDataset) -> Result<()> {
    if data.split(Split::Train).next().is_none() {
        return Err(Error::InvalidArgument("dataset has no training samples".into()));
    }
    Ok(())
}

/// Log-sum-exp aggregation of subclass logits to class logits, so that
/// `softmax(class_logits(z)) == aggregate_to_class(softmax(z))`.
fn class_logits(subclass_logits: &[f64], hierarchy: &crate::labelbits::ClassHierarchy) -> Vec<f64> {
    let owner = hierarchy.subclass_to_class();
    let max = subclass_logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sums = vec![0.0f64; hierarchy.n_classes()];
    for (&z, &c) in subclass_logits.iter().zip(&owner) {
        sums[c] += (z - max).exp();
    }
    sums.into_iter().map(|s| max + s.ln()).collect()
}

/// Trains the teacher on subclass labels with plain cross-entropy.
/// Deterministic in `cfg.seed`.
pub fn train_teacher(data: &SyntheticDataset, cfg: &DistillConfig) -> Result<ToyNet> {
    cfg.validate()?;
    require_train_samples(data)?;
    let mut init = rng_for(cfg.seed, STREAM_TRAIN);
    let net = ToyNet::new(data.dim, &cfg.teacher_hidden_sizes, data.n_subclasses(), &mut init);
    let plan = TrainPlan {
        data,
        labels: LabelSpace::Subclass,
        teacher_targets: None,
        task_balance: 1.0,
        temperature: cfg.temperature,
        scale_kl: cfg.scale_kl_by_temperature_sq,
        mean_reduction: cfg.mean_reduction,
        epochs: cfg.epochs,
        learning_rate: cfg.learning_rate,
        batch_size: cfg.batch_size,
    };
    Ok(train_loop(net, &plan, rng_for(cfg.seed, STREAM_TRAIN + 1)))
}

/// Trains a student on subclass labels plus the subclass distillation term
/// against a frozen teacher. Deterministic in `cfg.seed`.
pub fn distill_student(teacher: &ToyNet, data: &SyntheticDataset, cfg: &DistillConfig) -> Result<ToyNet> {
    cfg.validate()?;
    require_train_samples(data)?;
    if teacher.output_dim() != data.n_subclasses() {
        return Err(Error::DimensionMismatch(format!(
            "teacher emits {} outputs, dataset has {} subclasses",
            teacher.output_dim(),
            data.n_subclasses()
        )));
    }
    let mut init = rng_for(cfg.seed, STREAM_TRAIN);
    let student = ToyNet::new(data.dim, &cfg.hidden_sizes, data.n_subclasses(), &mut init);
    distill_student_from(student, teacher, data, cfg)
}

/// As [`distill_student`] but starting from an explicit initialization.
pub fn distill_student_from(
    student: ToyNet,
    teacher: &ToyNet,
    data: &SyntheticDataset,
    cfg: &DistillConfig,
) -> Result<ToyNet> {
    cfg.validate()?;
    require_train_samples(data)?;
    let targets: Vec<Vec<f64>> = data
        .split(Split::Train)
        .map(|s| softmax_unchecked(&teacher.forward(&s.features), cfg.temperature))
        .collect();
    let plan = TrainPlan {
        data,
        labels: LabelSpace::Subclass,
        teacher_targets: Some(targets),
        task_balance: cfg.task_balance,
        temperature: cfg.temperature,
        scale_kl: cfg.scale_kl_by_temperature_sq,
        mean_reduction: cfg.mean_reduction,
        epochs: cfg.epochs,
        learning_rate: cfg.learning_rate,
        batch_size: cfg.batch_size,
    };
    Ok(train_loop(student, &plan, rng_for(cfg.seed, STREAM_TRAIN + 1)))
}

/// Scalar slice of [`Metrics`] kept per run in the experiment report.
#[derive(Debug, Clone, Serialize)]
pub struct ArmScalars {
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
}

impl From<&Metrics> for ArmScalars {
    fn from(m: &Metrics) -> Self {
        Self { f1: m.f1, precision: m.precision, recall: m.recall, accuracy: m.accuracy }
    }
}

/// Per-run test metrics of all arms plus the teacher's training F1 (used to
/// pick the confusion matrices feeding the label-bits report).
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub teacher_train_f1: f64,
    pub teacher: ArmScalars,
    pub baseline: ArmScalars,
    pub kd: ArmScalars,
    pub skd: ArmScalars,
}

/// Mean and sample standard deviation of an arm's test F1 over runs.
#[derive(Debug, Clone, Serialize)]
pub struct ArmStats {
    pub mean_f1: f64,
    pub std_f1: f64,
    pub mean_accuracy: f64,
}

/// Difference of two arms' mean F1 with its pooled standard error.
#[derive(Debug, Clone, Serialize)]
pub struct GapStats {
    pub gap: f64,
    pub pooled_se: f64,
    /// Whether the gap exceeds one pooled standard error.
    pub significant: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AggregateStats {
    pub teacher: ArmStats,
    pub baseline: ArmStats,
    pub kd: ArmStats,
    pub skd: ArmStats,
    pub skd_vs_baseline: GapStats,
    pub skd_vs_kd: GapStats,
    pub kd_vs_baseline: GapStats,
}

/// Mean test-split confusion matrices over all runs, per arm.
#[derive(Debug, Clone, Serialize)]
pub struct ConfusionSummary {
    pub teacher_class: ChannelMatrix,
    pub teacher_subclass: ChannelMatrix,
    pub baseline_class: ChannelMatrix,
    pub kd_class: ChannelMatrix,
    pub skd_class: ChannelMatrix,
    pub skd_subclass: ChannelMatrix,
}

/// Full experiment output: per-run metrics, aggregates, mean confusion
/// matrices, and the label-bits analysis of the best teacher's training
/// confusion.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: DistillConfig,
    pub spec: SyntheticSpec,
    pub runs: Vec<RunRecord>,
    pub aggregate: AggregateStats,
    pub confusion: ConfusionSummary,
    /// Run index whose teacher scored the best training F1; its training
    /// confusion matrices feed the label-bits analysis.
    pub best_teacher_run: usize,
    pub label_bits: LabelBitsReport,
    pub label_bits_class_only: LabelBitsReport,
    /// Extra label bits per sample from subclass structure.
    pub label_bits_gain: f64,
}

struct RunOutput {
    record: RunRecord,
    teacher_train: Metrics,
    teacher_train_subclass: Vec<Option<ChannelMatrix>>,
    teacher_test: Metrics,
    baseline_test: Metrics,
    kd_test: Metrics,
    skd_test: Metrics,
}

fn run_once(spec: &SyntheticSpec, cfg: &DistillConfig, run: usize) -> Result<RunOutput> {
    let seed = cfg.seed + run as u64;
    let run_cfg = DistillConfig { seed, ..cfg.clone() };
    let data = generate(spec, seed)?;
    let hierarchy = &spec.hierarchy;
    let class_level = hierarchy.collapse_subclasses();
    let positive = &spec.positive_class;

    let teacher = train_teacher(&data, &run_cfg)?;
    let teacher_train = evaluate(&teacher, &data, hierarchy, positive, Split::Train)?;
    let teacher_train_subclass =
        within_class_subclass_confusions(&teacher, &data, hierarchy, Split::Train)?;
    let teacher_test = evaluate(&teacher, &data, hierarchy, positive, Split::Test)?;

    // Baseline: class labels, no distillation.
    let baseline = {
        let mut init = rng_for(seed, STREAM_BASELINE);
        let net = ToyNet::new(data.dim, &run_cfg.hidden_sizes, hierarchy.n_classes(), &mut init);
        let plan = TrainPlan {
            data: &data,
            labels: LabelSpace::Class,
            teacher_targets: None,
            task_balance: 1.0,
            temperature: run_cfg.temperature,
            scale_kl: run_cfg.scale_kl_by_temperature_sq,
            mean_reduction: run_cfg.mean_reduction,
            epochs: run_cfg.epochs,
            learning_rate: run_cfg.learning_rate,
            batch_size: run_cfg.batch_size,
        };
        train_loop(net, &plan, rng_for(seed, STREAM_BASELINE + 1))
    };
    let baseline_test = evaluate(&baseline, &data, &class_level, positive, Split::Test)?;

    // Conventional KD: class labels plus the class-level distillation term.
    // The teacher's class logits are the log-sum-exp aggregation of its
    // subclass logits (so that softmax(class logits) equals the aggregated
    // subclass probabilities), tempered like any teacher logits.
    let kd = {
        let targets: Vec<Vec<f64>> = data
            .split(Split::Train)
            .map(|s| {
                let logits = class_logits(&teacher.forward(&s.features), hierarchy);
                softmax_unchecked(&logits, run_cfg.temperature)
            })
            .collect();
        let mut init = rng_for(seed, STREAM_KD);
        let net = ToyNet::new(data.dim, &run_cfg.hidden_sizes, hierarchy.n_classes(), &mut init);
        let plan = TrainPlan {
            data: &data,
            labels: LabelSpace::Class,
            teacher_targets: Some(targets),
            task_balance: run_cfg.task_balance,
            temperature: run_cfg.temperature,
            scale_kl: run_cfg.scale_kl_by_temperature_sq,
            mean_reduction: run_cfg.mean_reduction,
            epochs: run_cfg.epochs,
            learning_rate: run_cfg.learning_rate,
            batch_size: run_cfg.batch_size,
        };
        train_loop(net, &plan, rng_for(seed, STREAM_KD + 1))
    };
    let kd_test = evaluate(&kd, &data, &class_level, positive, Split::Test)?;

    // SKD: subclass labels plus the subclass distillation term.
    let skd = distill_student(&teacher, &data, &run_cfg)?;
    let skd_test = evaluate(&skd, &data, hierarchy, positive, Split::Test)?;

    Ok(RunOutput {
        record: RunRecord {
            run,
            seed,
            teacher_train_f1: teacher_train.f1,
            teacher: ArmScalars::from(&teacher_test),
            baseline: ArmScalars::from(&baseline_test),
            kd: ArmScalars::from(&kd_test),
            skd: ArmScalars::from(&skd_test),
        },
        teacher_train,
        teacher_train_subclass,
        teacher_test,
        baseline_test,
        kd_test,
        skd_test,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn arm_stats(f1: &[f64], acc: &[f64]) -> ArmStats {
    let (mean_f1, std_f1) = mean_std(f1);
    let (mean_accuracy, _) = mean_std(acc);
    ArmStats { mean_f1, std_f1, mean_accuracy }
}

fn gap_stats(a: &[f64], b: &[f64]) -> GapStats {
    let (mean_a, std_a) = mean_std(a);
    let (mean_b, std_b) = mean_std(b);
    let n = a.len() as f64;
    let pooled_se = ((std_a * std_a + std_b * std_b) / n).sqrt();
    let gap = mean_a - mean_b;
    GapStats { gap, pooled_se, significant: gap > pooled_se }
}

fn mean_confusion(matrices: &[&ChannelMatrix]) -> Result<ChannelMatrix> {
    let first = matrices[0];
    let (n, m) = (first.n_inputs(), first.n_outputs());
    let mut acc = vec![vec![0.0f64; m]; n];
    for mat in matrices {
        for (i, row) in acc.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell += mat.get(i, j);
            }
        }
    }
    let scale = 1.0 / matrices.len() as f64;
    acc.iter_mut().for_each(|row| row.iter_mut().for_each(|x| *x *= scale));
    ChannelMatrix::new(acc)
}

/// Runs the full four-arm experiment: teacher, baseline student,
/// class-distilled student, subclass-distilled student; `cfg.runs` seeds
/// starting at `cfg.seed`.
///
/// `parallel` only chooses the execution strategy: each run owns its seed,
/// so results are identical either way.
pub fn run_experiment(
    spec: &SyntheticSpec,
    cfg: &DistillConfig,
    parallel: bool,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    spec.validate()?;
    let outputs: Vec<RunOutput> = if parallel {
        (0..cfg.runs)
            .into_par_iter()
            .map(|run| run_once(spec, cfg, run))
            .collect::<Result<_>>()?
    } else {
        (0..cfg.runs).map(|run| run_once(spec, cfg, run)).collect::<Result<_>>()?
    };

    let collect = |f: &dyn Fn(&RunOutput) -> f64| -> Vec<f64> { outputs.iter().map(f).collect() };
    let teacher_f1 = collect(&|o| o.record.teacher.f1);
    let teacher_acc = collect(&|o| o.record.teacher.accuracy);
    let baseline_f1 = collect(&|o| o.record.baseline.f1);
    let baseline_acc = collect(&|o| o.record.baseline.accuracy);
    let kd_f1 = collect(&|o| o.record.kd.f1);
    let kd_acc = collect(&|o| o.record.kd.accuracy);
    let skd_f1 = collect(&|o| o.record.skd.f1);
    let skd_acc = collect(&|o| o.record.skd.accuracy);

    let aggregate = AggregateStats {
        teacher: arm_stats(&teacher_f1, &teacher_acc),
        baseline: arm_stats(&baseline_f1, &baseline_acc),
        kd: arm_stats(&kd_f1, &kd_acc),
        skd: arm_stats(&skd_f1, &skd_acc),
        skd_vs_baseline: gap_stats(&skd_f1, &baseline_f1),
        skd_vs_kd: gap_stats(&skd_f1, &kd_f1),
        kd_vs_baseline: gap_stats(&kd_f1, &baseline_f1),
    };

    let confusion = ConfusionSummary {
        teacher_class: mean_confusion(
            &outputs.iter().map(|o| &o.teacher_test.class_confusion).collect::<Vec<_>>(),
        )?,
        teacher_subclass: mean_confusion(
            &outputs.iter().map(|o| &o.teacher_test.subclass_confusion).collect::<Vec<_>>(),
        )?,
        baseline_class: mean_confusion(
            &outputs.iter().map(|o| &o.baseline_test.class_confusion).collect::<Vec<_>>(),
        )?,
        kd_class: mean_confusion(
            &outputs.iter().map(|o| &o.kd_test.class_confusion).collect::<Vec<_>>(),
        )?,
        skd_class: mean_confusion(
            &outputs.iter().map(|o| &o.skd_test.class_confusion).collect::<Vec<_>>(),
        )?,
        skd_subclass: mean_confusion(
            &outputs.iter().map(|o| &o.skd_test.subclass_confusion).collect::<Vec<_>>(),
        )?,
    };

    // Label-bit analysis on the training confusion of the best teacher,
    // mirroring the protocol of picking the best run by training F1.
    let best_teacher_run = outputs
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.record
                .teacher_train_f1
                .partial_cmp(&b.record.teacher_train_f1)
                .unwrap()
                .then(ib.cmp(ia))
        })
        .map(|(i, _)| i)
        .unwrap();
    let best = &outputs[best_teacher_run];
    let label_bits = analyze_confusion(
        &best.teacher_train.class_confusion,
        &best.teacher_train_subclass,
        &spec.hierarchy,
        crate::channel::DEFAULT_CLASSIFY_TOL,
        true,
    )?;
    let class_only_hierarchy = spec.hierarchy.collapse_subclasses();
    let class_only_slots: Vec<Option<ChannelMatrix>> =
        vec![None; class_only_hierarchy.n_classes()];
    let label_bits_class_only = analyze_confusion(
        &best.teacher_train.class_confusion,
        &class_only_slots,
        &class_only_hierarchy,
        crate::channel::DEFAULT_CLASSIFY_TOL,
        true,
    )?;
    let label_bits_gain = skd_information_gain(&label_bits, &label_bits_class_only);

    Ok(ExperimentReport {
        config: cfg.clone(),
        spec: spec.clone(),
        runs: outputs.iter().map(|o| o.record.clone()).collect(),
        aggregate,
        confusion,
        best_teacher_run,
        label_bits,
        label_bits_class_only,
        label_bits_gain,
    })
}
