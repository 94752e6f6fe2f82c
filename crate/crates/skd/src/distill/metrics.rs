//! Class-level evaluation of a trained network: F1 on a designated positive
//! class plus normalized class and subclass confusion matrices.

use serde::Serialize;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::labelbits::ClassHierarchy;
use crate::synthdata::{Split, SyntheticDataset};

use super::{aggregate_to_class, softmax_unchecked, ToyNet};

/// Classification metrics for one network on one split.
#[derive(Debug, Clone, Serialize)]
pub struct Metrics {
    /// F1 on the designated positive class, with 0/0 treated as 0.
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
    /// Row-normalized class confusion matrix (rows = true class).
    pub class_confusion: ChannelMatrix,
    /// Row-normalized subclass confusion matrix (rows = true subclass).
    pub subclass_confusion: ChannelMatrix,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Row-normalizes a count matrix; rows with no observations get probability
/// 1 on the diagonal (no evidence of error).
fn normalize_counts(counts: Vec<Vec<u64>>) -> Result<ChannelMatrix> {
    let rows = counts
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                let mut r = vec![0.0; row.len()];
                r[i] = 1.0;
                r
            } else {
                row.iter().map(|&c| c as f64 / total as f64).collect()
            }
        })
        .collect();
    ChannelMatrix::new(rows)
}

/// Evaluates `net` on the given split.
///
/// The predicted class is the argmax of the class-aggregated softmax
/// (temperature 1); the predicted subclass is the argmax over subclass
/// probabilities. The network's output width must equal the hierarchy's
/// subclass count; for a class-level network, pass the hierarchy with
/// subclasses collapsed so both levels coincide.
pub fn evaluate(
    net: &ToyNet,
    data: &SyntheticDataset,
    hierarchy: &ClassHierarchy,
    positive_class: &str,
    split: Split,
) -> Result<Metrics> {
    if net.output_dim() != hierarchy.n_subclasses() {
        return Err(Error::DimensionMismatch(format!(
            "network emits {} outputs, hierarchy has {} subclasses",
            net.output_dim(),
            hierarchy.n_subclasses()
        )));
    }
    let positive = hierarchy
        .class_index(positive_class)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown positive class '{positive_class}'")))?;
    let n_classes = hierarchy.n_classes();
    let n_sub = hierarchy.n_subclasses();

    // Class labels of the dataset refer to the generating hierarchy; the
    // evaluation hierarchy may collapse subclasses but must keep classes.
    if data.n_classes() != n_classes {
        return Err(Error::DimensionMismatch(format!(
            "dataset has {} classes, hierarchy {}",
            data.n_classes(),
            n_classes
        )));
    }

    let mut class_counts = vec![vec![0u64; n_classes]; n_classes];
    let mut sub_counts = vec![vec![0u64; n_sub]; n_sub];
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    let mut correct = 0usize;
    let mut total = 0usize;

    for sample in data.split(split) {
        let logits = net.forward(&sample.features);
        let probs = softmax_unchecked(&logits, 1.0);
        let class_probs = aggregate_to_class(&probs, hierarchy)?;
        let pred_class = argmax(&class_probs);
        let pred_sub = argmax(&probs);

        class_counts[sample.class][pred_class] += 1;
        // The dataset's subclass labels only index this matrix when the
        // evaluation hierarchy keeps the full subclass space.
        if n_sub == data.n_subclasses() {
            sub_counts[sample.subclass][pred_sub] += 1;
        } else {
            sub_counts[sample.class][pred_class] += 1;
        }

        total += 1;
        if pred_class == sample.class {
            correct += 1;
        }
        match (sample.class == positive, pred_class == positive) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    if total == 0 {
        return Err(Error::InvalidArgument(format!("no samples in the {split} split")));
    }

    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };

    Ok(Metrics {
        f1,
        precision,
        recall,
        accuracy: ratio(correct, total),
        class_confusion: normalize_counts(class_counts)?,
        subclass_confusion: normalize_counts(sub_counts)?,
    })
}

/// Within-class subclass confusion matrices from `net` on one split:
/// for each class with at least two subclasses, rows are its true
/// subclasses and columns the predicted subclass conditioned on the
/// prediction landing inside the class. Classes with one subclass yield
/// `None`.
pub fn within_class_subclass_confusions(
    net: &ToyNet,
    data: &SyntheticDataset,
    hierarchy: &ClassHierarchy,
    split: Split,
) -> Result<Vec<Option<ChannelMatrix>>> {
    if net.output_dim() != hierarchy.n_subclasses() {
        return Err(Error::DimensionMismatch(format!(
            "network emits {} outputs, hierarchy has {} subclasses",
            net.output_dim(),
            hierarchy.n_subclasses()
        )));
    }
    let class_of = hierarchy.subclass_to_class();
    // Global subclass index -> index within its class.
    let mut local_index = vec![0usize; hierarchy.n_subclasses()];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); hierarchy.n_classes()];
    for (g, &c) in class_of.iter().enumerate() {
        local_index[g] = members[c].len();
        members[c].push(g);
    }

    let mut counts: Vec<Vec<Vec<u64>>> = members
        .iter()
        .map(|m| vec![vec![0u64; m.len()]; m.len()])
        .collect();
    for sample in data.split(split) {
        let logits = net.forward(&sample.features);
        let probs = softmax_unchecked(&logits, 1.0);
        let pred_sub = argmax(&probs);
        if class_of[pred_sub] == sample.class {
            counts[sample.class][local_index[sample.subclass]][local_index[pred_sub]] += 1;
        }
    }
    counts
        .into_iter()
        .map(|c| {
            if c.len() >= 2 {
                normalize_counts(c).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect()
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
