//! Label-information-bit bounds: how many bits per training sample a teacher
//! can transfer to a student, computed from the channel capacities of its
//! class- and subclass-level confusion matrices.
//!
//! Three entry points cover the supported settings:
//!
//! * [`label_bits_balanced`] — balanced dataset, every class with the same
//!   number of subclasses and samples; both levels are q-ary symmetric
//!   channels.
//! * [`label_bits_binary_detection`] — binary detection with per-class
//!   subclass structure; the class level is a binary asymmetric channel
//!   (Z-channel when the null class is predicted perfectly) and subclass
//!   terms are weighted by the capacity-achieving input.
//! * [`label_bits_general`] — multiclass with a different number of
//!   subclasses per class; subclass terms are weighted by training-sample
//!   counts.
//!
//! [`analyze_confusion`] drives the same computations from empirical
//! normalized confusion matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::capacity::{self, DEGENERATE_TOL};
use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};

/// L∞ tolerance when checking whether empirical class frequencies match the
/// capacity-achieving input distribution.
pub const BOUND_TIGHT_TOL: f64 = 0.01;

/// One subclass and its training-sample count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subclass {
    pub id: String,
    pub samples: u64,
}

/// One class and its subclasses. A class without meaningful subclasses is
/// represented as a single subclass equal to the class itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierClass {
    pub id: String,
    pub subclasses: Vec<Subclass>,
}

/// Classes, their subclasses, and per-subclass training-sample counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ClassHierarchy {
    classes: Vec<HierClass>,
}

impl ClassHierarchy {
    pub fn new(classes: Vec<HierClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidArgument("hierarchy has no classes".into()));
        }
        let mut class_ids = std::collections::HashSet::new();
        for class in &classes {
            if class.subclasses.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "class '{}' has no subclasses; represent a plain class as one subclass equal to itself",
                    class.id
                )));
            }
            if !class_ids.insert(class.id.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate class id '{}'", class.id)));
            }
        }
        // Subclass ids are globally unique; a subclass may share its own
        // class's id (the "class is its own subclass" representation) but
        // not another class's.
        let mut sub_ids = std::collections::HashSet::new();
        for class in &classes {
            for sub in &class.subclasses {
                if !sub_ids.insert(sub.id.clone()) {
                    return Err(Error::InvalidArgument(format!(
                        "subclass id '{}' is not globally unique",
                        sub.id
                    )));
                }
                if sub.id != class.id && class_ids.contains(&sub.id) {
                    return Err(Error::InvalidArgument(format!(
                        "subclass id '{}' collides with another class's id",
                        sub.id
                    )));
                }
            }
        }
        Ok(Self { classes })
    }

    /// Convenience constructor from `(class id, [(subclass id, samples)])`.
    pub fn from_parts(parts: &[(&str, &[(&str, u64)])]) -> Result<Self> {
        let classes = parts
            .iter()
            .map(|(id, subs)| HierClass {
                id: id.to_string(),
                subclasses: subs
                    .iter()
                    .map(|(sid, n)| Subclass { id: sid.to_string(), samples: *n })
                    .collect(),
            })
            .collect();
        Self::new(classes)
    }

    /// A class carrying no subclass structure: one subclass that is the
    /// class itself.
    pub fn plain_class(id: &str, samples: u64) -> HierClass {
        HierClass {
            id: id.to_string(),
            subclasses: vec![Subclass { id: id.to_string(), samples }],
        }
    }

    pub fn classes(&self) -> &[HierClass] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_subclasses(&self) -> usize {
        self.classes.iter().map(|c| c.subclasses.len()).sum()
    }

    /// Per-class training-sample totals, in class order.
    pub fn class_samples(&self) -> Vec<u64> {
        self.classes
            .iter()
            .map(|c| c.subclasses.iter().map(|s| s.samples).sum())
            .collect()
    }

    pub fn total_samples(&self) -> u64 {
        self.class_samples().iter().sum()
    }

    /// Global subclass index → owning class index, in hierarchy order.
    pub fn subclass_to_class(&self) -> Vec<usize> {
        let mut map = Vec::with_capacity(self.n_subclasses());
        for (ci, class) in self.classes.iter().enumerate() {
            map.extend(std::iter::repeat_n(ci, class.subclasses.len()));
        }
        map
    }

    /// Subclass ids in global order.
    pub fn subclass_ids(&self) -> Vec<&str> {
        self.classes
            .iter()
            .flat_map(|c| c.subclasses.iter().map(|s| s.id.as_str()))
            .collect()
    }

    pub fn class_ids(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.id.as_str()).collect()
    }

    pub fn class_index(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.id == id)
    }

    /// The same classes with all subclass structure collapsed away; sample
    /// counts are preserved per class.
    pub fn collapse_subclasses(&self) -> Self {
        let classes = self
            .classes
            .iter()
            .zip(self.class_samples())
            .map(|(c, n)| Self::plain_class(&c.id, n))
            .collect();
        Self { classes }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: Vec<HierClass> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("hierarchy json: {e}")))?;
        Self::new(raw)
    }
}

impl<'de> Deserialize<'de> for ClassHierarchy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<HierClass>::deserialize(d)?;
        Self::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Per-class correct-prediction probabilities of a teacher: at the class
/// level and, where a class has subclass structure, within the class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeacherAccuracy {
    /// Correct-prediction probability per class, in hierarchy order.
    pub class_accuracy: Vec<f64>,
    /// Within-class subclass correct-prediction probability, `None` for
    /// classes with a single subclass.
    pub subclass_accuracy: Vec<Option<f64>>,
}

impl TeacherAccuracy {
    pub fn new(class_accuracy: Vec<f64>, subclass_accuracy: Vec<Option<f64>>) -> Result<Self> {
        for &p in class_accuracy.iter().chain(subclass_accuracy.iter().flatten()) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "accuracy {p} outside [0, 1]"
                )));
            }
        }
        Ok(Self { class_accuracy, subclass_accuracy })
    }

    fn validate_against(&self, hierarchy: &ClassHierarchy) -> Result<()> {
        if self.class_accuracy.len() != hierarchy.n_classes()
            || self.subclass_accuracy.len() != hierarchy.n_classes()
        {
            return Err(Error::DimensionMismatch(format!(
                "accuracy vectors cover {} classes, hierarchy has {}",
                self.class_accuracy.len(),
                hierarchy.n_classes()
            )));
        }
        for (class, acc) in hierarchy.classes().iter().zip(&self.subclass_accuracy) {
            if class.subclasses.len() >= 2 && acc.is_none() {
                return Err(Error::InvalidArgument(format!(
                    "class '{}' has {} subclasses but no subclass accuracy",
                    class.id,
                    class.subclasses.len()
                )));
            }
        }
        Ok(())
    }
}

/// One class's contribution to the subclass label bits.
#[derive(Debug, Clone, Serialize)]
pub struct SubclassTerm {
    pub class_id: String,
    /// Mixing weight applied to this class's subclass capacity.
    pub weight: f64,
    /// Subclass-channel capacity of this class, in bits; 0 for classes with
    /// a single subclass.
    pub capacity_bits: f64,
}

/// Channel parameters of a binary-detection analysis, echoed into the
/// report so tables can show the inputs next to the derived bits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BinaryChannelParams {
    /// Correct-prediction probability of the null-hypothesis class.
    pub p0: f64,
    /// Correct-prediction probability of the alternative-hypothesis class.
    pub p1: f64,
    /// Within-class subclass accuracy of the null class, if it has one.
    pub null_subclass_accuracy: Option<f64>,
    /// Within-class subclass accuracy of the alternative class, if it has
    /// one.
    pub alt_subclass_accuracy: Option<f64>,
}

/// Label-bit bound decomposed into the class and subclass contributions.
#[derive(Debug, Clone, Serialize)]
pub struct LabelBitsReport {
    /// K factor of the binary class channel; absent for non-binary models.
    pub k_factor: Option<f64>,
    /// Capacity-achieving mass on the alternative-hypothesis class; absent
    /// for non-binary models.
    pub alpha_star: Option<f64>,
    pub class_bits: f64,
    pub subclass_bits: f64,
    pub total_bits: f64,
    pub per_class_subclass_terms: Vec<SubclassTerm>,
    /// Whether the empirical class frequencies match the capacity-achieving
    /// input within [`BOUND_TIGHT_TOL`]; the bound is only tight when they
    /// do.
    pub bound_tight: bool,
    /// Input channel parameters; present for binary-detection reports.
    pub binary_params: Option<BinaryChannelParams>,
}

impl LabelBitsReport {
    fn assemble(
        k_factor: Option<f64>,
        alpha_star: Option<f64>,
        class_bits: f64,
        terms: Vec<SubclassTerm>,
        bound_tight: bool,
    ) -> Self {
        let subclass_bits = weighted_sum(&terms);
        Self {
            k_factor,
            alpha_star,
            class_bits,
            subclass_bits,
            total_bits: class_bits + subclass_bits,
            per_class_subclass_terms: terms,
            bound_tight,
            binary_params: None,
        }
    }
}

/// Weighted sum of subclass capacity terms, grouping bit-identical capacity
/// values first so that the sum degenerates exactly to the common value when
/// every class contributes the same term (the balanced reduction).
fn weighted_sum(terms: &[SubclassTerm]) -> f64 {
    let mut groups: BTreeMap<u64, f64> = BTreeMap::new();
    for t in terms {
        if t.capacity_bits != 0.0 {
            *groups.entry(t.capacity_bits.to_bits()).or_insert(0.0) += t.weight;
        }
    }
    groups
        .into_iter()
        .map(|(bits, weight)| f64::from_bits(bits) * weight)
        .fold(0.0, |acc, x| acc + x)
}

fn frequencies_match(counts: &[u64], target: &[f64]) -> bool {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return false;
    }
    counts
        .iter()
        .zip(target)
        .all(|(&c, &t)| (c as f64 / total as f64 - t).abs() <= BOUND_TIGHT_TOL)
}

/// Label bits for a balanced dataset: `n_classes` classes, each with
/// `n_subclasses` subclasses, class (subclass) accuracy `p_class`
/// (`p_subclass`), errors uniform over the remaining labels.
///
/// `p_subclass` is ignored when `n_subclasses` is 1 (no subclass structure).
pub fn label_bits_balanced(
    n_classes: usize,
    n_subclasses: usize,
    p_class: f64,
    p_subclass: f64,
) -> Result<LabelBitsReport> {
    if n_subclasses == 0 {
        return Err(Error::InvalidArgument("n_subclasses must be at least 1".into()));
    }
    let class_bits = capacity::qary_symmetric(n_classes, p_class)?.capacity;
    let sub_capacity = if n_subclasses >= 2 {
        capacity::qary_symmetric(n_subclasses, p_subclass)?.capacity
    } else {
        0.0
    };
    let weight = 1.0 / n_classes as f64;
    let terms = (0..n_classes)
        .map(|i| SubclassTerm {
            class_id: format!("class_{}", i + 1),
            weight,
            capacity_bits: sub_capacity,
        })
        .collect();
    // Balanced by assumption: the uniform class frequencies are exactly the
    // capacity-achieving input of the symmetric class channel.
    Ok(LabelBitsReport::assemble(None, None, class_bits, terms, true))
}

/// Label bits for binary detection. Class 0 of the hierarchy is the null
/// hypothesis (accuracy `p0`), class 1 the alternative (accuracy `p1`).
///
/// Class bits are the binary asymmetric channel capacity (Z-channel when
/// `p0 = 1`). Subclass terms use the capacity-achieving weights: `alpha*`
/// for the alternative class and `1 − alpha*` for the null class; classes
/// with a single subclass contribute 0.
///
/// The degenerate channel (`p0 + p1 = 1`) yields a report with 0 class bits,
/// uniform weights, and `bound_tight = false`.
pub fn label_bits_binary_detection(
    p0: f64,
    p1: f64,
    hierarchy: &ClassHierarchy,
    accuracy: &TeacherAccuracy,
) -> Result<LabelBitsReport> {
    if hierarchy.n_classes() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "binary detection needs exactly 2 classes, hierarchy has {}",
            hierarchy.n_classes()
        )));
    }
    accuracy.validate_against(hierarchy)?;
    let degenerate = ((p0 - 1.0) + p1).abs() <= DEGENERATE_TOL;
    let class_result = capacity::bac(p0, p1)?;
    let alpha = class_result.optimal_input[1];
    let k = if degenerate { None } else { Some(capacity::k_factor(p0, p1)?) };

    let mut terms = Vec::with_capacity(2);
    for (ci, class) in hierarchy.classes().iter().enumerate() {
        let weight = if ci == 1 { alpha } else { 1.0 - alpha };
        let n_sub = class.subclasses.len();
        let capacity_bits = if n_sub >= 2 {
            let p_sub = accuracy.subclass_accuracy[ci].expect("validated above");
            capacity::qary_symmetric(n_sub, p_sub)?.capacity
        } else {
            0.0
        };
        terms.push(SubclassTerm { class_id: class.id.clone(), weight, capacity_bits });
    }
    let bound_tight = !degenerate
        && frequencies_match(&hierarchy.class_samples(), class_result.optimal_input.as_slice());
    let mut report = LabelBitsReport::assemble(
        k,
        Some(alpha),
        class_result.capacity,
        terms,
        bound_tight,
    );
    let structural = |ci: usize| {
        if hierarchy.classes()[ci].subclasses.len() >= 2 {
            accuracy.subclass_accuracy[ci]
        } else {
            None
        }
    };
    report.binary_params = Some(BinaryChannelParams {
        p0,
        p1,
        null_subclass_accuracy: structural(0),
        alt_subclass_accuracy: structural(1),
    });
    Ok(report)
}

/// Label bits for the general multiclass case: a shared class accuracy
/// `P_C` on a q-ary symmetric class channel, per-class subclass channels,
/// and subclass terms weighted by each class's share of the training
/// samples.
pub fn label_bits_general(
    hierarchy: &ClassHierarchy,
    accuracy: &TeacherAccuracy,
) -> Result<LabelBitsReport> {
    if hierarchy.n_classes() < 2 {
        return Err(Error::DimensionMismatch("need at least 2 classes".into()));
    }
    accuracy.validate_against(hierarchy)?;
    let p_class = accuracy.class_accuracy[0];
    if accuracy
        .class_accuracy
        .iter()
        .any(|&p| (p - p_class).abs() > DEGENERATE_TOL)
    {
        return Err(Error::InvalidArgument(
            "the symmetric-error model uses one shared class accuracy; got per-class values that differ".into(),
        ));
    }
    let total = hierarchy.total_samples();
    if total == 0 {
        return Err(Error::InvalidArgument("hierarchy has zero total samples".into()));
    }
    let class_bits = capacity::qary_symmetric(hierarchy.n_classes(), p_class)?.capacity;
    let class_samples = hierarchy.class_samples();
    let mut terms = Vec::with_capacity(hierarchy.n_classes());
    for (ci, class) in hierarchy.classes().iter().enumerate() {
        let n_sub = class.subclasses.len();
        let capacity_bits = if n_sub >= 2 {
            let p_sub = accuracy.subclass_accuracy[ci].expect("validated above");
            capacity::qary_symmetric(n_sub, p_sub)?.capacity
        } else {
            0.0
        };
        terms.push(SubclassTerm {
            class_id: class.id.clone(),
            weight: class_samples[ci] as f64 / total as f64,
            capacity_bits,
        });
    }
    let uniform = vec![1.0 / hierarchy.n_classes() as f64; hierarchy.n_classes()];
    let bound_tight = frequencies_match(&class_samples, &uniform);
    Ok(LabelBitsReport::assemble(None, None, class_bits, terms, bound_tight))
}

/// Extracted symmetric-pattern capacity of one confusion matrix.
///
/// Accepts q-ary symmetric matrices (diagonal-mean extraction) and strongly
/// or weakly symmetric matrices (`log2 N − H(row)`). When the matrix fits
/// neither pattern within `tol`, errors unless `project` is set, in which
/// case the q-ary projection (diagonal mean, uniform off-diagonal) is used.
fn symmetric_term(m: &ChannelMatrix, tol: f64, project: bool, name: &str) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{name}: confusion matrix must be square, got {}x{}",
            m.n_inputs(),
            m.n_outputs()
        )));
    }
    if let Some(p) = m.qary_parameter(tol) {
        return Ok(capacity::qary_symmetric(m.n_inputs(), p)?.capacity);
    }
    if m.rows_are_permutations(tol) {
        return Ok(capacity::symmetric_projected(m));
    }
    if project {
        let n = m.n_inputs();
        let p = ((0..n).map(|i| m.get(i, i)).sum::<f64>() / n as f64).clamp(0.0, 1.0);
        return Ok(capacity::qary_symmetric(n, p)?.capacity);
    }
    let n = m.n_inputs();
    let p = (0..n).map(|i| m.get(i, i)).sum::<f64>() / n as f64;
    let off = (1.0 - p) / (n - 1) as f64;
    let mut worst = 0.0f64;
    let (mut wi, mut wj) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { p } else { off };
            let dev = (m.get(i, j) - want).abs();
            if dev > worst {
                worst = dev;
                (wi, wj) = (i, j);
            }
        }
    }
    Err(Error::PatternMismatch(format!(
        "{name}: entry ({wi}, {wj}) deviates {worst:.4} from the symmetric pattern (tolerance {tol}); pass --project to force the projection"
    )))
}

/// Builds a label-bits report from empirical normalized confusion matrices.
///
/// `subclass_confusions` is aligned with the hierarchy's classes: `Some`
/// for every class with at least 2 subclasses (its within-class subclass
/// confusion matrix), `None` otherwise.
///
/// Each matrix is matched against the symmetric channel patterns within
/// `tol` and its parameters extracted by diagonal averaging; `project`
/// forces the projection when a matrix fits no pattern.
pub fn analyze_confusion(
    class_confusion: &ChannelMatrix,
    subclass_confusions: &[Option<ChannelMatrix>],
    hierarchy: &ClassHierarchy,
    tol: f64,
    project: bool,
) -> Result<LabelBitsReport> {
    let n_classes = hierarchy.n_classes();
    if class_confusion.n_inputs() != n_classes || !class_confusion.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "class confusion is {}x{}, hierarchy has {} classes",
            class_confusion.n_inputs(),
            class_confusion.n_outputs(),
            n_classes
        )));
    }
    if subclass_confusions.len() != n_classes {
        return Err(Error::DimensionMismatch(format!(
            "{} subclass confusion slots for {} classes",
            subclass_confusions.len(),
            n_classes
        )));
    }
    for (class, slot) in hierarchy.classes().iter().zip(subclass_confusions) {
        match (class.subclasses.len(), slot) {
            (n, Some(m)) if n >= 2 => {
                if m.n_inputs() != n || !m.is_square() {
                    return Err(Error::DimensionMismatch(format!(
                        "class '{}' has {n} subclasses but a {}x{} subclass confusion",
                        class.id,
                        m.n_inputs(),
                        m.n_outputs()
                    )));
                }
            }
            (n, None) if n >= 2 => {
                return Err(Error::DimensionMismatch(format!(
                    "class '{}' has {n} subclasses but no subclass confusion matrix",
                    class.id
                )));
            }
            (1, Some(_)) => {
                return Err(Error::DimensionMismatch(format!(
                    "class '{}' has one subclass; it takes no subclass confusion matrix",
                    class.id
                )));
            }
            _ => {}
        }
    }

    let mut sub_terms = Vec::with_capacity(n_classes);
    for (class, slot) in hierarchy.classes().iter().zip(subclass_confusions) {
        let bits = match slot {
            Some(m) => symmetric_term(m, tol, project, &format!("subclass matrix '{}'", class.id))?,
            None => 0.0,
        };
        sub_terms.push(bits);
    }

    if n_classes == 2 {
        // Binary detection: extract (p0, p1) from the classified pattern.
        let (p0, p1) = match class_confusion.classify(tol) {
            crate::channel::ChannelKind::ZChannel { p1 } => (1.0, p1),
            crate::channel::ChannelKind::Bsc { p } => (p, p),
            crate::channel::ChannelKind::Bac { p0, p1 } => (p0, p1),
            other => {
                return Err(Error::PatternMismatch(format!(
                    "class matrix classified as {other}, expected a binary family"
                )))
            }
        };
        let mut report = binary_from_extracted(p0, p1, hierarchy, &sub_terms)?;
        let degenerate = ((p0 - 1.0) + p1).abs() <= DEGENERATE_TOL;
        if !degenerate {
            let alpha = report.alpha_star.expect("non-degenerate binary report has alpha");
            report.bound_tight =
                frequencies_match(&hierarchy.class_samples(), &[1.0 - alpha, alpha]);
        }
        // Echo the extracted within-class accuracies (diagonal means).
        let diag_mean = |slot: &Option<ChannelMatrix>| {
            slot.as_ref().map(|m| {
                (0..m.n_inputs()).map(|i| m.get(i, i)).sum::<f64>() / m.n_inputs() as f64
            })
        };
        report.binary_params = Some(BinaryChannelParams {
            p0,
            p1,
            null_subclass_accuracy: diag_mean(&subclass_confusions[0]),
            alt_subclass_accuracy: diag_mean(&subclass_confusions[1]),
        });
        return Ok(report);
    }

    // Multiclass: class bits from the class matrix's symmetric pattern,
    // subclass terms weighted by sample counts.
    let class_bits = symmetric_term(class_confusion, tol, project, "class matrix")?;
    let total = hierarchy.total_samples();
    if total == 0 {
        return Err(Error::InvalidArgument("hierarchy has zero total samples".into()));
    }
    let class_samples = hierarchy.class_samples();
    let terms = hierarchy
        .classes()
        .iter()
        .enumerate()
        .map(|(ci, class)| SubclassTerm {
            class_id: class.id.clone(),
            weight: class_samples[ci] as f64 / total as f64,
            capacity_bits: sub_terms[ci],
        })
        .collect();
    let uniform = vec![1.0 / n_classes as f64; n_classes];
    let bound_tight = frequencies_match(&class_samples, &uniform);
    Ok(LabelBitsReport::assemble(None, None, class_bits, terms, bound_tight))
}

fn binary_from_extracted(
    p0: f64,
    p1: f64,
    hierarchy: &ClassHierarchy,
    sub_capacities: &[f64],
) -> Result<LabelBitsReport> {
    let degenerate = ((p0 - 1.0) + p1).abs() <= DEGENERATE_TOL;
    let class_result = capacity::bac(p0, p1)?;
    let alpha = class_result.optimal_input[1];
    let k = if degenerate { None } else { Some(capacity::k_factor(p0, p1)?) };
    let terms = hierarchy
        .classes()
        .iter()
        .enumerate()
        .map(|(ci, class)| SubclassTerm {
            class_id: class.id.clone(),
            weight: if ci == 1 { alpha } else { 1.0 - alpha },
            capacity_bits: sub_capacities[ci],
        })
        .collect();
    Ok(LabelBitsReport::assemble(k, Some(alpha), class_result.capacity, terms, false))
}

/// Extra label bits per sample gained by distilling with subclasses instead
/// of classes alone.
pub fn skd_information_gain(with_subclasses: &LabelBitsReport, class_only: &LabelBitsReport) -> f64 {
    with_subclasses.total_bits - class_only.total_bits
}
