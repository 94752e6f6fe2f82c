//! Dense feedforward network with rectifier hidden layers, identity output,
//! hand-written backpropagation, and a finite-difference gradient oracle.
//!
//! The network is deliberately small and exact: double precision, plain
//! mini-batch gradient descent, deterministic Glorot-uniform initialization
//! from a seeded ChaCha8 stream.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{cross_entropy_index, kl_divergence, softmax_unchecked, student_objective};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseLayer {
    /// Row-major `[out_dim x in_dim]`.
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl DenseLayer {
    fn glorot(in_dim: usize, out_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let weights = (0..in_dim * out_dim)
            .map(|_| rng.random::<f64>() * 2.0 * limit - limit)
            .collect();
        // Small positive bias keeps rectifier units off the kink (and live)
        // at initialization.
        Self { weights, biases: vec![0.01; out_dim], in_dim, out_dim }
    }

    fn affine(&self, input: &[f64], out: &mut [f64]) {
        for (o, y) in out.iter_mut().enumerate() {
            let row = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
            *y = self.biases[o] + row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>();
        }
    }
}

/// Small dense network: rectifier on hidden layers, identity on the output
/// layer, one output per subclass.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyNet {
    pub(crate) layers: Vec<DenseLayer>,
}

/// Per-layer activations cached by a forward pass, for backpropagation.
pub(crate) struct Trace {
    /// `post[0]` is the input; `post[l + 1]` the activation after layer `l`.
    post: Vec<Vec<f64>>,
    /// Pre-activation values per layer.
    pre: Vec<Vec<f64>>,
}

impl Trace {
    pub fn logits(&self) -> &[f64] {
        self.post.last().unwrap()
    }
}

/// Parameter gradients, mirroring the layer shapes.
#[derive(Debug, Clone)]
pub(crate) struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl ToyNet {
    /// Builds a network with the given hidden widths; weights are
    /// Glorot-uniform from `rng`, biases zero.
    pub fn new(input_dim: usize, hidden: &[usize], output_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        assert!(input_dim > 0 && output_dim > 0);
        let mut dims = vec![input_dim];
        dims.extend_from_slice(hidden);
        dims.push(output_dim);
        let layers = dims
            .windows(2)
            .map(|w| DenseLayer::glorot(w[0], w[1], rng))
            .collect();
        Self { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().unwrap().in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    /// Forward pass returning the output logits.
    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        self.forward_cached(input).post.pop().unwrap()
    }

    pub(crate) fn forward_cached(&self, input: &[f64]) -> Trace {
        assert_eq!(input.len(), self.input_dim(), "input width mismatch");
        let n_layers = self.layers.len();
        let mut post = Vec::with_capacity(n_layers + 1);
        let mut pre = Vec::with_capacity(n_layers);
        post.push(input.to_vec());
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = vec![0.0; layer.out_dim];
            layer.affine(post.last().unwrap(), &mut z);
            pre.push(z.clone());
            if l + 1 < n_layers {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            post.push(z);
        }
        Trace { post, pre }
    }

    pub(crate) fn zero_gradients(&self) -> Gradients {
        Gradients {
            weights: self.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            biases: self.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    /// Accumulates parameter gradients for one sample given the loss
    /// gradient at the output logits.
    pub(crate) fn backward(&self, trace: &Trace, dloss_dlogits: &[f64], grads: &mut Gradients) {
        let n_layers = self.layers.len();
        let mut delta = dloss_dlogits.to_vec();
        for l in (0..n_layers).rev() {
            let layer = &self.layers[l];
            let input = &trace.post[l];
            let gw = &mut grads.weights[l];
            for o in 0..layer.out_dim {
                let d = delta[o];
                grads.biases[l][o] += d;
                let row = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (g, &x) in row.iter_mut().zip(input) {
                    *g += d * x;
                }
            }
            if l == 0 {
                break;
            }
            let mut prev = vec![0.0; layer.in_dim];
            for (o, &d) in delta.iter().enumerate() {
                let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (p, &w) in prev.iter_mut().zip(row) {
                    *p += d * w;
                }
            }
            // Rectifier gate of the layer below.
            for (p, &z) in prev.iter_mut().zip(&trace.pre[l - 1]) {
                if z <= 0.0 {
                    *p = 0.0;
                }
            }
            delta = prev;
        }
    }

    /// One gradient-descent step: `param -= learning_rate * grad * scale`.
    pub(crate) fn apply_gradients(&mut self, grads: &Gradients, learning_rate: f64, scale: f64) {
        let step = learning_rate * scale;
        for (l, layer) in self.layers.iter_mut().enumerate() {
            for (w, g) in layer.weights.iter_mut().zip(&grads.weights[l]) {
                *w -= step * g;
            }
            for (b, g) in layer.biases.iter_mut().zip(&grads.biases[l]) {
                *b -= step * g;
            }
        }
    }

    fn param_mut(&mut self, index: usize) -> &mut f64 {
        let mut i = index;
        for layer in &mut self.layers {
            if i < layer.weights.len() {
                return &mut layer.weights[i];
            }
            i -= layer.weights.len();
            if i < layer.biases.len() {
                return &mut layer.biases[i];
            }
            i -= layer.biases.len();
        }
        panic!("parameter index {index} out of range");
    }

    fn gradient_at(grads: &Gradients, index: usize) -> f64 {
        let mut i = index;
        for l in 0..grads.weights.len() {
            if i < grads.weights[l].len() {
                return grads.weights[l][i];
            }
            i -= grads.weights[l].len();
            if i < grads.biases[l].len() {
                return grads.biases[l][i];
            }
            i -= grads.biases[l].len();
        }
        panic!("parameter index {index} out of range");
    }
}

/// One training sample for the gradient oracle.
#[derive(Debug, Clone, Copy)]
pub struct GradCheckSample<'a> {
    pub features: &'a [f64],
    /// One-hot subclass label index.
    pub label: usize,
}

/// Gradient of the student objective at the student logits:
/// `λ (σ(s) − y) + (1−λ) κ (σ(s/τ) − σ(t/τ))` with κ = τ when the KL term
/// carries the τ² scale and κ = 1/τ otherwise.
pub(crate) fn objective_logit_gradient(
    student_logits: &[f64],
    teacher_logits: &[f64],
    label: usize,
    temperature: f64,
    task_balance: f64,
    scale_kl: bool,
) -> Vec<f64> {
    let width = student_logits.len();
    let mut grad = vec![0.0; width];
    if task_balance > 0.0 {
        let probs = softmax_unchecked(student_logits, 1.0);
        for (j, g) in grad.iter_mut().enumerate() {
            let y = if j == label { 1.0 } else { 0.0 };
            *g += task_balance * (probs[j] - y);
        }
    }
    if task_balance < 1.0 {
        let p = softmax_unchecked(teacher_logits, temperature);
        let q = softmax_unchecked(student_logits, temperature);
        let kappa = if scale_kl { temperature } else { 1.0 / temperature };
        for (j, g) in grad.iter_mut().enumerate() {
            *g += (1.0 - task_balance) * kappa * (q[j] - p[j]);
        }
    }
    grad
}

/// Full student objective for one sample, in nats.
pub(crate) fn sample_objective(
    student: &ToyNet,
    teacher_logits: &[f64],
    features: &[f64],
    label: usize,
    temperature: f64,
    task_balance: f64,
    scale_kl: bool,
) -> f64 {
    let logits = student.forward(features);
    let ce = cross_entropy_index(&softmax_unchecked(&logits, 1.0), label);
    let p = softmax_unchecked(teacher_logits, temperature);
    let q = softmax_unchecked(&logits, temperature);
    let scale = if scale_kl { temperature * temperature } else { 1.0 };
    let skd = scale * kl_divergence(&p, &q);
    student_objective(ce, skd, task_balance).expect("validated task balance")
}

/// Checks the analytic gradient of the student objective against central
/// finite differences on every parameter; returns the maximum relative
/// error.
///
/// The objective mixes the supervised cross-entropy path (`task_balance`
/// toward 1) and the distillation path against `teacher` (`task_balance`
/// toward 0), so both backpropagation branches are exercised.
pub fn gradient_check(
    student: &ToyNet,
    teacher: &ToyNet,
    sample: GradCheckSample<'_>,
    temperature: f64,
    task_balance: f64,
    eps: f64,
) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    if !(0.0..=1.0).contains(&task_balance) {
        return Err(Error::InvalidArgument(format!(
            "task_balance must lie in [0, 1], got {task_balance}"
        )));
    }
    if teacher.output_dim() != student.output_dim() {
        return Err(Error::DimensionMismatch(format!(
            "teacher emits {} logits, student {}",
            teacher.output_dim(),
            student.output_dim()
        )));
    }
    if sample.label >= student.output_dim() {
        return Err(Error::InvalidArgument(format!(
            "label {} out of range for {} outputs",
            sample.label,
            student.output_dim()
        )));
    }
    let teacher_logits = teacher.forward(sample.features);

    let trace = student.forward_cached(sample.features);
    let dlogits = objective_logit_gradient(
        trace.logits(),
        &teacher_logits,
        sample.label,
        temperature,
        task_balance,
        true,
    );
    let mut grads = student.zero_gradients();
    student.backward(&trace, &dlogits, &mut grads);

    let mut worst = 0.0f64;
    for index in 0..student.param_count() {
        let mut plus = student.clone();
        *plus.param_mut(index) += eps;
        let mut minus = student.clone();
        *minus.param_mut(index) -= eps;
        let loss_plus = sample_objective(
            &plus, &teacher_logits, sample.features, sample.label, temperature, task_balance, true,
        );
        let loss_minus = sample_objective(
            &minus, &teacher_logits, sample.features, sample.label, temperature, task_balance, true,
        );
        let numerical = (loss_plus - loss_minus) / (2.0 * eps);
        let analytic = ToyNet::gradient_at(&grads, index);
        // The denominator floor keeps central-difference rounding noise
        // (~1e-9 absolute at eps ~ 1e-6) from dominating coordinates whose
        // true gradient is near zero; any real backprop defect shows a
        // relative error orders of magnitude above the threshold.
        let rel = (numerical - analytic).abs() / (numerical.abs() + analytic.abs()).max(1e-3);
        if rel > worst {
            worst = rel;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn forward_shapes() {
        let net = ToyNet::new(3, &[5, 4], 2, &mut rng(1));
        assert_eq!(net.input_dim(), 3);
        assert_eq!(net.output_dim(), 2);
        assert_eq!(net.forward(&[0.1, -0.2, 0.3]).len(), 2);
        assert_eq!(net.param_count(), 3 * 5 + 5 + 5 * 4 + 4 + 4 * 2 + 2);
    }

    #[test]
    fn initialization_deterministic() {
        let a = ToyNet::new(4, &[8], 3, &mut rng(42));
        let b = ToyNet::new(4, &[8], 3, &mut rng(42));
        assert_eq!(a, b);
    }

    #[test]
    fn gradient_check_random_nets_both_paths() {
        let mut r = rng(7);
        for case in 0..20 {
            let student = ToyNet::new(4, &[6], 3, &mut r);
            let teacher = ToyNet::new(4, &[10], 3, &mut r);
            let features: Vec<f64> = (0..4).map(|_| r.random::<f64>() * 4.0 - 2.0).collect();
            let label = case % 3;
            for (tau, lambda) in [(1.0, 1.0), (5.0, 0.0), (1.0, 0.0), (5.0, 0.45)] {
                let err = gradient_check(
                    &student,
                    &teacher,
                    GradCheckSample { features: &features, label },
                    tau,
                    lambda,
                    1e-6,
                )
                .unwrap();
                assert!(err <= 1e-5, "case {case} tau={tau} lambda={lambda}: rel error {err}");
            }
        }
    }

    #[test]
    fn gradient_check_rejects_bad_eps() {
        let mut r = rng(3);
        let net = ToyNet::new(2, &[3], 2, &mut r);
        let teacher = ToyNet::new(2, &[3], 2, &mut r);
        let sample = GradCheckSample { features: &[0.5, -0.5], label: 0 };
        assert!(gradient_check(&net, &teacher, sample, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn deep_linear_region_gradient_matches() {
        // All-positive weights and inputs keep every rectifier active, so
        // the analytic and numeric gradients agree essentially exactly.
        let mut r = rng(11);
        let student = ToyNet::new(3, &[4, 4], 2, &mut r);
        let teacher = ToyNet::new(3, &[8, 8], 2, &mut r);
        let err = gradient_check(
            &student,
            &teacher,
            GradCheckSample { features: &[1.0, 2.0, 0.5], label: 1 },
            2.0,
            0.3,
            1e-6,
        )
        .unwrap();
        assert!(err <= 1e-5, "rel error {err}");
    }
}
