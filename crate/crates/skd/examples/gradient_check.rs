//! Backpropagation vs central finite differences on random networks, over
//! the pure supervised path, the pure distillation path, and the mixed
//! objective.
//!
//!     cargo run -p skd --example gradient_check

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skd::distill::{gradient_check, GradCheckSample, ToyNet};

fn main() -> skd::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: (f64, String) = (0.0, String::new());
    let paths = [(1.0, 1.0, "supervised"), (5.0, 0.0, "distillation"), (5.0, 0.45, "mixed")];
    for case in 0..30 {
        let input_dim = 2 + case % 4;
        let width = 2 + case % 3;
        let student = ToyNet::new(input_dim, &[5], width, &mut rng);
        let teacher = ToyNet::new(input_dim, &[10], width, &mut rng);
        let features: Vec<f64> =
            (0..input_dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let sample = GradCheckSample { features: &features, label: case % width };
        for (tau, lambda, tag) in paths {
            let err = gradient_check(&student, &teacher, sample, tau, lambda, 1e-6)?;
            if err > worst.0 {
                worst = (err, format!("case {case}, {tag} path (tau {tau}, lambda {lambda})"));
            }
        }
    }
    println!("checked 30 networks x 3 loss paths, eps = 1e-6");
    println!("worst relative error: {:.3e} at {}", worst.0, worst.1);
    assert!(worst.0 <= 1e-5);
    println!("all gradients agree with finite differences within 1e-5");
    Ok(())
}
