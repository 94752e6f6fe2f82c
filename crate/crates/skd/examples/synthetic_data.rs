//! Synthetic dataset generation: the benchmark spec, class imbalance
//! rescaling, shortcut-feature dropout, and CSV export.
//!
//!     cargo run -p skd --example synthetic_data

use skd::synthdata::{generate, imbalance, Split, SyntheticSpec};

fn main() -> skd::Result<()> {
    let spec = SyntheticSpec::benchmark();
    println!("benchmark spec:");
    println!("  dim {}, noise {}, positive class '{}'", spec.dim, spec.noise_scale, spec.positive_class);
    for (class, centers) in spec.hierarchy.classes().iter().zip(chunk_centers(&spec)) {
        println!("  class {:<4} subclasses {:?}", class.id, centers);
    }

    let data = generate(&spec, 7)?;
    let train = data.split(Split::Train).count();
    let test = data.split(Split::Test).count();
    println!("\ngenerated {train} train + {test} test samples (seed 7, ChaCha8 stream)");

    // Half of the positive class's test samples lose the shortcut feature:
    // their coordinate 0 is resampled from the majority class's marginal.
    let ssa_test: Vec<f64> = data
        .split(Split::Test)
        .filter(|s| data.class_ids[s.class] == "ssa")
        .map(|s| s.features[0])
        .collect();
    let low = ssa_test.iter().filter(|&&x| x < 1.0).count();
    println!(
        "positive-class test samples with a weak shortcut feature: {low}/{} (dropout 0.5)",
        ssa_test.len()
    );

    // Rescale to a requested class imbalance; subclass counts follow.
    let skewed = imbalance(&spec, &[2.0, 1.0])?;
    println!(
        "\nafter imbalance [2.0, 1.0]: class sample counts {:?} (was {:?})",
        skewed.hierarchy.class_samples(),
        spec.hierarchy.class_samples()
    );

    let csv = data.to_csv_string();
    println!("\nfirst three CSV rows (features..., subclass, class, split):");
    for line in csv.lines().take(3) {
        println!("  {line}");
    }
    Ok(())
}

fn chunk_centers(spec: &SyntheticSpec) -> Vec<Vec<&Vec<f64>>> {
    let mut out = Vec::new();
    let mut it = spec.subclass_centers.iter();
    for class in spec.hierarchy.classes() {
        out.push((0..class.subclasses.len()).filter_map(|_| it.next()).collect());
    }
    out
}
