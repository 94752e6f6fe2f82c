//! The four-arm comparison (teacher, baseline student, class distillation,
//! subclass distillation) over independently seeded runs, plus the
//! label-bit analysis of the best teacher's training confusion. Writes the
//! JSON report and SVG heatmaps next to the terminal summary.
//!
//!     cargo run --release -p skd --example full_experiment

use skd::distill::{run_experiment, DistillConfig};
use skd::report::{confusion_heatmap_svg, to_canonical_json, write_atomic};
use skd::synthdata::SyntheticSpec;

fn main() -> skd::Result<()> {
    let spec = SyntheticSpec::benchmark();
    let cfg = DistillConfig { runs: 20, ..DistillConfig::default() };
    println!(
        "running {} seeded rounds (teacher {:?}, students {:?}, tau {}, lambda {})...",
        cfg.runs, cfg.teacher_hidden_sizes, cfg.hidden_sizes, cfg.temperature, cfg.task_balance
    );
    let report = run_experiment(&spec, &cfg, true)?;

    let agg = &report.aggregate;
    println!("\narm        mean F1    std F1");
    println!("----------------------------");
    for (name, stats) in [
        ("teacher", &agg.teacher),
        ("baseline", &agg.baseline),
        ("kd", &agg.kd),
        ("skd", &agg.skd),
    ] {
        println!("{name:<9}  {:.4}     {:.4}", stats.mean_f1, stats.std_f1);
    }
    println!(
        "\nskd - baseline: {:+.4} (pooled se {:.4}, {})",
        agg.skd_vs_baseline.gap,
        agg.skd_vs_baseline.pooled_se,
        if agg.skd_vs_baseline.significant { "significant" } else { "not significant" }
    );
    println!(
        "label bits from the best teacher (run {}): {:.4} with subclasses vs {:.4} class-only (gain {:.4})",
        report.best_teacher_run,
        report.label_bits.total_bits,
        report.label_bits_class_only.total_bits,
        report.label_bits_gain
    );

    let out_dir = std::env::temp_dir().join("skd-full-experiment");
    write_atomic(&out_dir.join("report.json"), &to_canonical_json(&report)?)?;
    let labels: Vec<String> = spec.hierarchy.class_ids().iter().map(|s| s.to_string()).collect();
    let svg = confusion_heatmap_svg(
        &report.confusion.skd_class,
        &labels,
        &labels,
        "subclass-distilled student: mean test confusion",
    );
    write_atomic(&out_dir.join("confusion_skd_class.svg"), &svg)?;
    println!("\nwrote report.json and confusion_skd_class.svg under {}", out_dir.display());
    Ok(())
}
