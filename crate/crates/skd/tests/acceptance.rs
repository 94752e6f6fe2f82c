//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; thresholds are pinned in the assertions.

use skd::capacity;
use skd::channel::ChannelMatrix;
use skd::distill::{
    gradient_check, run_experiment, softmax_with_temperature, student_objective, DistillConfig,
    GradCheckSample, ToyNet,
};
use skd::distill::{aggregate_to_class, skd_loss};
use skd::labelbits::{
    label_bits_balanced, label_bits_binary_detection, label_bits_general, skd_information_gain,
    ClassHierarchy, TeacherAccuracy,
};
use skd::synthdata::SyntheticSpec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE_TOL: f64 = 5e-4;

/// One published task row: two-decimal channel parameters, subclass
/// structure, and the published four-decimal outputs.
struct TaskRow {
    name: &'static str,
    p0: f64,
    p1: f64,
    null_subclasses: usize,
    alt_subclasses: usize,
    p_null_sub: Option<f64>,
    p_alt_sub: Option<f64>,
    k: f64,
    alpha: f64,
    class_bits: f64,
    subclass_bits: f64,
    total_bits: f64,
}

const ROWS: &[TaskRow] = &[
    TaskRow {
        name: "CL-11",
        p0: 1.00,
        p1: 0.94,
        null_subclasses: 1,
        alt_subclasses: 1,
        p_null_sub: None,
        p_alt_sub: None,
        k: 0.3483,
        alpha: 0.4680,
        class_bits: 0.8363,
        subclass_bits: 0.0,
        total_bits: 0.8363,
    },
    TaskRow {
        name: "SL-41",
        p0: 1.00,
        p1: 0.82,
        null_subclasses: 1,
        alt_subclasses: 4,
        p_null_sub: None,
        p_alt_sub: Some(0.86),
        k: 0.8294,
        alpha: 0.4392,
        class_bits: 0.6441,
        subclass_bits: 0.5243,
        total_bits: 1.1684,
    },
    TaskRow {
        name: "SL-22",
        p0: 0.99,
        p1: 0.80,
        null_subclasses: 2,
        alt_subclasses: 2,
        p_null_sub: Some(0.97),
        p_alt_sub: Some(0.91),
        k: 0.8116,
        alpha: 0.4467,
        class_bits: 0.5781,
        subclass_bits: 0.6977,
        total_bits: 1.2758,
    },
    TaskRow {
        name: "SL-12",
        p0: 1.00,
        p1: 0.96,
        null_subclasses: 2,
        alt_subclasses: 1,
        p_null_sub: Some(0.97),
        p_alt_sub: None,
        k: 0.2524,
        alpha: 0.4754,
        class_bits: 0.8793,
        subclass_bits: 0.4226,
        total_bits: 1.3019,
    },
    TaskRow {
        name: "SL-14",
        p0: 0.94,
        p1: 0.89,
        null_subclasses: 4,
        alt_subclasses: 1,
        p_null_sub: Some(0.84),
        p_alt_sub: None,
        k: 0.2078,
        alpha: 0.4868,
        class_bits: 0.5849,
        subclass_bits: 0.5707,
        total_bits: 1.1556,
    },
];

fn row_hierarchy(null_subclasses: usize, alt_subclasses: usize) -> ClassHierarchy {
    let subclasses = |id: &str, n: usize, total: u64| -> Vec<(String, u64)> {
        if n == 1 {
            vec![(id.to_string(), total)]
        } else {
            (0..n).map(|i| (format!("{id}_{}", i + 1), total / n as u64)).collect()
        }
    };
    let build = |parts: Vec<(&str, Vec<(String, u64)>)>| {
        let classes = parts
            .into_iter()
            .map(|(id, subs)| skd::labelbits::HierClass {
                id: id.to_string(),
                subclasses: subs
                    .into_iter()
                    .map(|(sid, n)| skd::labelbits::Subclass { id: sid, samples: n })
                    .collect(),
            })
            .collect();
        ClassHierarchy::new(classes).unwrap()
    };
    build(vec![
        ("hp", subclasses("hp", null_subclasses, 2162)),
        ("ssa", subclasses("ssa", alt_subclasses, 990)),
    ])
}

fn row_report(row: &TaskRow) -> skd::labelbits::LabelBitsReport {
    let hierarchy = row_hierarchy(row.null_subclasses, row.alt_subclasses);
    let accuracy = TeacherAccuracy::new(
        vec![row.p0, row.p1],
        vec![row.p_null_sub, row.p_alt_sub],
    )
    .unwrap();
    label_bits_binary_detection(row.p0, row.p1, &hierarchy, &accuracy).unwrap()
}

#[test]
fn criterion_1_task_table_reproduction() {
    for row in ROWS {
        let report = row_report(row);
        let checks = [
            ("K", report.k_factor.unwrap(), row.k),
            ("alpha*", report.alpha_star.unwrap(), row.alpha),
            ("class bits", report.class_bits, row.class_bits),
            ("subclass bits", report.subclass_bits, row.subclass_bits),
            ("total bits", report.total_bits, row.total_bits),
        ];
        for (what, got, want) in checks {
            assert!(
                (got - want).abs() <= TABLE_TOL,
                "{}: {what} = {got:.6}, published {want:.4} (tol {TABLE_TOL})",
                row.name
            );
        }
    }
    // The SL-21 row does not reproduce from its two-decimal inputs: the
    // printed K is 0.2738 but (H_b(0.93) − H_b(0.99)) / 0.92 is ~0.3099.
    // It stays excluded and flagged.
    let k_sl21 = capacity::k_factor(0.99, 0.93).unwrap();
    assert!(
        (k_sl21 - 0.2738).abs() > 0.03,
        "SL-21 unexpectedly reproduces (K = {k_sl21:.4}); revisit its exclusion"
    );
    println!(
        "ACCEPTANCE 1 (task-table reproduction, 5 rows, ±{TABLE_TOL}): PASS \
         [SL-21 flagged inconsistent: computed K {k_sl21:.4} vs printed 0.2738]"
    );
}

#[test]
fn criterion_2_subclass_information_gain() {
    let sl12 = row_report(&ROWS[3]);
    let cl11 = row_report(&ROWS[0]);
    let gain = skd_information_gain(&sl12, &cl11);
    assert!(
        (gain - 0.4656).abs() <= TABLE_TOL,
        "information gain {gain:.6}, published 0.4656"
    );
    println!("ACCEPTANCE 2 (subclass information gain {gain:.6} vs 0.4656 ± {TABLE_TOL}): PASS");
}

#[test]
fn criterion_3_closed_forms_match_iterative_oracle() {
    const CAP_TOL: f64 = 1e-6;
    const INPUT_TOL: f64 = 1e-4;
    const BA_TOL: f64 = 1e-11;
    const BA_ITERS: usize = 5_000_000;
    let started = std::time::Instant::now();
    let mut checked = 0usize;

    let mut check = |label: String, matrix: &ChannelMatrix, closed: &capacity::CapacityResult| {
        let ba = capacity::blahut_arimoto(matrix, BA_TOL, BA_ITERS)
            .unwrap_or_else(|e| panic!("{label}: {e}"));
        assert!(
            (closed.capacity - ba.capacity).abs() <= CAP_TOL,
            "{label}: closed {:.9} vs iterative {:.9}",
            closed.capacity,
            ba.capacity
        );
        // The optimum is flat wherever the capacity is (near) zero, so the
        // achieving input is only identified where the channel carries
        // information.
        if closed.capacity > 1e-4 {
            for (a, b) in closed.optimal_input.as_slice().iter().zip(ba.optimal_input.as_slice()) {
                assert!(
                    (a - b).abs() <= INPUT_TOL,
                    "{label}: optimal inputs differ, closed {:?} vs iterative {:?}",
                    closed.optimal_input.as_slice(),
                    ba.optimal_input.as_slice()
                );
            }
        }
        checked += 1;
    };

    for i in 0..=50 {
        let p = i as f64 / 50.0;
        let m = ChannelMatrix::bsc(p).unwrap();
        check(format!("BSC({p})"), &m, &capacity::bac(p, p).unwrap());
    }
    for i in 1..=50 {
        let p1 = i as f64 / 50.0;
        let m = ChannelMatrix::z(p1).unwrap();
        check(format!("Z({p1})"), &m, &capacity::z(p1).unwrap());
    }
    for i in 0..=20 {
        for j in 0..=20 {
            let (p0, p1) = (i as f64 / 20.0, j as f64 / 20.0);
            if ((p0 - 1.0) + p1).abs() < 1e-9 {
                continue;
            }
            let m = ChannelMatrix::bac(p0, p1).unwrap();
            check(format!("BAC({p0}, {p1})"), &m, &capacity::bac(p0, p1).unwrap());
        }
    }
    for n in 2..=6 {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let m = ChannelMatrix::qary_symmetric(n, p).unwrap();
            check(format!("Qary({n}, {p})"), &m, &capacity::qary_symmetric(n, p).unwrap());
        }
    }
    // Random circulants (strongly symmetric) over a seeded stream.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..15 {
        let n = 3 + case % 5;
        let mut base: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
        let sum: f64 = base.iter().sum();
        base.iter_mut().for_each(|x| *x /= sum);
        let rows: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| base[(j + n - i) % n]).collect()).collect();
        let m = ChannelMatrix::new(rows).unwrap();
        check(format!("circulant case {case}"), &m, &capacity::symmetric(&m).unwrap());
    }
    // Weakly (not strongly) symmetric 4x4s: rows are permutations of
    // (a, b, c, d) with a + d = b + c = 1/2, paired so column sums are
    // equal while some columns repeat values.
    for case in 0..10 {
        let a = 0.26 + 0.02 * case as f64;
        let d = 0.5 - a;
        let b = 0.05 + 0.03 * case as f64;
        let c = 0.5 - b;
        let m = ChannelMatrix::new(vec![
            vec![a, b, c, d],
            vec![a, b, d, c],
            vec![d, c, a, b],
            vec![d, c, b, a],
        ])
        .unwrap();
        check(format!("weakly symmetric case {case}"), &m, &capacity::symmetric(&m).unwrap());
    }

    assert!(checked >= 500, "only {checked} channels checked");
    println!(
        "ACCEPTANCE 3 (oracle equivalence on {checked} channels, capacity ± {CAP_TOL}, inputs ± {INPUT_TOL}): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn criterion_4_theorem_consistency() {
    // Perfect teacher: total bits equal log2(N_C) + log2(N_S) bit-for-bit,
    // which is log2(N_C · N_S) exactly. The identity holds bitwise against
    // the product form too whenever both counts are powers of two (where
    // log2 is exactly representable); for other counts the two IEEE
    // evaluation orders may differ in the last bit, so the product form is
    // pinned at one unit in the last place.
    for n_classes in [2usize, 3, 4, 5, 6, 8] {
        for n_subclasses in [1usize, 2, 3, 4, 8] {
            let report = label_bits_balanced(n_classes, n_subclasses, 1.0, 1.0).unwrap();
            let sum_form = (n_classes as f64).log2() + (n_subclasses as f64).log2();
            assert_eq!(
                report.total_bits, sum_form,
                "perfect teacher ({n_classes}, {n_subclasses}): {} != {sum_form}",
                report.total_bits
            );
            let product_form = ((n_classes * n_subclasses) as f64).log2();
            if n_classes.is_power_of_two() && n_subclasses.is_power_of_two() {
                assert_eq!(report.total_bits, product_form);
            } else {
                let ulp = product_form * f64::EPSILON;
                assert!(
                    (report.total_bits - product_form).abs() <= ulp,
                    "perfect teacher ({n_classes}, {n_subclasses}): {} vs {product_form}",
                    report.total_bits
                );
            }
        }
    }

    // The weighted multiclass bound collapses to the balanced closed form
    // exactly on uniform hierarchies.
    for (n_classes, n_subclasses, per_subclass) in [(2usize, 2usize, 50u64), (3, 3, 7), (5, 2, 13), (4, 1, 9)] {
        let classes = (0..n_classes)
            .map(|c| skd::labelbits::HierClass {
                id: format!("c{c}"),
                subclasses: (0..n_subclasses)
                    .map(|s| skd::labelbits::Subclass {
                        id: format!("c{c}s{s}"),
                        samples: per_subclass,
                    })
                    .collect(),
            })
            .collect();
        let hierarchy = ClassHierarchy::new(classes).unwrap();
        let accuracy = TeacherAccuracy::new(
            vec![0.9; n_classes],
            vec![if n_subclasses >= 2 { Some(0.8) } else { None }; n_classes],
        )
        .unwrap();
        let general = label_bits_general(&hierarchy, &accuracy).unwrap();
        let balanced = label_bits_balanced(n_classes, n_subclasses, 0.9, 0.8).unwrap();
        assert_eq!(general.class_bits, balanced.class_bits);
        assert_eq!(general.subclass_bits, balanced.subclass_bits);
        assert_eq!(general.total_bits, balanced.total_bits);
    }

    // Z-channel capacity-achieving mass on the noisy input lies in
    // (1/e, 0.5] over all of (0, 1]; the published constant 0.3768 is a
    // digit transposition of 1/e ≈ 0.3679 (the true infimum, approached as
    // p1 → 0). The literal constant holds on the operating region
    // p1 ≳ 0.18 that the published tasks use.
    let inv_e = (-1.0f64).exp();
    let mut min_alpha = f64::INFINITY;
    for i in 1..=10_000 {
        let p1 = i as f64 / 10_000.0;
        let alpha = capacity::z(p1).unwrap().optimal_input[1];
        assert!(
            alpha > inv_e && alpha <= 0.5 + 1e-15,
            "alpha*({p1}) = {alpha} outside (1/e, 0.5]"
        );
        min_alpha = min_alpha.min(alpha);
        if p1 >= 0.18 {
            assert!(alpha > 0.3768, "alpha*({p1}) = {alpha} below the published bound");
        }
    }
    assert_eq!(capacity::z(1.0).unwrap().optimal_input[1], 0.5);
    assert!((min_alpha - inv_e).abs() < 1e-3, "infimum {min_alpha} not near 1/e");

    println!(
        "ACCEPTANCE 4 (theorem consistency: perfect-teacher totals exact as log2 nc + log2 ns, \
         bitwise vs log2(nc*ns) on power-of-two counts and within 1 ulp otherwise; weighted bound \
         reduces to the balanced form bitwise; alpha* in (1/e, 0.5] with infimum {min_alpha:.4} -> 1/e, \
         the published lower constant 0.3768 being a transposition of 0.3679 and holding for p1 >= 0.18): PASS"
    );
}

#[test]
fn criterion_5_gradient_correctness() {
    const MAX_REL: f64 = 1e-5;
    let started = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let input_dim = 2 + case % 4;
        let width = 2 + case % 3;
        let hidden = 3 + case % 6;
        let student = ToyNet::new(input_dim, &[hidden], width, &mut rng);
        let teacher = ToyNet::new(input_dim, &[hidden * 2], width, &mut rng);
        let features: Vec<f64> =
            (0..input_dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let label = case % width;
        for (tau, lambda) in [(1.0, 1.0), (1.0, 0.0), (5.0, 0.0)] {
            let err = gradient_check(
                &student,
                &teacher,
                GradCheckSample { features: &features, label },
                tau,
                lambda,
                1e-6,
            )
            .unwrap();
            assert!(
                err <= MAX_REL,
                "case {case} (tau {tau}, lambda {lambda}): max relative error {err:.3e}"
            );
            worst = worst.max(err);
        }
    }
    println!(
        "ACCEPTANCE 5 (gradient check, 100 cases x 3 paths, worst {worst:.3e} <= {MAX_REL:.0e}): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn criterion_6_loss_identities() {
    const EXACT: f64 = 1e-12;
    let hierarchy = ClassHierarchy::from_parts(&[
        ("hp", &[("hp", 1)]),
        ("ssa", &[("ssa_easy", 1), ("ssa_hard", 1)]),
    ])
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let logits: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 12.0 - 6.0).collect();
        let tau = 0.25 + rng.random::<f64>() * 9.75;
        // Self-distillation is exactly zero.
        assert_eq!(skd_loss(&logits, &logits, tau).unwrap(), 0.0);
        // The objective is exactly linear in the task balance.
        let (ce, kd) = (rng.random::<f64>() * 5.0, rng.random::<f64>() * 5.0);
        let lambda = rng.random::<f64>();
        let interpolated = student_objective(ce, kd, lambda).unwrap();
        let endpoints = lambda * student_objective(ce, kd, 1.0).unwrap()
            + (1.0 - lambda) * student_objective(ce, kd, 0.0).unwrap();
        assert!((interpolated - endpoints).abs() <= EXACT);
        // Softmax is invariant to a common logit shift.
        let shift = rng.random::<f64>() * 20.0 - 10.0;
        let shifted: Vec<f64> = logits.iter().map(|z| z + shift).collect();
        let a = softmax_with_temperature(&logits, tau).unwrap();
        let b = softmax_with_temperature(&shifted, tau).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= EXACT);
        }
        // Aggregation preserves normalization.
        let class_probs = aggregate_to_class(&a, &hierarchy).unwrap();
        assert!((class_probs.iter().sum::<f64>() - 1.0).abs() <= EXACT);
    }
    println!("ACCEPTANCE 6 (loss identities, 200 random draws, <= {EXACT:.0e}): PASS");
}

#[test]
fn criterion_7_distillation_ordering_on_benchmark() {
    let started = std::time::Instant::now();
    let cfg = DistillConfig { runs: 60, seed: 0, ..DistillConfig::default() };

    let report = run_experiment(&SyntheticSpec::benchmark(), &cfg, true).unwrap();
    let a = &report.aggregate;
    assert!(
        a.skd.mean_f1 >= a.kd.mean_f1 && a.kd.mean_f1 >= a.baseline.mean_f1,
        "ordering violated: skd {:.4}, kd {:.4}, baseline {:.4}",
        a.skd.mean_f1,
        a.kd.mean_f1,
        a.baseline.mean_f1
    );
    assert!(
        a.skd_vs_baseline.gap > 0.0 && a.skd_vs_baseline.significant,
        "subclass-distillation gain {:.4} does not exceed one pooled standard error {:.4}",
        a.skd_vs_baseline.gap,
        a.skd_vs_baseline.pooled_se
    );

    let degenerate = run_experiment(&SyntheticSpec::degenerate_benchmark(), &cfg, true).unwrap();
    let d = &degenerate.aggregate;
    assert!(
        d.skd_vs_kd.gap.abs() <= 2.0 * d.skd_vs_kd.pooled_se,
        "degenerate spec: skd-kd gap {:.4} outside 2 pooled standard errors {:.4}",
        d.skd_vs_kd.gap,
        d.skd_vs_kd.pooled_se
    );

    println!(
        "ACCEPTANCE 7 (60-run benchmark: baseline {:.4} <= kd {:.4} <= skd {:.4}, \
         skd-baseline {:+.4} = {:.1}x pooled se; degenerate skd-kd {:+.4} within 2 x {:.4}): PASS in {:?}",
        a.baseline.mean_f1,
        a.kd.mean_f1,
        a.skd.mean_f1,
        a.skd_vs_baseline.gap,
        a.skd_vs_baseline.gap / a.skd_vs_baseline.pooled_se,
        d.skd_vs_kd.gap,
        d.skd_vs_kd.pooled_se,
        started.elapsed()
    );
}

#[test]
fn criterion_8_experiment_determinism() {
    let started = std::time::Instant::now();
    let cfg = DistillConfig { runs: 6, seed: 7, ..DistillConfig::default() };
    let spec = SyntheticSpec::benchmark();
    let parallel_a = run_experiment(&spec, &cfg, true).unwrap();
    let parallel_b = run_experiment(&spec, &cfg, true).unwrap();
    let serial = run_experiment(&spec, &cfg, false).unwrap();
    let json_a = skd::report::to_canonical_json(&parallel_a).unwrap();
    let json_b = skd::report::to_canonical_json(&parallel_b).unwrap();
    let json_serial = skd::report::to_canonical_json(&serial).unwrap();
    assert_eq!(json_a, json_b, "repeated invocations differ");
    assert_eq!(json_a, json_serial, "parallel and serial execution differ");
    println!(
        "ACCEPTANCE 8 (byte-identical reports across invocations and parallel/serial, {} bytes): PASS in {:?}",
        json_a.len(),
        started.elapsed()
    );
}
