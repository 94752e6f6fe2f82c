//! Command-line interface: capacity queries, label-bits analysis, the
//! distillation simulation, and the gradient self-check.
//!
//! Exit codes are a stable scripting contract: 0 success, 1 check failure,
//! 2 input error, 3 model-mismatch (a confusion matrix outside every
//! supported channel pattern at the requested tolerance).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::{self, BA_DEFAULT_MAX_ITER, BA_DEFAULT_TOL};
use crate::channel::{ChannelMatrix, DEFAULT_CLASSIFY_TOL};
use crate::distill::{
    gradient_check, run_experiment, DistillConfig, GradCheckSample, ToyNet,
};
use crate::error::Error;
use crate::labelbits::{analyze_confusion, skd_information_gain, ClassHierarchy};
use crate::report::{
    confusion_heatmap_svg, label_bits_table, to_canonical_json, write_atomic,
};
use crate::synthdata::SyntheticSpec;

pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_MODEL_MISMATCH: i32 = 3;

#[derive(Parser)]
#[command(
    name = "skd",
    version,
    about = "Label-bit capacity analysis and desk-scale subclass distillation"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a channel matrix and report closed-form and iterative capacity.
    Capacity(CapacityArgs),
    /// Label-bit analysis of class/subclass confusion matrices.
    Labelbits(LabelbitsArgs),
    /// Run the four-arm distillation experiment on a synthetic spec.
    Simulate(SimulateArgs),
    /// Check backpropagation against finite differences on random networks.
    Gradcheck(GradcheckArgs),
}

#[derive(Args)]
struct CapacityArgs {
    /// Channel matrix file (.csv: one row per line; .json: array of arrays).
    #[arg(long)]
    matrix: PathBuf,
    /// Structural classification tolerance (L∞).
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
    /// Accept and rescale rows that do not sum to 1.
    #[arg(long)]
    renormalize: bool,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct LabelbitsArgs {
    /// Class-level normalized confusion matrix file.
    #[arg(long)]
    class_matrix: PathBuf,
    /// Per-class subclass confusion matrix as CLASS_ID=PATH; repeat for
    /// every class with at least two subclasses.
    #[arg(long = "subclass-matrix", value_name = "CLASS_ID=PATH")]
    subclass_matrix: Vec<String>,
    /// Class confusion matrix of a teacher trained on class labels only,
    /// used as the reference for the information gain. Defaults to the
    /// task's own class matrix (gain then equals the subclass bits).
    #[arg(long)]
    baseline_class_matrix: Option<PathBuf>,
    /// Class hierarchy JSON file.
    #[arg(long)]
    hierarchy: PathBuf,
    /// Structural pattern tolerance for empirical matrices.
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
    tol: f64,
    /// Project matrices onto the nearest symmetric pattern instead of
    /// rejecting them when they fit none.
    #[arg(long)]
    project: bool,
    /// Accept and rescale rows that do not sum to 1.
    #[arg(long)]
    renormalize: bool,
    /// Directory for report files; omit to print to stdout only.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Output format: text or json (stdout; files always get both).
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// Synthetic dataset spec JSON; or use --builtin.
    #[arg(long, conflicts_with = "builtin")]
    spec: Option<PathBuf>,
    /// Built-in spec: "benchmark" or "degenerate".
    #[arg(long)]
    builtin: Option<String>,
    /// Training/distillation config JSON; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config run count.
    #[arg(long)]
    runs: Option<usize>,
    /// Output directory for the report and matrices.
    #[arg(long, default_value = "skd-out")]
    out_dir: PathBuf,
    /// Run the independent runs one after another instead of in parallel
    /// (results are identical either way).
    #[arg(long)]
    serial: bool,
    /// Comma-separated outputs: json,csv,text,svg.
    #[arg(long, default_value = "json,csv,text,svg")]
    format: String,
}

#[derive(Args)]
struct GradcheckArgs {
    /// Training/distillation config JSON (temperature, task balance, seed).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of random network/sample cases.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum tolerated relative error.
    #[arg(long, default_value_t = 1e-5)]
    max_rel_error: f64,
}

/// An error carrying the process exit code.
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

type CliResult<T> = std::result::Result<T, CliFailure>;

fn input_err(message: impl Into<String>) -> CliFailure {
    CliFailure { code: EXIT_INPUT_ERROR, message: message.into() }
}

fn from_error(e: Error) -> CliFailure {
    let code = match e {
        Error::PatternMismatch(_) => EXIT_MODEL_MISMATCH,
        _ => EXIT_INPUT_ERROR,
    };
    CliFailure { code, message: e.to_string() }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests print and exit cleanly.
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Capacity(a) => cmd_capacity(&a),
        Command::Labelbits(a) => cmd_labelbits(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Gradcheck(a) => cmd_gradcheck(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_matrix(path: &Path, renormalize: bool) -> CliResult<ChannelMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|ext| ext == "json") {
        ChannelMatrix::from_json_str(&text, renormalize)
    } else {
        ChannelMatrix::from_csv_str(&text, renormalize)
    };
    parsed.map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn cmd_capacity(args: &CapacityArgs) -> CliResult<i32> {
    if args.tol < 0.0 {
        return Err(input_err("--tol must be non-negative"));
    }
    let matrix = read_matrix(&args.matrix, args.renormalize)?;
    let (kind, closed) = capacity::closed_form(&matrix, args.tol);
    let iterative = capacity::blahut_arimoto(&matrix, BA_DEFAULT_TOL, BA_DEFAULT_MAX_ITER)
        .map_err(from_error)?;
    let discrepancy = closed.as_ref().map(|c| (c.capacity - iterative.capacity).abs());

    match args.format.as_str() {
        "json" => {
            let mut payload = BTreeMap::new();
            payload.insert("kind", serde_json::to_value(&kind).map_err(|e| input_err(e.to_string()))?);
            payload.insert(
                "closed_form",
                serde_json::to_value(&closed).map_err(|e| input_err(e.to_string()))?,
            );
            payload.insert(
                "iterative",
                serde_json::to_value(&iterative).map_err(|e| input_err(e.to_string()))?,
            );
            payload.insert(
                "discrepancy",
                serde_json::to_value(discrepancy).map_err(|e| input_err(e.to_string()))?,
            );
            print!("{}", to_canonical_json(&payload).map_err(from_error)?);
        }
        "text" => {
            println!("channel kind:        {kind}");
            match &closed {
                Some(c) => {
                    println!("closed-form capacity: {:.6} bits", c.capacity);
                }
                None => println!("closed-form capacity: (none for this family)"),
            }
            println!(
                "iterative capacity:   {:.6} bits ({} iterations)",
                iterative.capacity, iterative.iterations
            );
            if let Some(d) = discrepancy {
                println!("discrepancy:          {d:.3e}");
            }
            let opt: Vec<String> = iterative
                .optimal_input
                .as_slice()
                .iter()
                .map(|p| format!("{p:.6}"))
                .collect();
            println!("optimal input:        [{}]", opt.join(", "));
        }
        other => return Err(input_err(format!("unknown format '{other}'"))),
    }
    Ok(0)
}

fn cmd_labelbits(args: &LabelbitsArgs) -> CliResult<i32> {
    if args.tol < 0.0 {
        return Err(input_err("--tol must be non-negative"));
    }
    let hierarchy_text = std::fs::read_to_string(&args.hierarchy)
        .map_err(|e| input_err(format!("{}: {e}", args.hierarchy.display())))?;
    let hierarchy = ClassHierarchy::from_json_str(&hierarchy_text).map_err(from_error)?;
    let class_matrix = read_matrix(&args.class_matrix, args.renormalize)?;

    let mut per_class: Vec<Option<ChannelMatrix>> = vec![None; hierarchy.n_classes()];
    for entry in &args.subclass_matrix {
        let (class_id, path) = entry
            .split_once('=')
            .ok_or_else(|| input_err(format!("--subclass-matrix '{entry}' is not CLASS_ID=PATH")))?;
        let index = hierarchy
            .class_index(class_id)
            .ok_or_else(|| input_err(format!("unknown class '{class_id}' in --subclass-matrix")))?;
        per_class[index] = Some(read_matrix(Path::new(path), args.renormalize)?);
    }

    let report =
        analyze_confusion(&class_matrix, &per_class, &hierarchy, args.tol, args.project)
            .map_err(from_error)?;
    let baseline_matrix = match &args.baseline_class_matrix {
        Some(path) => read_matrix(path, args.renormalize)?,
        None => class_matrix.clone(),
    };
    let class_only_hierarchy = hierarchy.collapse_subclasses();
    let none_slots: Vec<Option<ChannelMatrix>> = vec![None; hierarchy.n_classes()];
    let class_only = analyze_confusion(
        &baseline_matrix,
        &none_slots,
        &class_only_hierarchy,
        args.tol,
        args.project,
    )
    .map_err(from_error)?;
    let gain = skd_information_gain(&report, &class_only);

    let table = label_bits_table(&[
        ("with subclasses".to_string(), &report),
        ("class only".to_string(), &class_only),
    ]);
    let text = format!("{table}\nsubclass information gain: {gain:.6} bits/sample\n");

    let mut payload = BTreeMap::new();
    payload.insert("report", serde_json::to_value(&report).map_err(|e| input_err(e.to_string()))?);
    payload.insert(
        "class_only",
        serde_json::to_value(&class_only).map_err(|e| input_err(e.to_string()))?,
    );
    payload.insert(
        "information_gain_bits",
        serde_json::to_value(gain).map_err(|e| input_err(e.to_string()))?,
    );
    let json = to_canonical_json(&payload).map_err(from_error)?;

    match args.format.as_str() {
        "json" => print!("{json}"),
        "text" => print!("{text}"),
        other => return Err(input_err(format!("unknown format '{other}'"))),
    }
    if let Some(dir) = &args.out_dir {
        write_atomic(&dir.join("labelbits.json"), &json).map_err(from_error)?;
        write_atomic(&dir.join("labelbits.txt"), &text).map_err(from_error)?;
    }
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult<i32> {
    let spec = match (&args.spec, &args.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            SyntheticSpec::from_json_str(&text).map_err(from_error)?
        }
        (None, Some(name)) => match name.as_str() {
            "benchmark" => SyntheticSpec::benchmark(),
            "degenerate" => SyntheticSpec::degenerate_benchmark(),
            other => return Err(input_err(format!("unknown builtin spec '{other}'"))),
        },
        (None, None) => return Err(input_err("pass --spec FILE or --builtin NAME")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            DistillConfig::from_json_str(&text).map_err(from_error)?
        }
        None => DistillConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(runs) = args.runs {
        config.runs = runs;
    }
    config.validate().map_err(from_error)?;

    let formats: std::collections::BTreeSet<&str> =
        args.format.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    for f in &formats {
        if !matches!(*f, "json" | "csv" | "text" | "svg") {
            return Err(input_err(format!("unknown format '{f}'")));
        }
    }

    let report = run_experiment(&spec, &config, !args.serial).map_err(from_error)?;

    let dir = &args.out_dir;
    if formats.contains("json") {
        let json = to_canonical_json(&report).map_err(from_error)?;
        write_atomic(&dir.join("report.json"), &json).map_err(from_error)?;
    }
    let class_ids: Vec<String> =
        spec.hierarchy.class_ids().iter().map(|s| s.to_string()).collect();
    let subclass_ids: Vec<String> =
        spec.hierarchy.subclass_ids().iter().map(|s| s.to_string()).collect();
    let matrices: [(&str, &ChannelMatrix, &[String]); 6] = [
        ("teacher_class", &report.confusion.teacher_class, &class_ids),
        ("teacher_subclass", &report.confusion.teacher_subclass, &subclass_ids),
        ("baseline_class", &report.confusion.baseline_class, &class_ids),
        ("kd_class", &report.confusion.kd_class, &class_ids),
        ("skd_class", &report.confusion.skd_class, &class_ids),
        ("skd_subclass", &report.confusion.skd_subclass, &subclass_ids),
    ];
    if formats.contains("csv") {
        for (name, matrix, _) in &matrices {
            write_atomic(&dir.join(format!("confusion_{name}.csv")), &matrix.to_csv_string())
                .map_err(from_error)?;
        }
    }
    if formats.contains("svg") {
        for (name, matrix, labels) in &matrices {
            let svg = confusion_heatmap_svg(
                matrix,
                labels,
                labels,
                &format!("mean test confusion: {}", name.replace('_', " ")),
            );
            write_atomic(&dir.join(format!("confusion_{name}.svg")), &svg).map_err(from_error)?;
        }
    }
    let summary = simulate_summary(&report);
    if formats.contains("text") {
        write_atomic(&dir.join("summary.txt"), &summary).map_err(from_error)?;
    }
    print!("{summary}");
    Ok(0)
}

fn simulate_summary(report: &crate::distill::ExperimentReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let agg = &report.aggregate;
    let _ = writeln!(out, "runs: {}  (seed {})", report.config.runs, report.config.seed);
    let _ = writeln!(out, "arm        mean F1    std F1     mean accuracy");
    let _ = writeln!(out, "---------------------------------------------");
    for (name, stats) in [
        ("teacher", &agg.teacher),
        ("baseline", &agg.baseline),
        ("kd", &agg.kd),
        ("skd", &agg.skd),
    ] {
        let _ = writeln!(
            out,
            "{name:<9}  {:.6}   {:.6}   {:.6}",
            stats.mean_f1, stats.std_f1, stats.mean_accuracy
        );
    }
    for (name, gap) in [
        ("skd - baseline", &agg.skd_vs_baseline),
        ("skd - kd      ", &agg.skd_vs_kd),
        ("kd - baseline ", &agg.kd_vs_baseline),
    ] {
        let _ = writeln!(
            out,
            "{name}: {:+.6} (pooled se {:.6}, {})",
            gap.gap,
            gap.pooled_se,
            if gap.significant { "significant" } else { "not significant" }
        );
    }
    let _ = writeln!(
        out,
        "teacher label bits (best run {}): {:.6} with subclasses, {:.6} class-only, gain {:.6}",
        report.best_teacher_run,
        report.label_bits.total_bits,
        report.label_bits_class_only.total_bits,
        report.label_bits_gain
    );
    out
}

fn cmd_gradcheck(args: &GradcheckArgs) -> CliResult<i32> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            DistillConfig::from_json_str(&text).map_err(from_error)?
        }
        None => DistillConfig::default(),
    };
    let seed = args.seed.unwrap_or(config.seed);
    if args.cases == 0 {
        return Err(input_err("--cases must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0x6c);

    let mut worst = 0.0f64;
    let mut worst_desc = String::new();
    for case in 0..args.cases {
        let input_dim = rng.random_range(2..6);
        let width = rng.random_range(2..5);
        let hidden = rng.random_range(3..9);
        let student = ToyNet::new(input_dim, &[hidden], width, &mut rng);
        let teacher = ToyNet::new(input_dim, &[hidden * 2], width, &mut rng);
        let features: Vec<f64> =
            (0..input_dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let label = rng.random_range(0..width);
        // Alternate the pure CE path, the pure distillation path, and the
        // mixed objective.
        let (tau, lambda) = match case % 4 {
            0 => (1.0, 1.0),
            1 => (config.temperature, 0.0),
            2 => (1.0, 0.0),
            _ => (config.temperature, config.task_balance),
        };
        let err = gradient_check(
            &student,
            &teacher,
            GradCheckSample { features: &features, label },
            tau,
            lambda,
            args.eps,
        )
        .map_err(from_error)?;
        if err > worst {
            worst = err;
            worst_desc = format!(
                "case {case}: dims {input_dim}->[{hidden}]->{width}, tau {tau}, lambda {lambda}"
            );
        }
    }
    println!(
        "gradcheck: {} cases, eps {:.1e}, max relative error {:.3e}",
        args.cases, args.eps, worst
    );
    if worst <= args.max_rel_error {
        Ok(0)
    } else {
        println!("worst case: {worst_desc}");
        Ok(EXIT_CHECK_FAILURE)
    }
}
