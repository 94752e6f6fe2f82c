//! One seeded training round: subclass teacher, then a small student
//! distilled from it, evaluated at the class level.
//!
//!     cargo run --release -p skd --example distill_run

use skd::distill::{distill_student, evaluate, train_teacher, DistillConfig};
use skd::synthdata::{generate, Split, SyntheticSpec};

fn main() -> skd::Result<()> {
    let spec = SyntheticSpec::benchmark();
    let cfg = DistillConfig { seed: 7, ..DistillConfig::default() };
    let data = generate(&spec, cfg.seed)?;

    let teacher = train_teacher(&data, &cfg)?;
    let teacher_train = evaluate(&teacher, &data, &spec.hierarchy, "ssa", Split::Train)?;
    let teacher_test = evaluate(&teacher, &data, &spec.hierarchy, "ssa", Split::Test)?;
    println!(
        "teacher ({} params): train F1 {:.4}, test F1 {:.4}",
        teacher.param_count(),
        teacher_train.f1,
        teacher_test.f1
    );

    let student = distill_student(&teacher, &data, &cfg)?;
    let student_test = evaluate(&student, &data, &spec.hierarchy, "ssa", Split::Test)?;
    println!(
        "student ({} params, tau {}, lambda {}): test F1 {:.4}, precision {:.4}, recall {:.4}",
        student.param_count(),
        cfg.temperature,
        cfg.task_balance,
        student_test.f1,
        student_test.precision,
        student_test.recall
    );

    println!("\nstudent class confusion (rows = true class, normalized):");
    for (i, row) in student_test.class_confusion.rows().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.4}")).collect();
        println!("  {:<4} [{}]", data.class_ids[i], cells.join(", "));
    }
    println!("\nstudent subclass confusion:");
    for (i, row) in student_test.subclass_confusion.rows().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.4}")).collect();
        println!("  {:<9} [{}]", data.subclass_ids[i], cells.join(", "));
    }
    Ok(())
}
