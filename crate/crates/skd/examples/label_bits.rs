//! Label-information-bit reports: how many bits per training sample a
//! teacher's labels can carry, for balanced, binary-detection, and general
//! multiclass settings.
//!
//!     cargo run -p skd --example label_bits

use skd::channel::ChannelMatrix;
use skd::labelbits::{
    analyze_confusion, label_bits_balanced, label_bits_binary_detection, label_bits_general,
    skd_information_gain, ClassHierarchy, TeacherAccuracy,
};

fn main() -> skd::Result<()> {
    // Balanced: every class has the same number of subclasses and samples.
    let balanced = label_bits_balanced(2, 2, 1.0, 1.0)?;
    println!(
        "perfect balanced teacher, 2 classes x 2 subclasses: {} bits/sample",
        balanced.total_bits
    );

    // Binary detection with a subclass-bearing null class: class bits from
    // the binary asymmetric channel, subclass bits weighted by the
    // capacity-achieving input.
    let hierarchy = ClassHierarchy::from_parts(&[
        ("hp", &[("hp_easy", 1081), ("hp_hard", 1081)]),
        ("ssa", &[("ssa", 990)]),
    ])?;
    let accuracy = TeacherAccuracy::new(vec![1.0, 0.96], vec![Some(0.97), None])?;
    let with_subclasses = label_bits_binary_detection(1.0, 0.96, &hierarchy, &accuracy)?;
    println!(
        "\nbinary detection (p0 = 1.00, p1 = 0.96, null class split 2 ways at 0.97):"
    );
    println!("  K        = {:.6}", with_subclasses.k_factor.unwrap());
    println!("  alpha*   = {:.6}", with_subclasses.alpha_star.unwrap());
    println!("  class    = {:.6} bits", with_subclasses.class_bits);
    println!("  subclass = {:.6} bits", with_subclasses.subclass_bits);
    println!("  total    = {:.6} bits", with_subclasses.total_bits);
    println!("  tight    = {} (sample frequencies vs capacity-achieving input)", with_subclasses.bound_tight);

    // Reference: the same task without any subclass structure, measured
    // from a class-label-only teacher's channel.
    let class_only_hierarchy = ClassHierarchy::from_parts(&[
        ("hp", &[("hp", 2162)]),
        ("ssa", &[("ssa", 990)]),
    ])?;
    let class_only_acc = TeacherAccuracy::new(vec![1.0, 0.94], vec![None, None])?;
    let class_only = label_bits_binary_detection(1.0, 0.94, &class_only_hierarchy, &class_only_acc)?;
    println!(
        "\nclass-only teacher (p0 = 1.00, p1 = 0.94): total = {:.6} bits",
        class_only.total_bits
    );
    println!(
        "subclass information gain: {:.6} bits/sample",
        skd_information_gain(&with_subclasses, &class_only)
    );

    // General multiclass with a different number of subclasses per class;
    // weights track training-sample counts.
    let multi = ClassHierarchy::from_parts(&[
        ("a", &[("a1", 100), ("a2", 100)]),
        ("b", &[("b1", 50), ("b2", 50), ("b3", 50)]),
        ("c", &[("c1", 150)]),
    ])?;
    let multi_acc = TeacherAccuracy::new(vec![0.9, 0.9, 0.9], vec![Some(0.95), Some(0.85), None])?;
    let general = label_bits_general(&multi, &multi_acc)?;
    println!("\n3-class hierarchy with subclass counts (2, 3, 1):");
    for term in &general.per_class_subclass_terms {
        println!(
            "  class {:<2} weight {:.3} subclass capacity {:.6} bits",
            term.class_id, term.weight, term.capacity_bits
        );
    }
    println!("  total = {:.6} bits", general.total_bits);

    // The same numbers fall out of empirical confusion matrices.
    let class_matrix = ChannelMatrix::new(vec![vec![1.0, 0.0], vec![0.04, 0.96]])?;
    let hp_matrix = ChannelMatrix::qary_symmetric(2, 0.97)?;
    let from_matrices =
        analyze_confusion(&class_matrix, &[Some(hp_matrix), None], &hierarchy, 0.0, false)?;
    println!(
        "\nfrom confusion matrices directly: total = {:.6} bits (matches {:.6})",
        from_matrices.total_bits, with_subclasses.total_bits
    );
    Ok(())
}
