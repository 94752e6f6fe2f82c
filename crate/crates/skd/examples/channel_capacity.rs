//! Closed-form channel capacities cross-checked against the iterative
//! Blahut–Arimoto solver.
//!
//!     cargo run -p skd --example channel_capacity

use skd::capacity;
use skd::channel::ChannelMatrix;

fn main() -> skd::Result<()> {
    println!("{:<28} {:>12} {:>12} {:>12}", "channel", "closed form", "iterative", "|diff|");

    let cases: Vec<(String, ChannelMatrix, capacity::CapacityResult)> = vec![
        (
            "Z(0.94)".into(),
            ChannelMatrix::z(0.94)?,
            capacity::z(0.94)?,
        ),
        (
            "BAC(0.94, 0.89)".into(),
            ChannelMatrix::bac(0.94, 0.89)?,
            capacity::bac(0.94, 0.89)?,
        ),
        (
            "BSC(0.11)".into(),
            ChannelMatrix::bsc(0.11)?,
            capacity::bac(0.11, 0.11)?,
        ),
        (
            "4-ary symmetric (0.86)".into(),
            ChannelMatrix::qary_symmetric(4, 0.86)?,
            capacity::qary_symmetric(4, 0.86)?,
        ),
        (
            "useless BSC(0.5)".into(),
            ChannelMatrix::bsc(0.5)?,
            capacity::bac(0.5, 0.5)?,
        ),
    ];

    for (name, matrix, closed) in &cases {
        let iterative = capacity::blahut_arimoto(matrix, 1e-10, 1_000_000)?;
        println!(
            "{name:<28} {:>12.6} {:>12.6} {:>12.3e}",
            closed.capacity,
            iterative.capacity,
            (closed.capacity - iterative.capacity).abs()
        );
    }

    // The capacity-achieving input of a Z-channel puts less than half the
    // mass on the noisy input, approaching 1/e for very noisy channels.
    println!("\nZ-channel capacity-achieving input mass on the noisy symbol:");
    for p1 in [1.0, 0.94, 0.82, 0.5, 0.1, 0.01] {
        let r = capacity::z(p1)?;
        println!("  p1 = {p1:<5} -> alpha* = {:.6}", r.optimal_input[1]);
    }
    Ok(())
}
