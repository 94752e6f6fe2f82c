//! Structural classification of channel matrices, with and without a
//! tolerance for empirical noise.
//!
//!     cargo run -p skd --example classify_channel

use skd::channel::{ChannelMatrix, DEFAULT_CLASSIFY_TOL};

fn main() -> skd::Result<()> {
    let exact: Vec<(&str, ChannelMatrix)> = vec![
        ("identity 2x2", ChannelMatrix::qary_symmetric(2, 1.0)?),
        ("Z(0.94)", ChannelMatrix::z(0.94)?),
        ("BSC(0.2)", ChannelMatrix::bsc(0.2)?),
        ("BAC(0.9, 0.8)", ChannelMatrix::bac(0.9, 0.8)?),
        ("5-ary symmetric (0.7)", ChannelMatrix::qary_symmetric(5, 0.7)?),
        (
            "circulant 3x3",
            ChannelMatrix::new(vec![
                vec![0.5, 0.3, 0.2],
                vec![0.2, 0.5, 0.3],
                vec![0.3, 0.2, 0.5],
            ])?,
        ),
        (
            "weakly symmetric 4x4",
            ChannelMatrix::new(vec![
                vec![0.5, 0.3, 0.2, 0.0],
                vec![0.5, 0.3, 0.0, 0.2],
                vec![0.0, 0.2, 0.5, 0.3],
                vec![0.0, 0.2, 0.3, 0.5],
            ])?,
        ),
        (
            "general 3x3",
            ChannelMatrix::new(vec![
                vec![0.7, 0.2, 0.1],
                vec![0.1, 0.6, 0.3],
                vec![0.3, 0.3, 0.4],
            ])?,
        ),
    ];
    println!("exact constructions (tolerance 0):");
    for (name, matrix) in &exact {
        println!("  {name:<24} -> {}", matrix.classify(0.0));
    }

    // An empirical confusion matrix wobbles around the ideal pattern; the
    // default tolerance absorbs the wobble and extracts the projected
    // parameters.
    let empirical = ChannelMatrix::new(vec![vec![0.993, 0.007], vec![0.052, 0.948]])?;
    println!("\nempirical matrix rows: {:?} / {:?}", empirical.row(0), empirical.row(1));
    println!("  tolerance 0      -> {}", empirical.classify(0.0));
    println!(
        "  tolerance {DEFAULT_CLASSIFY_TOL} -> {}",
        empirical.classify(DEFAULT_CLASSIFY_TOL)
    );
    Ok(())
}
