//! Compare the four fault-count distributions across cluster sizes at a
//! fixed breakdown/repair ratio, writing a CSV and a gnuplot script.
//!
//! The degenerate distribution (an exactly known fault count) gives the best
//! mean availability; the uniform distribution, which wastes mass on counts
//! the quorum rule cannot tolerate, gives the worst.
//!
//! Run with `cargo run --example distribution_comparison`. Pass a larger
//! `--n-max` to the CLI `sweep` subcommand for the full picture.

use bft_avail::availability::{sweep_n, SweepOptions};
use bft_avail::dist::Preset;
use bft_avail::report::{parse_csv, plot_script, write_atomic};

fn main() -> bft_avail::Result<()> {
    let presets =
        [Preset::Fig3Uniform, Preset::Fig3Poisson, Preset::Fig3Binomial, Preset::Fig3Degenerate];
    let table = sweep_n(4..=24, 0.015, &presets, &SweepOptions::default())?;

    let csv = table.csv_string();
    print!("{csv}");

    let out = std::env::temp_dir().join("distribution_comparison.csv");
    write_atomic(&out, &csv)?;
    let (header, rows) = parse_csv(&csv)?;
    let script = std::env::temp_dir().join("distribution_comparison.gp");
    write_atomic(&script, &plot_script(&header, &rows, "mean availability", 1.0))?;
    println!("\nwrote {} and {}", out.display(), script.display());
    Ok(())
}
