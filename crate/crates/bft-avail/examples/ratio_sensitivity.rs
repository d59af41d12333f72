//! Show how availability degrades as servers break down faster relative to
//! repairs: one column per breakdown/repair ratio, fault count fixed to a
//! sixth of the cluster.
//!
//! Run with `cargo run --example ratio_sensitivity`.

use bft_avail::availability::{sweep_ratio, SweepOptions};
use bft_avail::dist::Preset;

fn main() -> bft_avail::Result<()> {
    let table = sweep_ratio(
        4..=20,
        &[0.01, 0.015, 0.02],
        Preset::Fig3Degenerate,
        &SweepOptions::default(),
    )?;
    print!("{}", table.csv_string());

    // Every row degrades monotonically as the ratio grows.
    for (row, n) in table.n_values().iter().enumerate() {
        let values: Vec<f64> = table.columns().iter().map(|c| c.values[row]).collect();
        assert!(values.windows(2).all(|w| w[0] >= w[1]), "N={n}: {values:?}");
    }
    println!("\nall rows non-increasing in the ratio");
    Ok(())
}
