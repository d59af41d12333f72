//! Tour the four fault-count distribution families and their moments, plus
//! the named presets used by the sweep drivers.
//!
//! Run with `cargo run --example fault_distributions`.

use bft_avail::dist::{self, Preset};

fn describe(d: &bft_avail::FaultDistribution) {
    println!("{}", d.label());
    println!("  mean = {:.6}, variance = {:.6}", d.mean(), d.variance());
    let mass: Vec<String> = (0..=d.upper_bound()).map(|f| format!("{:.4}", d.pmf(f))).collect();
    println!("  pmf  = [{}]", mass.join(", "));
}

fn main() -> bft_avail::Result<()> {
    let n = 12;
    describe(&dist::uniform(0, n)?);
    describe(&dist::right_truncated_poisson(n as f64 / 6.0, n)?);
    describe(&dist::binomial(n, 1.0 / 6.0)?);
    describe(&dist::degenerate(n / 6));

    println!("\npresets at N = {n}:");
    for preset in Preset::ALL {
        let d = preset.build(n)?;
        println!("  {:<16} -> {} (mean {:.4})", preset.name(), d.label(), d.mean());
    }
    Ok(())
}
