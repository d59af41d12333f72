//! Average availability over a random Byzantine count and inspect the
//! per-count breakdown, including the counts the quorum rule cannot tolerate.
//!
//! Run with `cargo run --example mean_availability`.

use bft_avail::availability::{max_tolerated_faults, mean_availability};
use bft_avail::dist::Preset;
use bft_avail::model::SystemConfig;
use bft_avail::report::format_sig;

fn main() -> bft_avail::Result<()> {
    let config = SystemConfig::new(12, 0.015, 1.0)?;
    println!(
        "N={} tolerates up to {} Byzantine servers",
        config.n_servers(),
        max_tolerated_faults(config.n_servers())?
    );

    for preset in [Preset::Fig3Uniform, Preset::Fig3Poisson, Preset::Fig3Binomial] {
        let dist = preset.build(config.n_servers())?;
        let result = mean_availability(&config, &dist)?;
        println!("\n{} ({}):", preset.name(), result.distribution);
        println!("  mean availability = {}", format_sig(result.mean_availability));
        for term in &result.breakdown {
            let a = match term.availability {
                None => "skipped (no mass)".to_string(),
                Some(a) => format_sig(a),
            };
            println!(
                "  f={:>2}  p={:<18}  A={}",
                term.byzantine_count,
                format!("{:.6}", term.probability),
                a
            );
        }
    }
    Ok(())
}
