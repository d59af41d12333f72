//! Solve one scenario end to end: build the balance matrix, compute the
//! stationary distribution with both solver routes, and report availability.
//!
//! Run with `cargo run --example solve_single`.

use bft_avail::availability::{availability, quorum_threshold};
use bft_avail::generator::build_generator;
use bft_avail::model::{build_scenario, SystemConfig};
use bft_avail::report::format_sig;
use bft_avail::solver::{solve_replaced_equation, solve_svd};

fn main() -> bft_avail::Result<()> {
    // 16 servers, 2 of them Byzantine, breaking down at 1.5% of the repair
    // rate. Availability is the long-run fraction of time more than 2N/3
    // honest servers are up.
    let config = SystemConfig::new(16, 0.015, 1.0)?;
    let scenario = build_scenario(&config, 2)?;
    println!(
        "N={} f={} honest={} states={} quorum threshold={}",
        config.n_servers(),
        scenario.byzantine_count(),
        scenario.honest_count(),
        scenario.state_count(),
        quorum_threshold(config.n_servers())?,
    );

    let generator = build_generator(&scenario);
    println!("conservation residual = {:.2e}", generator.conservation_residual());

    let via_svd = solve_svd(&generator)?;
    let via_lu = solve_replaced_equation(&generator)?;
    let worst_gap = via_svd
        .probabilities()
        .iter()
        .zip(via_lu.probabilities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("solver routes agree within {worst_gap:.2e}");

    let result = availability(&via_svd);
    println!("availability = {}", format_sig(result.availability));

    // The most likely states: everything up, or one honest server down.
    let mut ranked: Vec<_> = scenario.states().map(|s| (via_svd.probability(s), s)).collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    println!("top states by stationary mass:");
    for (p, s) in ranked.iter().take(3) {
        println!("  (honest up {}, byzantine up {}) -> {}", s.honest_up, s.byzantine_up, format_sig(*p));
    }
    Ok(())
}
