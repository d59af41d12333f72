//! Validate the analytic pipeline against the discrete-event simulation:
//! estimate availability empirically and compare with the solver's value.
//!
//! Run with `cargo run --example simulate_vs_analytic`.

use bft_avail::availability::availability;
use bft_avail::generator::build_generator;
use bft_avail::model::{build_scenario, SystemConfig};
use bft_avail::report::format_sig;
use bft_avail::sim::{simulate, SimConfig};
use bft_avail::solver::{solve, SolverKind};

fn main() -> bft_avail::Result<()> {
    let config = SystemConfig::new(16, 0.015, 1.0)?;
    let scenario = build_scenario(&config, 2)?;

    let analytic = availability(&solve(&build_generator(&scenario), SolverKind::Auto)?);
    let sim = simulate(&SimConfig::new(scenario, 50_000.0, 7, 16)?)?;

    println!("analytic  = {}", format_sig(analytic.availability));
    println!("simulated = {} (SE {:.2e})", format_sig(sim.mean_availability), sim.standard_error);
    let z = (sim.mean_availability - analytic.availability) / sim.standard_error;
    println!("z-score   = {z:.2}");
    assert!(z.abs() <= 4.0, "simulation disagrees with the analytic value");

    println!("\nper-replication means:");
    for (i, m) in sim.replication_means.iter().enumerate() {
        println!("  rep {i:>2}: {}", format_sig(*m));
    }
    Ok(())
}
