//! Inspect the balance-equation matrix itself: stencil structure, flow
//! conservation, irreducibility, and a sparse triplet export for external
//! tooling.
//!
//! Run with `cargo run --example generator_export`.

use std::io::Write;

use bft_avail::generator::build_generator;
use bft_avail::model::{build_scenario, SystemConfig};

fn main() -> bft_avail::Result<()> {
    let config = SystemConfig::new(7, 0.015, 1.0)?;
    let scenario = build_scenario(&config, 2)?;
    let generator = build_generator(&scenario);

    println!(
        "lattice (honest 0..={}, byzantine 0..={}): {} states",
        scenario.honest_count(),
        scenario.byzantine_count(),
        generator.dimension()
    );
    println!("conservation residual = {:.2e}", generator.conservation_residual());
    println!("max nonzeros per row  = {}", generator.max_row_nonzeros());
    println!("irreducible           = {}", generator.is_irreducible());
    println!("row scale (inf norm)  = {}", generator.row_scale());

    println!("\ntriplets (row col value):");
    let mut out = Vec::new();
    generator.write_triplets(&mut out)?;
    std::io::stdout().write_all(&out)?;
    Ok(())
}
