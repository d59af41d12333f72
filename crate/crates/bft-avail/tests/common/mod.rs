//! Closed-form oracles shared by the integration tests. Everything here is
//! computed independently of the library's linear-algebra path so the two
//! sides can disagree.
#![allow(dead_code)]

use statrs::function::gamma::{gamma_ur, ln_gamma};

/// Stationary weights of one machine-repairman group: `m` machines, a single
/// repair slot, per-machine breakdown rate `1` and repair rate `rho`. The
/// weight of `k` machines up is proportional to `rho^k / k!`, evaluated in
/// log space so large `m` and `rho` stay finite.
pub fn birth_death_weights(rho: f64, m: u32) -> Vec<f64> {
    let logs: Vec<f64> =
        (0..=m).map(|k| k as f64 * rho.ln() - ln_gamma(k as f64 + 1.0)).collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Stationary law of the two-group lattice as the product of the marginal
/// group laws, in flat `i * (f + 1) + j` order.
pub fn product_form(h: u32, f: u32, rho: f64) -> Vec<f64> {
    let honest = birth_death_weights(rho, h);
    let byzantine = birth_death_weights(rho, f);
    let mut out = Vec::with_capacity(honest.len() * byzantine.len());
    for wi in &honest {
        for wj in &byzantine {
            out.push(wi * wj);
        }
    }
    out
}

/// Closed-form availability of an all-honest cluster of `h` servers: the
/// probability that at least `2h/3 + 1` of them are up.
pub fn quorum_tail(h: u32, rho: f64) -> f64 {
    let threshold = (2 * h / 3 + 1) as usize;
    birth_death_weights(rho, h)[threshold..].iter().sum()
}

/// Mean of the right-truncated Poisson on `{0, .., n}` via the regularized
/// upper incomplete gamma function, avoiding the pmf summation the library
/// uses.
pub fn truncated_poisson_mean_gamma(lambda: f64, n: u32) -> f64 {
    let nf = n as f64;
    let log_tail =
        nf * lambda.ln() - lambda - nf.ln() - ln_gamma(nf) - gamma_ur(nf, lambda).ln();
    lambda / (1.0 + log_tail.exp())
}
