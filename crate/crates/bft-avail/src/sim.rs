//! Discrete-event simulation of the availability chain.
//!
//! An independent verification path for the analytic pipeline: each
//! replication walks the same transition structure the balance matrix
//! encodes, drawing exponential holding times with the current state's total
//! out-rate and picking the next transition proportionally to its rate, then
//! time-averages quorum availability after a warmup. Replications use
//! separate, deterministic random streams derived from `(seed, replication)`,
//! so results are reproducible and independent of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::Exp;
use rayon::prelude::*;

use crate::availability::threshold_for;
use crate::error::{Error, Result};
use crate::model::{Scenario, StateIndex};

/// Simulation parameters.
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    scenario: Scenario,
    horizon: f64,
    warmup: f64,
    seed: u64,
    replications: u32,
}

impl SimConfig {
    /// Default warmup: one percent of the horizon. The walk starts all-up,
    /// which biases early time toward availability; the chain mixes fast at
    /// the ratios of interest, so a short warmup is enough.
    pub fn new(scenario: Scenario, horizon: f64, seed: u64, replications: u32) -> Result<Self> {
        Self::with_warmup(scenario, horizon, 0.01 * horizon, seed, replications)
    }

    pub fn with_warmup(
        scenario: Scenario,
        horizon: f64,
        warmup: f64,
        seed: u64,
        replications: u32,
    ) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "simulation horizon must be positive and finite, got {horizon}"
            )));
        }
        if !warmup.is_finite() || warmup < 0.0 || warmup >= horizon {
            return Err(Error::InvalidConfig(format!(
                "warmup must lie in [0, horizon), got {warmup} for horizon {horizon}"
            )));
        }
        if replications == 0 {
            return Err(Error::InvalidConfig("at least one replication is required".into()));
        }
        Ok(SimConfig { scenario, horizon, warmup, seed, replications })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn warmup(&self) -> f64 {
        self.warmup
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replications(&self) -> u32 {
        self.replications
    }
}

/// Replication-averaged estimate with its spread.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub mean_availability: f64,
    /// Sample standard deviation of the replication means over
    /// `sqrt(replications)`; zero for a single replication.
    pub standard_error: f64,
    pub replication_means: Vec<f64>,
}

/// Outgoing transitions of `state`: target and rate, mirroring the balance
/// matrix stencil (repairs at the repair rate while a group is degraded, one
/// slot per group; breakdowns at the per-node rate times the up count).
pub fn transition_rates(scenario: &Scenario, state: StateIndex) -> Vec<(StateIndex, f64)> {
    let mut rates = Vec::with_capacity(4);
    push_rates(scenario, state, &mut rates);
    rates
}

fn push_rates(scenario: &Scenario, state: StateIndex, rates: &mut Vec<(StateIndex, f64)>) {
    let (i, j) = (state.honest_up, state.byzantine_up);
    let (h, f) = (scenario.honest_count(), scenario.byzantine_count());
    let (xi, eta) = (scenario.breakdown_rate(), scenario.repair_rate());
    if i < h {
        rates.push((StateIndex { honest_up: i + 1, byzantine_up: j }, eta));
    }
    if j < f {
        rates.push((StateIndex { honest_up: i, byzantine_up: j + 1 }, eta));
    }
    if i > 0 {
        rates.push((StateIndex { honest_up: i - 1, byzantine_up: j }, i as f64 * xi));
    }
    if j > 0 {
        rates.push((StateIndex { honest_up: i, byzantine_up: j - 1 }, j as f64 * xi));
    }
}

/// Run all replications (in parallel) and aggregate.
pub fn simulate(cfg: &SimConfig) -> Result<SimEstimate> {
    let means: Vec<f64> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep))
        .collect::<Result<_>>()?;
    let r = means.len() as f64;
    let mean = means.iter().sum::<f64>() / r;
    let standard_error = if means.len() > 1 {
        let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
        (var / r).sqrt()
    } else {
        0.0
    };
    Ok(SimEstimate { mean_availability: mean, standard_error, replication_means: means })
}

fn run_replication(cfg: &SimConfig, rep: u32) -> Result<f64> {
    let sc = &cfg.scenario;
    let threshold = threshold_for(sc.total_servers());
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep as u64);

    let mut state =
        StateIndex { honest_up: sc.honest_count(), byzantine_up: sc.byzantine_count() };
    let mut rates: Vec<(StateIndex, f64)> = Vec::with_capacity(4);
    let mut now = 0.0_f64;
    let mut available = 0.0_f64;

    while now < cfg.horizon {
        rates.clear();
        push_rates(sc, state, &mut rates);
        let total: f64 = rates.iter().map(|(_, r)| r).sum();
        if total <= 0.0 {
            return Err(Error::Simulation(format!(
                "state ({}, {}) has no outgoing transition",
                state.honest_up, state.byzantine_up
            )));
        }
        let dwell = rng.sample(
            Exp::new(total).map_err(|e| Error::Simulation(format!("bad holding rate: {e}")))?,
        );
        let leave = (now + dwell).min(cfg.horizon);
        if state.honest_up >= threshold {
            let begin = now.max(cfg.warmup);
            if leave > begin {
                available += leave - begin;
            }
        }
        now += dwell;
        if now >= cfg.horizon {
            break;
        }
        let mut u = rng.gen_range(0.0..total);
        let mut next = rates[rates.len() - 1].0;
        for (target, rate) in &rates {
            if u < *rate {
                next = *target;
                break;
            }
            u -= *rate;
        }
        state = next;
    }
    Ok(available / (cfg.horizon - cfg.warmup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::build_generator;

    #[test]
    fn config_validation() {
        let sc = Scenario::from_parts(3, 1, 0.015, 1.0).unwrap();
        assert!(SimConfig::new(sc, 0.0, 1, 4).is_err());
        assert!(SimConfig::new(sc, -10.0, 1, 4).is_err());
        assert!(SimConfig::new(sc, f64::NAN, 1, 4).is_err());
        assert!(SimConfig::new(sc, 100.0, 1, 0).is_err());
        assert!(SimConfig::with_warmup(sc, 100.0, 100.0, 1, 4).is_err());
        assert!(SimConfig::with_warmup(sc, 100.0, -1.0, 1, 4).is_err());
        let cfg = SimConfig::new(sc, 200.0, 1, 4).unwrap();
        assert_eq!(cfg.warmup(), 2.0);
    }

    #[test]
    fn rate_table_matches_the_balance_matrix() {
        // Rate of s -> t must equal the negated inflow entry the matrix
        // stores at (row t, column s); the total out-rate must match the
        // diagonal.
        for (h, f) in [(1, 0), (3, 1), (2, 2), (0, 3)] {
            let sc = Scenario::from_parts(h, f, 0.37, 2.9).unwrap();
            let g = build_generator(&sc);
            let q = g.matrix();
            for s in sc.states() {
                let rates = transition_rates(&sc, s);
                let mut total = 0.0;
                for (t, rate) in &rates {
                    assert_eq!(q[[t.flat(f), s.flat(f)]], -rate, "{s:?} -> {t:?}");
                    total += rate;
                }
                assert!((q[[s.flat(f), s.flat(f)]] - total).abs() < 1e-12, "{s:?}");
            }
        }
    }

    #[test]
    fn two_state_long_run_fraction() {
        let (xi, eta) = (0.015, 1.0);
        let sc = Scenario::from_parts(1, 0, xi, eta).unwrap();
        let cfg = SimConfig::new(sc, 50_000.0, 42, 8).unwrap();
        let est = simulate(&cfg).unwrap();
        let exact = eta / (xi + eta);
        assert!(est.standard_error > 0.0);
        assert!(
            (est.mean_availability - exact).abs() <= 3.0 * est.standard_error,
            "estimate {} vs exact {exact} with SE {}",
            est.mean_availability,
            est.standard_error
        );
    }

    #[test]
    fn same_seed_reproduces_the_estimate() {
        let sc = Scenario::from_parts(3, 1, 0.015, 1.0).unwrap();
        let cfg = SimConfig::new(sc, 5_000.0, 7, 4).unwrap();
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
        let other = SimConfig::new(sc, 5_000.0, 8, 4).unwrap();
        assert_ne!(simulate(&cfg).unwrap(), simulate(&other).unwrap());
    }

    #[test]
    fn doubling_the_horizon_stays_within_error_bars() {
        let sc = Scenario::from_parts(3, 1, 0.015, 1.0).unwrap();
        let short = simulate(&SimConfig::new(sc, 8_000.0, 11, 8).unwrap()).unwrap();
        let long = simulate(&SimConfig::new(sc, 16_000.0, 11, 8).unwrap()).unwrap();
        let combined = (short.standard_error.powi(2) + long.standard_error.powi(2)).sqrt();
        assert!(
            (short.mean_availability - long.mean_availability).abs() <= 3.0 * combined,
            "{} vs {} with combined SE {combined}",
            short.mean_availability,
            long.mean_availability
        );
    }

    #[test]
    fn stuck_state_is_an_error() {
        let sc = Scenario::from_parts_unchecked(0, 0, 0.015, 1.0);
        let cfg = SimConfig::new(sc, 100.0, 1, 1).unwrap();
        assert!(matches!(simulate(&cfg), Err(Error::Simulation(_))));
    }
}
