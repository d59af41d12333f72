//! Cluster parameters and the two-dimensional state lattice.
//!
//! A cluster of `N` servers splits into `h` honest and `f` Byzantine machines.
//! Every server breaks down at rate `xi` and is repaired at rate `eta`, with
//! one repair in flight per group. A state tracks how many servers of each
//! group are currently up, so the chain lives on the lattice
//! `(i, j) in [0, h] x [0, f]`.

use crate::error::{Error, Result};

/// Cluster-level parameters: server count and the two exponential rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    n_servers: u32,
    breakdown_rate: f64,
    repair_rate: f64,
}

impl SystemConfig {
    /// A quorum-capable cluster needs at least four servers (three cannot
    /// outvote even a single Byzantine server).
    pub const MIN_SERVERS: u32 = 4;

    pub fn new(n_servers: u32, breakdown_rate: f64, repair_rate: f64) -> Result<Self> {
        if n_servers < Self::MIN_SERVERS {
            return Err(Error::InvalidConfig(format!(
                "cluster size {n_servers} is below the minimum of {}",
                Self::MIN_SERVERS
            )));
        }
        Self::with_any_size(n_servers, breakdown_rate, repair_rate)
    }

    /// Rate validation without the minimum-cluster rule. Small chains are
    /// useful for closed-form checks, so `Scenario::from_parts` routes here.
    pub(crate) fn with_any_size(n_servers: u32, breakdown_rate: f64, repair_rate: f64) -> Result<Self> {
        if !breakdown_rate.is_finite() || breakdown_rate <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "breakdown rate must be positive and finite, got {breakdown_rate}"
            )));
        }
        if !repair_rate.is_finite() || repair_rate <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "repair rate must be positive and finite, got {repair_rate}"
            )));
        }
        Ok(SystemConfig { n_servers, breakdown_rate, repair_rate })
    }

    /// No validation at all; exists so the CLI can demonstrate solver failure
    /// on a deliberately degenerate system.
    #[doc(hidden)]
    pub fn new_unchecked(n_servers: u32, breakdown_rate: f64, repair_rate: f64) -> Self {
        SystemConfig { n_servers, breakdown_rate, repair_rate }
    }

    pub fn n_servers(&self) -> u32 {
        self.n_servers
    }

    pub fn breakdown_rate(&self) -> f64 {
        self.breakdown_rate
    }

    pub fn repair_rate(&self) -> f64 {
        self.repair_rate
    }

    /// Breakdown-to-repair ratio `xi / eta`.
    pub fn ratio(&self) -> f64 {
        self.breakdown_rate / self.repair_rate
    }

    /// The model targets clusters where breakdowns are much rarer than
    /// repairs. Ratios at or above one are accepted but worth flagging.
    pub fn stability_warning(&self) -> Option<String> {
        (self.ratio() >= 1.0).then(|| {
            format!(
                "breakdown/repair ratio {} is >= 1; servers fail faster than they are repaired \
                 and availability will be near zero",
                self.ratio()
            )
        })
    }
}

/// One concrete chain: a cluster split into `h` honest and `f` Byzantine
/// servers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    config: SystemConfig,
    honest_count: u32,
    byzantine_count: u32,
}

/// Split a cluster for a given Byzantine server count.
pub fn build_scenario(config: &SystemConfig, byzantine_count: u32) -> Result<Scenario> {
    if byzantine_count > config.n_servers() {
        return Err(Error::InvalidConfig(format!(
            "byzantine count {byzantine_count} exceeds cluster size {}",
            config.n_servers()
        )));
    }
    Ok(Scenario {
        config: *config,
        honest_count: config.n_servers() - byzantine_count,
        byzantine_count,
    })
}

impl Scenario {
    /// Build directly from `(h, f)` counts, bypassing the minimum-cluster rule
    /// but keeping rate validation. Intended for small test chains.
    pub fn from_parts(honest_count: u32, byzantine_count: u32, breakdown_rate: f64, repair_rate: f64) -> Result<Self> {
        let config = SystemConfig::with_any_size(honest_count + byzantine_count, breakdown_rate, repair_rate)?;
        Ok(Scenario { config, honest_count, byzantine_count })
    }

    /// No validation at all; see [`SystemConfig::new_unchecked`].
    #[doc(hidden)]
    pub fn from_parts_unchecked(honest_count: u32, byzantine_count: u32, breakdown_rate: f64, repair_rate: f64) -> Self {
        Scenario {
            config: SystemConfig::new_unchecked(honest_count + byzantine_count, breakdown_rate, repair_rate),
            honest_count,
            byzantine_count,
        }
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn honest_count(&self) -> u32 {
        self.honest_count
    }

    pub fn byzantine_count(&self) -> u32 {
        self.byzantine_count
    }

    pub fn total_servers(&self) -> u32 {
        self.honest_count + self.byzantine_count
    }

    pub fn breakdown_rate(&self) -> f64 {
        self.config.breakdown_rate()
    }

    pub fn repair_rate(&self) -> f64 {
        self.config.repair_rate()
    }

    /// Number of lattice states, `(h + 1) * (f + 1)`.
    pub fn state_count(&self) -> usize {
        (self.honest_count as usize + 1) * (self.byzantine_count as usize + 1)
    }

    /// All states in flat-index order.
    pub fn states(&self) -> impl Iterator<Item = StateIndex> + '_ {
        let f = self.byzantine_count;
        (0..=self.honest_count)
            .flat_map(move |i| (0..=f).map(move |j| StateIndex { honest_up: i, byzantine_up: j }))
    }
}

/// Lattice coordinates of one state: up counts per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateIndex {
    pub honest_up: u32,
    pub byzantine_up: u32,
}

impl StateIndex {
    /// Row-major flat index with the honest coordinate outermost:
    /// `i * (f + 1) + j` for a chain with `f` Byzantine servers.
    pub fn flat(&self, byzantine_total: u32) -> usize {
        self.honest_up as usize * (byzantine_total as usize + 1) + self.byzantine_up as usize
    }

    pub fn from_flat(flat: usize, byzantine_total: u32) -> StateIndex {
        let width = byzantine_total as usize + 1;
        StateIndex {
            honest_up: (flat / width) as u32,
            byzantine_up: (flat % width) as u32,
        }
    }
}
