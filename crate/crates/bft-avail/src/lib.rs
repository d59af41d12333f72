//! Steady-state availability of Byzantine fault-tolerant server clusters.
//!
//! A cluster of `N` servers, `f` of them Byzantine, commits requests only
//! while more than `2N/3` honest servers are up. Servers break down
//! independently at rate `xi` and two repair facilities (one per group)
//! restore them at rate `eta`, which yields a continuous-time Markov chain on
//! the lattice of (honest up, Byzantine up) pairs. This crate builds the
//! chain's balance equations, solves for the stationary distribution, and
//! reports:
//!
//! * per-scenario availability: the stationary mass of quorum-capable states
//!   ([`availability`]);
//! * mean availability when the Byzantine count is itself random, under
//!   uniform, right-truncated Poisson, binomial, or degenerate fault-count
//!   distributions ([`mean_availability`], [`dist`]);
//! * sweep tables over cluster size and breakdown/repair ratio, serialized as
//!   CSV with gnuplot script generation ([`sweep_n`], [`sweep_ratio`],
//!   [`report`]);
//! * an independent discrete-event simulation of the same chain for
//!   end-to-end validation ([`simulate`]).
//!
//! Two solver routes (SVD null space and a replaced-equation LU solve) are
//! implemented independently and cross-checked in the test suite. The
//! `bft-avail` binary exposes the same pipeline as a small CLI; the
//! `examples/` directory shows each capability as a runnable program.

pub mod availability;
pub mod dist;
pub mod error;
pub mod generator;
pub mod model;
pub mod report;
pub mod sim;
pub mod solver;
pub mod tolerances;

pub use availability::{
    availability, max_tolerated_faults, mean_availability, mean_availability_with,
    quorum_threshold, sweep_n, sweep_ratio, AvailabilityResult, FaultTerm,
    MeanAvailabilityResult, SweepColumn, SweepOptions, SweepTable,
};
pub use dist::{FaultDistribution, FaultKind, LocationRounding, Preset};
pub use error::{Error, Result};
pub use generator::{build_generator, GeneratorMatrix};
pub use model::{build_scenario, Scenario, StateIndex, SystemConfig};
pub use sim::{simulate, transition_rates, SimConfig, SimEstimate};
pub use solver::{solve, solve_replaced_equation, solve_svd, SolverKind, StationaryDistribution};
