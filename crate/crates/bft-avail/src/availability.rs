//! Availability measures and sweep drivers.
//!
//! A cluster of `N` servers commits only when more than `2N/3` honest servers
//! are up. [`availability`] totals the stationary probability of those
//! quorum-capable states for one fixed Byzantine count; [`mean_availability`]
//! averages that over a fault-count distribution. The sweep drivers evaluate
//! grids over cluster size and breakdown/repair ratio and serialize to CSV.
//!
//! Counts with `f >= N/3` admit no quorum state at all, so their mass
//! multiplies an availability of exactly zero. That mass is deliberately not
//! renormalized away; a distribution that puts weight on intolerable counts
//! earns a lower mean.

use std::collections::HashMap;
use std::io::{self, Write};
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::dist::{FaultDistribution, LocationRounding, Preset};
use crate::error::{Error, Result};
use crate::generator::build_generator;
use crate::model::{Scenario, SystemConfig};
use crate::solver::{solve, SolverKind, StationaryDistribution};

/// Smallest head count that wins a vote: the least `t` with `t > 2n/3`.
pub fn quorum_threshold(n: u32) -> Result<u32> {
    min_cluster(n)?;
    Ok(threshold_for(n))
}

/// Largest Byzantine count the quorum rule survives: the largest `f < n/3`.
pub fn max_tolerated_faults(n: u32) -> Result<u32> {
    min_cluster(n)?;
    Ok(tolerated_for(n))
}

fn min_cluster(n: u32) -> Result<()> {
    if n < SystemConfig::MIN_SERVERS {
        return Err(Error::InvalidConfig(format!(
            "quorum rule needs at least {} servers, got {n}",
            SystemConfig::MIN_SERVERS
        )));
    }
    Ok(())
}

pub(crate) fn threshold_for(n: u32) -> u32 {
    2 * n / 3 + 1
}

fn tolerated_for(n: u32) -> u32 {
    n.div_ceil(3) - 1
}

/// Availability of one scenario, with the threshold that defined it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvailabilityResult {
    pub scenario: Scenario,
    /// Stationary probability of all states with a committing quorum up.
    pub availability: f64,
    pub quorum_threshold: u32,
}

/// Total the stationary mass of states whose honest-up count reaches the
/// quorum threshold. Zero when the threshold exceeds the honest group size.
pub fn availability(dist: &StationaryDistribution) -> AvailabilityResult {
    let sc = dist.scenario();
    let threshold = threshold_for(sc.total_servers());
    let mass: f64 = sc
        .states()
        .filter(|s| s.honest_up >= threshold)
        .map(|s| dist.probability(s))
        .sum();
    // An empty sum is -0.0 (the additive identity); the trailing add
    // normalizes the zero sign and must stay after the min, whose lowering
    // is allowed to ignore zero signs and elide a preceding `+ 0.0`.
    AvailabilityResult {
        scenario: *sc,
        availability: mass.min(1.0) + 0.0,
        quorum_threshold: threshold,
    }
}

/// One fault count's contribution to a mean availability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultTerm {
    pub byzantine_count: u32,
    /// Mass the fault-count distribution puts on this count.
    pub probability: f64,
    /// `None` when the count carries no mass and was skipped; `Some(0.0)`
    /// for counts beyond the tolerated maximum (no solve needed).
    pub availability: Option<f64>,
}

/// Availability averaged over a fault-count distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanAvailabilityResult {
    pub config: SystemConfig,
    /// Label of the fault-count distribution that was averaged over.
    pub distribution: String,
    pub mean_availability: f64,
    pub breakdown: Vec<FaultTerm>,
}

/// [`mean_availability_with`] using the automatic solver choice.
pub fn mean_availability(
    config: &SystemConfig,
    dist: &FaultDistribution,
) -> Result<MeanAvailabilityResult> {
    mean_availability_with(config, dist, SolverKind::Auto)
}

/// Average the per-count availabilities `A(N - f, f)` under `dist`.
///
/// Counts with zero mass are skipped outright; counts past the tolerated
/// maximum contribute zero without a solve. The remaining cells run in
/// parallel. Solver failures come back annotated with the `(N, f)` cell.
pub fn mean_availability_with(
    config: &SystemConfig,
    dist: &FaultDistribution,
    solver: SolverKind,
) -> Result<MeanAvailabilityResult> {
    let n = config.n_servers();
    if dist.upper_bound() > n {
        return Err(Error::InvalidDistribution(format!(
            "distribution support reaches {} but the cluster has {n} servers",
            dist.upper_bound()
        )));
    }
    let tolerated = max_tolerated_faults(n)?;
    let breakdown: Vec<FaultTerm> = (0..=dist.upper_bound())
        .into_par_iter()
        .map(|f| {
            let probability = dist.pmf(f);
            let availability = if probability == 0.0 {
                None
            } else if f > tolerated {
                Some(0.0)
            } else {
                Some(cell_availability(n, f, config.breakdown_rate(), config.repair_rate(), solver)?)
            };
            Ok(FaultTerm { byzantine_count: f, probability, availability })
        })
        .collect::<Result<_>>()?;
    let mean: f64 = breakdown
        .iter()
        .map(|t| t.probability * t.availability.unwrap_or(0.0))
        .sum();
    Ok(MeanAvailabilityResult {
        config: *config,
        distribution: dist.label().to_string(),
        mean_availability: mean.clamp(0.0, 1.0),
        breakdown,
    })
}

/// Solve one `(n, f)` cell and return its availability.
pub(crate) fn cell_availability(
    n: u32,
    f: u32,
    breakdown_rate: f64,
    repair_rate: f64,
    solver: SolverKind,
) -> Result<f64> {
    let run = || -> Result<f64> {
        let sc = Scenario::from_parts(n - f, f, breakdown_rate, repair_rate)?;
        let stationary = solve(&build_generator(&sc), solver)?;
        Ok(availability(&stationary).availability)
    };
    run().map_err(|e| Error::SweepCell { n, f, source: Box::new(e) })
}

/// Solver and rounding choices shared by the sweep drivers.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub solver: SolverKind,
    /// How presets with a fractional degenerate location round it.
    pub rounding: LocationRounding,
}

impl Default for SweepOptions {
    /// Replaced-equation solves: sweeps visit large lattices where the full
    /// decomposition is needlessly slow, and the cross-checks live in tests.
    fn default() -> Self {
        SweepOptions { solver: SolverKind::ReplacedEquation, rounding: LocationRounding::Floor }
    }
}

/// One named series of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepColumn {
    pub name: String,
    pub values: Vec<f64>,
}

/// Rectangular sweep result: one row per cluster size, one value column per
/// series.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    n_values: Vec<u32>,
    columns: Vec<SweepColumn>,
}

impl SweepTable {
    pub fn new(n_values: Vec<u32>, columns: Vec<SweepColumn>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidConfig("sweep table needs at least one column".into()));
        }
        for c in &columns {
            if c.values.len() != n_values.len() {
                return Err(Error::InvalidConfig(format!(
                    "column {} has {} values for {} rows",
                    c.name,
                    c.values.len(),
                    n_values.len()
                )));
            }
        }
        Ok(SweepTable { n_values, columns })
    }

    pub fn n_values(&self) -> &[u32] {
        &self.n_values
    }

    pub fn columns(&self) -> &[SweepColumn] {
        &self.columns
    }

    /// CSV with header `N,<col>,...`, rows ascending in N, and values
    /// rendered with 12 significant digits.
    pub fn csv_string(&self) -> String {
        let mut out = String::from("N");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for (row, n) in self.n_values.iter().enumerate() {
            out.push_str(&n.to_string());
            for c in &self.columns {
                out.push(',');
                out.push_str(&crate::report::format_sig(c.values[row]));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(self.csv_string().as_bytes())
    }
}

/// Mean availability per cluster size, one column per preset, at a fixed
/// breakdown/repair ratio (the repair rate is pinned to one; only the ratio
/// matters).
///
/// Availability cells depend on `(N, f)` but not on the distribution, so each
/// cell is solved once and shared by every column.
pub fn sweep_n(
    n_range: RangeInclusive<u32>,
    ratio: f64,
    presets: &[Preset],
    opts: &SweepOptions,
) -> Result<SweepTable> {
    validate_range(&n_range)?;
    validate_ratio(ratio)?;
    if presets.is_empty() {
        return Err(Error::InvalidConfig("no distributions selected".into()));
    }
    for (i, p) in presets.iter().enumerate() {
        if presets[..i].contains(p) {
            return Err(Error::InvalidConfig(format!("duplicate distribution: {p}")));
        }
    }

    let ns: Vec<u32> = n_range.collect();
    let mut dists: Vec<Vec<FaultDistribution>> = Vec::with_capacity(ns.len());
    for &n in &ns {
        dists.push(
            presets.iter().map(|p| p.build_with(n, opts.rounding)).collect::<Result<_>>()?,
        );
    }

    let cells = solve_cells(
        ns.iter().zip(&dists).flat_map(|(&n, row)| {
            needed_counts(n, row).into_iter().map(move |f| (n, f, ratio))
        }),
        opts.solver,
    )?;

    let columns = presets
        .iter()
        .enumerate()
        .map(|(ci, p)| SweepColumn {
            name: p.name().to_string(),
            values: ns
                .iter()
                .enumerate()
                .map(|(ri, &n)| weighted_mean(n, &dists[ri][ci], |f| cells[&key(n, f, ratio)]))
                .collect(),
        })
        .collect();
    SweepTable::new(ns, columns)
}

/// Mean availability per cluster size for one preset, one column per
/// breakdown/repair ratio.
pub fn sweep_ratio(
    n_range: RangeInclusive<u32>,
    ratios: &[f64],
    preset: Preset,
    opts: &SweepOptions,
) -> Result<SweepTable> {
    validate_range(&n_range)?;
    if ratios.is_empty() {
        return Err(Error::InvalidConfig("no ratios selected".into()));
    }
    for (i, r) in ratios.iter().enumerate() {
        validate_ratio(*r)?;
        if ratios[..i].contains(r) {
            return Err(Error::InvalidConfig(format!("duplicate ratio: {r}")));
        }
    }

    let ns: Vec<u32> = n_range.collect();
    let mut dists: Vec<FaultDistribution> = Vec::with_capacity(ns.len());
    for &n in &ns {
        dists.push(preset.build_with(n, opts.rounding)?);
    }

    let cells = solve_cells(
        ns.iter().zip(&dists).flat_map(|(&n, d)| {
            let counts = needed_counts(n, std::slice::from_ref(d));
            ratios.iter().flat_map(move |&r| {
                counts.clone().into_iter().map(move |f| (n, f, r))
            })
        }),
        opts.solver,
    )?;

    let columns = ratios
        .iter()
        .map(|&r| SweepColumn {
            name: format!("{r}"),
            values: ns
                .iter()
                .enumerate()
                .map(|(ri, &n)| weighted_mean(n, &dists[ri], |f| cells[&key(n, f, r)]))
                .collect(),
        })
        .collect();
    SweepTable::new(ns, columns)
}

fn validate_range(n_range: &RangeInclusive<u32>) -> Result<()> {
    if n_range.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "empty cluster-size range {}..={}",
            n_range.start(),
            n_range.end()
        )));
    }
    min_cluster(*n_range.start())
}

fn validate_ratio(ratio: f64) -> Result<()> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "breakdown/repair ratio must be positive and finite, got {ratio}"
        )));
    }
    Ok(())
}

/// Fault counts that actually need a solve for cluster size `n`: within the
/// tolerated range and carrying mass under at least one distribution.
fn needed_counts(n: u32, dists: &[FaultDistribution]) -> Vec<u32> {
    let tolerated = tolerated_for(n);
    (0..=tolerated).filter(|&f| dists.iter().any(|d| d.pmf(f) > 0.0)).collect()
}

/// Keyed by `(n, f, ratio bits)`; ratios arrive from a finite user list, so
/// bit-exact keying is safe.
fn key(n: u32, f: u32, ratio: f64) -> (u32, u32, u64) {
    (n, f, ratio.to_bits())
}

fn solve_cells(
    work: impl Iterator<Item = (u32, u32, f64)>,
    solver: SolverKind,
) -> Result<HashMap<(u32, u32, u64), f64>> {
    let work: Vec<(u32, u32, f64)> = work.collect();
    work.into_par_iter()
        .map(|(n, f, ratio)| Ok((key(n, f, ratio), cell_availability(n, f, ratio, 1.0, solver)?)))
        .collect()
}

/// Mean over the distribution given solved cells; mass beyond the tolerated
/// range multiplies zero.
fn weighted_mean(n: u32, dist: &FaultDistribution, cell: impl Fn(u32) -> f64) -> f64 {
    let tolerated = tolerated_for(n);
    let mean: f64 = (0..=dist.upper_bound().min(tolerated))
        .filter(|&f| dist.pmf(f) > 0.0)
        .map(|f| dist.pmf(f) * cell(f))
        .sum();
    // An empty sum is -0.0 (the additive identity); the trailing add
    // normalizes the zero sign (see `availability`).
    mean.clamp(0.0, 1.0) + 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist;
    use crate::tolerances::BREAKDOWN_CONSISTENCY_ABS;

    fn config(n: u32) -> SystemConfig {
        SystemConfig::new(n, 0.015, 1.0).unwrap()
    }

    #[test]
    fn quorum_thresholds() {
        assert_eq!(quorum_threshold(4).unwrap(), 3);
        assert_eq!(quorum_threshold(6).unwrap(), 5);
        assert_eq!(quorum_threshold(16).unwrap(), 11);
        assert!(quorum_threshold(3).is_err());
    }

    #[test]
    fn tolerated_fault_counts() {
        assert_eq!(max_tolerated_faults(4).unwrap(), 1);
        assert_eq!(max_tolerated_faults(6).unwrap(), 1);
        assert_eq!(max_tolerated_faults(7).unwrap(), 2);
        assert!(max_tolerated_faults(3).is_err());
    }

    fn solve_availability(n: u32, f: u32) -> f64 {
        cell_availability(n, f, 0.015, 1.0, SolverKind::Auto).unwrap()
    }

    #[test]
    fn below_quorum_capacity_is_exactly_zero() {
        // N=4, f=2: threshold 3 exceeds the two honest servers. Positive
        // zero, not the -0.0 an empty sum produces.
        assert_eq!(solve_availability(4, 2).to_bits(), 0);
    }

    #[test]
    fn four_servers_all_honest() {
        let a = solve_availability(4, 0);
        assert!((a - 0.997382140046).abs() < 1e-11, "{a}");
    }

    #[test]
    fn uniform_mean_over_four_servers() {
        let d = dist::uniform(0, 4).unwrap();
        let r = mean_availability(&config(4), &d).unwrap();
        assert!((r.mean_availability - 0.390613360658).abs() < 1e-11, "{}", r.mean_availability);

        // Only f = 0 and f = 1 admit a quorum; the mean is their average
        // under the five equal weights.
        let direct = (solve_availability(4, 0) + solve_availability(4, 1)) / 5.0;
        assert!((r.mean_availability - direct).abs() < 1e-12);
    }

    #[test]
    fn breakdown_recomputes_the_mean() {
        let d = dist::Preset::Fig4Binomial.build(8).unwrap();
        let r = mean_availability(&config(8), &d).unwrap();
        let recomputed: f64 = r
            .breakdown
            .iter()
            .map(|t| t.probability * t.availability.unwrap_or(0.0))
            .sum();
        assert!((r.mean_availability - recomputed).abs() < BREAKDOWN_CONSISTENCY_ABS);
        assert!((0.0..=1.0).contains(&r.mean_availability));
    }

    #[test]
    fn degenerate_mass_is_passed_through() {
        let d = dist::degenerate(1);
        let r = mean_availability(&config(4), &d).unwrap();
        assert_eq!(r.mean_availability, solve_availability(4, 1));

        let d = dist::degenerate(2);
        let r = mean_availability(&config(4), &d).unwrap();
        assert_eq!(r.mean_availability, 0.0);
    }

    #[test]
    fn breakdown_marks_skipped_and_intolerable_counts() {
        let d = dist::uniform(2, 3).unwrap();
        let r = mean_availability(&config(4), &d).unwrap();
        assert_eq!(r.mean_availability, 0.0);
        let by_f: Vec<Option<f64>> = r.breakdown.iter().map(|t| t.availability).collect();
        // f = 0, 1 carry no mass; f = 2, 3 exceed the tolerated single fault.
        assert_eq!(by_f, vec![None, None, Some(0.0), Some(0.0)]);
    }

    #[test]
    fn support_exceeding_cluster_is_rejected() {
        let d = dist::uniform(0, 8).unwrap();
        assert!(matches!(
            mean_availability(&config(4), &d),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn singleton_sweep_matches_direct_mean() {
        let t = sweep_n(4..=4, 0.015, &[Preset::Fig3Uniform], &SweepOptions::default()).unwrap();
        let d = dist::uniform(0, 4).unwrap();
        let direct =
            mean_availability_with(&config(4), &d, SolverKind::ReplacedEquation).unwrap();
        assert_eq!(t.n_values(), &[4]);
        assert_eq!(t.columns().len(), 1);
        assert_eq!(t.columns()[0].name, "fig3_uniform");
        assert_eq!(t.columns()[0].values[0], direct.mean_availability);
    }

    // The reversed range is the point of the test: it is what the CLI
    // produces for `--n-min 8 --n-max 4` and must be rejected, not iterated.
    #[allow(clippy::reversed_empty_ranges)]
    #[test]
    fn sweep_rejects_bad_input() {
        let opts = SweepOptions::default();
        assert!(sweep_n(4..=8, 0.015, &[], &opts).is_err());
        assert!(sweep_n(4..=8, 0.015, &[Preset::Fig3Uniform, Preset::Fig3Uniform], &opts).is_err());
        assert!(sweep_n(4..=8, 0.0, &[Preset::Fig3Uniform], &opts).is_err());
        assert!(sweep_n(4..=8, f64::NAN, &[Preset::Fig3Uniform], &opts).is_err());
        assert!(sweep_n(3..=8, 0.015, &[Preset::Fig3Uniform], &opts).is_err());
        assert!(sweep_n(8..=4, 0.015, &[Preset::Fig3Uniform], &opts).is_err());
        assert!(sweep_ratio(4..=8, &[], Preset::Fig3Degenerate, &opts).is_err());
        assert!(sweep_ratio(4..=8, &[0.01, 0.01], Preset::Fig3Degenerate, &opts).is_err());
        assert!(sweep_ratio(4..=8, &[-0.01], Preset::Fig3Degenerate, &opts).is_err());
    }

    #[test]
    fn ratio_sweep_degrades_with_the_ratio() {
        let t = sweep_ratio(
            4..=8,
            &[0.01, 0.015, 0.02],
            Preset::Fig3Degenerate,
            &SweepOptions::default(),
        )
        .unwrap();
        assert_eq!(t.columns().len(), 3);
        assert_eq!(t.columns()[0].name, "0.01");
        for row in 0..t.n_values().len() {
            let vals: Vec<f64> = t.columns().iter().map(|c| c.values[row]).collect();
            assert!(vals[0] >= vals[1] - 1e-12 && vals[1] >= vals[2] - 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn csv_layout() {
        let table = SweepTable::new(
            vec![4, 5],
            vec![
                SweepColumn { name: "a".into(), values: vec![0.5, 0.25] },
                SweepColumn { name: "b".into(), values: vec![1.0, 0.0] },
            ],
        )
        .unwrap();
        let csv = table.csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("N,a,b"));
        assert_eq!(lines.next(), Some("4,5.00000000000e-1,1.00000000000e0"));
        assert_eq!(lines.next(), Some("5,2.50000000000e-1,0.00000000000e0"));
        assert_eq!(lines.next(), None);

        assert!(SweepTable::new(vec![4], vec![]).is_err());
        assert!(SweepTable::new(
            vec![4, 5],
            vec![SweepColumn { name: "a".into(), values: vec![0.5] }]
        )
        .is_err());
    }
}
