//! Fault-count distributions.
//!
//! Four families describe how many of a cluster's servers are Byzantine:
//! uniform over an integer range, Poisson right-truncated at the cluster
//! size, binomial, and degenerate (a fixed count). Mass functions are
//! evaluated in log-space and exponentiated after subtracting the largest
//! log-term, so large parameters (say a truncated Poisson with `lambda = 64`
//! over `0..=128`) stay finite.
//!
//! [`Preset`] carries the named parameterizations the CLI and the sweep
//! drivers accept: the `fig3_*` family centers the fault count around `N/6`,
//! the `fig4_*` family around `N/2`.

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Distribution family plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaultKind {
    Uniform { lower: u32, upper: u32 },
    RightTruncatedPoisson { lambda: f64, upper: u32 },
    Binomial { trials: u32, success: f64 },
    Degenerate { location: u32 },
}

/// A validated fault-count distribution with a precomputed mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultDistribution {
    kind: FaultKind,
    upper_bound: u32,
    pmf: Vec<f64>,
    label: String,
}

/// Uniform over the integers `lower..=upper`.
pub fn uniform(lower: u32, upper: u32) -> Result<FaultDistribution> {
    if upper < lower {
        return Err(Error::InvalidDistribution(format!(
            "uniform upper bound {upper} below lower bound {lower}"
        )));
    }
    let weight = 1.0 / (upper - lower + 1) as f64;
    let pmf = (0..=upper).map(|f| if f >= lower { weight } else { 0.0 }).collect();
    Ok(FaultDistribution {
        kind: FaultKind::Uniform { lower, upper },
        upper_bound: upper,
        pmf,
        label: format!("uniform[{lower},{upper}]"),
    })
}

/// Poisson with rate `lambda`, truncated to `0..=upper` and renormalized.
pub fn right_truncated_poisson(lambda: f64, upper: u32) -> Result<FaultDistribution> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidDistribution(format!(
            "truncated Poisson needs a positive finite rate, got {lambda}"
        )));
    }
    let logs: Vec<f64> =
        (0..=upper).map(|f| f as f64 * lambda.ln() - ln_gamma(f as f64 + 1.0)).collect();
    Ok(FaultDistribution {
        kind: FaultKind::RightTruncatedPoisson { lambda, upper },
        upper_bound: upper,
        pmf: normalized_from_logs(&logs),
        label: format!("truncated-poisson(lambda={}, max={upper})", short(lambda)),
    })
}

/// Binomial with `trials` draws and per-draw success probability `success`.
pub fn binomial(trials: u32, success: f64) -> Result<FaultDistribution> {
    if !success.is_finite() || !(0.0..=1.0).contains(&success) {
        return Err(Error::InvalidDistribution(format!(
            "binomial success probability must lie in [0, 1], got {success}"
        )));
    }
    let pmf = if success == 0.0 || success == 1.0 {
        // All mass on one endpoint; the log form would need ln(0).
        let location = if success == 0.0 { 0 } else { trials };
        point_mass(location, trials)
    } else {
        let n = trials as f64;
        let logs: Vec<f64> = (0..=trials)
            .map(|f| {
                let k = f as f64;
                ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
                    + k * success.ln()
                    + (n - k) * (1.0 - success).ln()
            })
            .collect();
        normalized_from_logs(&logs)
    };
    Ok(FaultDistribution {
        kind: FaultKind::Binomial { trials, success },
        upper_bound: trials,
        pmf,
        label: format!("binomial(n={trials}, q={})", short(success)),
    })
}

/// All mass on the single count `location`.
pub fn degenerate(location: u32) -> FaultDistribution {
    FaultDistribution {
        kind: FaultKind::Degenerate { location },
        upper_bound: location,
        pmf: point_mass(location, location),
        label: format!("degenerate({location})"),
    }
}

/// Round to six decimals for labels; parameters keep full precision.
fn short(x: f64) -> f64 {
    if x.abs() >= 1e12 {
        x
    } else {
        (x * 1e6).round() / 1e6
    }
}

fn point_mass(location: u32, upper: u32) -> Vec<f64> {
    let mut pmf = vec![0.0; upper as usize + 1];
    pmf[location as usize] = 1.0;
    pmf
}

fn normalized_from_logs(logs: &[f64]) -> Vec<f64> {
    let shift = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = logs.iter().map(|l| (l - shift).exp()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}

impl FaultDistribution {
    pub fn kind(&self) -> &FaultKind {
        &self.kind
    }

    /// Largest count with (potentially) nonzero mass.
    pub fn upper_bound(&self) -> u32 {
        self.upper_bound
    }

    /// Mass at `count`; zero beyond the upper bound.
    pub fn pmf(&self, count: u32) -> f64 {
        self.pmf.get(count as usize).copied().unwrap_or(0.0)
    }

    /// Human-readable parameterization, used in reports and manifests.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mean by direct summation.
    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(f, p)| f as f64 * p).sum()
    }

    /// Variance by direct summation around the mean.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.pmf.iter().enumerate().map(|(f, p)| (f as f64 - mu).powi(2) * p).sum()
    }
}

/// How a non-integer degenerate location (`n/6` for `fig3_degenerate`) is
/// mapped to a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LocationRounding {
    /// Round towards zero (default).
    #[default]
    Floor,
    /// Round half up to the nearest integer.
    Nearest,
}

/// Named distribution parameterizations over a cluster of `n` servers.
///
/// The `fig3_*` presets model a lightly faulty population with mean fault
/// count `n/6`; the `fig4_*` presets a heavily faulty one with mean `n/2`.
/// Both uniform presets span the full range `0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig3Uniform,
    Fig3Poisson,
    Fig3Binomial,
    Fig3Degenerate,
    Fig4Uniform,
    Fig4Poisson,
    Fig4Binomial,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Fig3Uniform,
        Preset::Fig3Poisson,
        Preset::Fig3Binomial,
        Preset::Fig3Degenerate,
        Preset::Fig4Uniform,
        Preset::Fig4Poisson,
        Preset::Fig4Binomial,
    ];

    /// Identifier accepted by the CLI and used as a sweep column name.
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3Uniform => "fig3_uniform",
            Preset::Fig3Poisson => "fig3_poisson",
            Preset::Fig3Binomial => "fig3_binomial",
            Preset::Fig3Degenerate => "fig3_degenerate",
            Preset::Fig4Uniform => "fig4_uniform",
            Preset::Fig4Poisson => "fig4_poisson",
            Preset::Fig4Binomial => "fig4_binomial",
        }
    }

    /// Build the distribution for a cluster of `n` servers (floor rounding).
    pub fn build(self, n: u32) -> Result<FaultDistribution> {
        self.build_with(n, LocationRounding::Floor)
    }

    /// Build with an explicit rounding rule for the degenerate location.
    pub fn build_with(self, n: u32, rounding: LocationRounding) -> Result<FaultDistribution> {
        if n < crate::model::SystemConfig::MIN_SERVERS {
            return Err(Error::InvalidDistribution(format!(
                "presets need at least {} servers, got {n}",
                crate::model::SystemConfig::MIN_SERVERS
            )));
        }
        match self {
            Preset::Fig3Uniform | Preset::Fig4Uniform => uniform(0, n),
            Preset::Fig3Poisson => right_truncated_poisson(n as f64 / 6.0, n),
            Preset::Fig4Poisson => right_truncated_poisson(n as f64 / 2.0, n),
            Preset::Fig3Binomial => binomial(n, 1.0 / 6.0),
            Preset::Fig4Binomial => binomial(n, 0.5),
            Preset::Fig3Degenerate => {
                let location = match rounding {
                    LocationRounding::Floor => n / 6,
                    LocationRounding::Nearest => (n + 3) / 6,
                };
                Ok(degenerate(location))
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown distribution preset: {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{MOMENT_ABS, PMF_SUM_ABS};
    use num_bigint::BigInt;
    use num_rational::Ratio;
    use num_traits::{One, ToPrimitive, Zero};

    fn total(d: &FaultDistribution) -> f64 {
        (0..=d.upper_bound()).map(|f| d.pmf(f)).sum()
    }

    #[test]
    fn uniform_is_flat_inside_bounds() {
        let d = uniform(0, 4).unwrap();
        for f in 0..=4 {
            assert_eq!(d.pmf(f), 0.2);
        }
        assert_eq!(d.pmf(5), 0.0);

        let d = uniform(2, 5).unwrap();
        assert_eq!(d.pmf(0), 0.0);
        assert_eq!(d.pmf(1), 0.0);
        for f in 2..=5 {
            assert_eq!(d.pmf(f), 0.25);
        }
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(uniform(5, 2).is_err());
        assert!(right_truncated_poisson(0.0, 10).is_err());
        assert!(right_truncated_poisson(-1.0, 10).is_err());
        assert!(right_truncated_poisson(f64::NAN, 10).is_err());
        assert!(binomial(4, -0.1).is_err());
        assert!(binomial(4, 1.1).is_err());
        assert!(binomial(4, f64::NAN).is_err());
    }

    #[test]
    fn binomial_spot_value() {
        let d = binomial(4, 1.0 / 6.0).unwrap();
        let want = (5.0_f64 / 6.0).powi(4);
        assert!((d.pmf(0) - want).abs() < 1e-12, "{} vs {want}", d.pmf(0));
    }

    #[test]
    fn binomial_endpoint_success_probabilities() {
        let d = binomial(6, 0.0).unwrap();
        assert_eq!(d.pmf(0), 1.0);
        assert_eq!(d.mean(), 0.0);
        let d = binomial(6, 1.0).unwrap();
        assert_eq!(d.pmf(6), 1.0);
        assert_eq!(d.mean(), 6.0);
    }

    /// Exact-rational reference for the truncated Poisson with a rational
    /// rate p/q: scaling every term by q^n * n! makes numerator and
    /// normalizer integers, so the mass function is computed without any
    /// rounding at all and then compared against the log-space evaluation.
    fn exact_truncated_poisson(p: u32, q: u32, n: u32) -> Vec<f64> {
        let big = |v: u32| BigInt::from(v);
        let mut terms: Vec<BigInt> = Vec::with_capacity(n as usize + 1);
        for x in 0..=n {
            // p^x * q^(n-x) * n! / x!
            let mut t = big(p).pow(x) * big(q).pow(n - x);
            for k in (x + 1)..=n {
                t *= big(k);
            }
            terms.push(t);
        }
        let denom: BigInt = terms.iter().fold(BigInt::zero(), |a, b| a + b);
        terms
            .into_iter()
            .map(|t| Ratio::new(t, denom.clone()).to_f64().unwrap())
            .collect()
    }

    #[test]
    fn poisson_matches_exact_rational_evaluation() {
        for n in [4u32, 7, 12, 20] {
            for (p, q) in [(n, 6), (n, 2)] {
                let d = right_truncated_poisson(p as f64 / q as f64, n).unwrap();
                let exact = exact_truncated_poisson(p, q, n);
                for f in 0..=n {
                    assert!(
                        (d.pmf(f) - exact[f as usize]).abs() < 1e-13,
                        "n={n} lambda={p}/{q} f={f}: {} vs {}",
                        d.pmf(f),
                        exact[f as usize]
                    );
                }
            }
        }
        // Sanity on the reference itself: it must sum to one exactly.
        let exact = exact_truncated_poisson(20, 6, 20);
        assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let _ = BigInt::one();
    }

    #[test]
    fn large_rate_poisson_stays_finite_and_normalized() {
        let d = right_truncated_poisson(64.0, 128).unwrap();
        for f in 0..=128 {
            assert!(d.pmf(f).is_finite() && d.pmf(f) >= 0.0);
        }
        assert!((total(&d) - 1.0).abs() < PMF_SUM_ABS);
    }

    #[test]
    fn normalization_across_kinds() {
        let dists = [
            uniform(0, 37).unwrap(),
            right_truncated_poisson(6.5, 39).unwrap(),
            binomial(41, 0.37).unwrap(),
            degenerate(9),
        ];
        for d in &dists {
            assert!((total(d) - 1.0).abs() < PMF_SUM_ABS, "{}", d.label());
        }
    }

    /// Closed form for the truncated-Poisson mean in terms of the regularized
    /// upper incomplete gamma function Q: with tail ratio
    /// t = lambda^n e^(-lambda) / (n * Gamma(n) * Q(n, lambda)), the mean is
    /// lambda / (1 + t). Evaluated in log-space.
    fn gamma_form_mean(lambda: f64, n: u32) -> f64 {
        use statrs::function::gamma::gamma_ur;
        let nf = n as f64;
        let log_tail =
            nf * lambda.ln() - lambda - nf.ln() - ln_gamma(nf) - gamma_ur(nf, lambda).ln();
        lambda / (1.0 + log_tail.exp())
    }

    #[test]
    fn poisson_mean_matches_incomplete_gamma_form() {
        for (lambda, n) in [(2.0, 12), (6.0, 12), (64.0, 128), (128.0 / 6.0, 128)] {
            let d = right_truncated_poisson(lambda, n).unwrap();
            let want = gamma_form_mean(lambda, n);
            assert!(
                (d.mean() - want).abs() < MOMENT_ABS,
                "lambda={lambda} n={n}: {} vs {want}",
                d.mean()
            );
        }
    }

    #[test]
    fn moment_identities() {
        let n = 24u32;
        let d = uniform(0, n).unwrap();
        assert!((d.mean() - n as f64 / 2.0).abs() < MOMENT_ABS);
        let width = (n + 1) as f64;
        assert!((d.variance() - (width * width - 1.0) / 12.0).abs() < MOMENT_ABS);

        let d = binomial(n, 1.0 / 6.0).unwrap();
        assert!((d.mean() - n as f64 / 6.0).abs() < MOMENT_ABS);
        assert!((d.variance() - n as f64 * (1.0 / 6.0) * (5.0 / 6.0)).abs() < MOMENT_ABS);

        let d = degenerate(7);
        assert_eq!(d.mean(), 7.0);
        assert_eq!(d.variance(), 0.0);
    }

    #[test]
    fn preset_parameterizations() {
        let d = Preset::Fig3Binomial.build(12).unwrap();
        assert!((d.mean() - 2.0).abs() < MOMENT_ABS);

        let d = Preset::Fig3Degenerate.build(12).unwrap();
        assert_eq!(*d.kind(), FaultKind::Degenerate { location: 2 });
        assert_eq!(d.pmf(2), 1.0);

        let d = Preset::Fig4Poisson.build(10).unwrap();
        assert_eq!(*d.kind(), FaultKind::RightTruncatedPoisson { lambda: 5.0, upper: 10 });

        let d = Preset::Fig3Poisson.build(12).unwrap();
        assert_eq!(*d.kind(), FaultKind::RightTruncatedPoisson { lambda: 2.0, upper: 12 });

        let d = Preset::Fig4Uniform.build(8).unwrap();
        assert_eq!(*d.kind(), FaultKind::Uniform { lower: 0, upper: 8 });

        assert!(Preset::Fig3Uniform.build(3).is_err());
    }

    #[test]
    fn degenerate_rounding_modes() {
        for (n, floor, nearest) in [(8u32, 1u32, 1u32), (9, 1, 2), (10, 1, 2), (12, 2, 2)] {
            let d = Preset::Fig3Degenerate.build_with(n, LocationRounding::Floor).unwrap();
            assert_eq!(*d.kind(), FaultKind::Degenerate { location: floor }, "n={n}");
            let d = Preset::Fig3Degenerate.build_with(n, LocationRounding::Nearest).unwrap();
            assert_eq!(*d.kind(), FaultKind::Degenerate { location: nearest }, "n={n}");
        }
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            assert_eq!(p.to_string(), p.name());
        }
        assert!("fig5_uniform".parse::<Preset>().is_err());
    }
}
