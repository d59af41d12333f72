//! Stationary-distribution solvers.
//!
//! Two independent routes compute the same vector and cross-check each other
//! in the test suite:
//!
//! * [`solve_svd`] takes the right-singular vector of the smallest singular
//!   value, i.e. the null space of the balance matrix. Robust, and it can
//!   detect a defective model (null space dimension other than one), but the
//!   full decomposition costs more as the state space grows.
//! * [`solve_replaced_equation`] swaps the last balance equation for the
//!   normalization constraint `sum(P) = 1` and runs an LU solve. Much faster
//!   for large lattices; a reciprocal-condition-number check guards against
//!   silently inaccurate factorizations.
//!
//! Both routes share the same post-processing: orient the vector, normalize,
//! reject meaningfully negative entries, clamp rounding dust, and verify the
//! balance residual against the matrix scale.

use ndarray::{Array1, Array2};
use ndarray_linalg::{FactorizeInto, JobSvd, ReciprocalConditionNum, Solve, SVDDCInto};

use crate::error::{Error, Result};
use crate::generator::GeneratorMatrix;
use crate::model::{Scenario, StateIndex};
use crate::tolerances::{
    CONDITION_MAX, PROB_NEGATIVE_ABS, RESIDUAL_REL, SINGULARITY_REL, SVD_STATE_LIMIT,
};

/// Route selection for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// SVD up to [`SVD_STATE_LIMIT`] states, replaced-equation beyond.
    Auto,
    Svd,
    ReplacedEquation,
}

/// Stationary probabilities of a scenario, in flat state order.
#[derive(Debug, Clone)]
pub struct StationaryDistribution {
    scenario: Scenario,
    probabilities: Vec<f64>,
}

impl StationaryDistribution {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// All probabilities, indexed by [`StateIndex::flat`].
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probability of one state.
    pub fn probability(&self, state: StateIndex) -> f64 {
        self.probabilities[state.flat(self.scenario.byzantine_count())]
    }
}

/// Solve with the given route; `Auto` picks by state count.
pub fn solve(generator: &GeneratorMatrix, kind: SolverKind) -> Result<StationaryDistribution> {
    match kind {
        SolverKind::Svd => solve_svd(generator),
        SolverKind::ReplacedEquation => solve_replaced_equation(generator),
        SolverKind::Auto => {
            if generator.dimension() <= SVD_STATE_LIMIT {
                solve_svd(generator)
            } else {
                solve_replaced_equation(generator)
            }
        }
    }
}

/// Null-space route: full SVD, stationary vector from the right-singular
/// vector of the smallest singular value.
///
/// Fails if the smallest singular value is not negligible against the largest
/// (no null space: the balance equations are inconsistent) or if the second
/// smallest also vanishes (null space dimension above one: the chain is not
/// irreducible and no unique stationary distribution exists).
// The negated comparisons are deliberate: a NaN singular value must take the
// error branch, which `s > cut`-style rewrites would let through.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn solve_svd(generator: &GeneratorMatrix) -> Result<StationaryDistribution> {
    let n = generator.dimension();
    if n == 1 {
        return finish(generator, vec![1.0]);
    }
    let a: Array2<f64> = generator.matrix().to_owned();
    let (_, sigma, vt) = a
        .svddc_into(JobSvd::Some)
        .map_err(|e| Error::Solver(format!("svd failed: {e}")))?;
    let vt = vt.expect("requested right-singular vectors");
    let s_max = sigma[0];
    let s_min = sigma[n - 1];
    let s_next = sigma[n - 2];
    let cut = SINGULARITY_REL * s_max;
    if !(s_min <= cut) {
        return Err(Error::Solver(format!(
            "no null space: smallest singular value {s_min:.3e} vs largest {s_max:.3e}"
        )));
    }
    if !(s_next > cut) {
        return Err(Error::Solver(format!(
            "null space dimension above one: second smallest singular value {s_next:.3e} vs largest {s_max:.3e}"
        )));
    }
    finish(generator, vt.row(n - 1).to_vec())
}

/// Replaced-equation route: overwrite the last balance equation with
/// `sum(P) = 1`, LU-factorize, and back-substitute. The reciprocal condition
/// number of the factorization must stay above `1 / CONDITION_MAX`.
pub fn solve_replaced_equation(generator: &GeneratorMatrix) -> Result<StationaryDistribution> {
    let n = generator.dimension();
    if n == 1 {
        return finish(generator, vec![1.0]);
    }
    let mut a: Array2<f64> = generator.matrix().to_owned();
    a.row_mut(n - 1).fill(1.0);
    let mut b = Array1::<f64>::zeros(n);
    b[n - 1] = 1.0;
    let lu = a
        .factorize_into()
        .map_err(|e| Error::Solver(format!("lu factorization failed: {e}")))?;
    let rcond = lu
        .rcond()
        .map_err(|e| Error::Solver(format!("condition estimate failed: {e}")))?;
    if rcond < 1.0 / CONDITION_MAX {
        return Err(Error::Solver(format!(
            "replaced system too ill-conditioned: rcond = {rcond:.3e}"
        )));
    }
    let x = lu
        .solve_into(b)
        .map_err(|e| Error::Solver(format!("back substitution failed: {e}")))?;
    finish(generator, x.to_vec())
}

/// Shared post-processing: orient, normalize, validate, clamp, check residual.
fn finish(generator: &GeneratorMatrix, mut p: Vec<f64>) -> Result<StationaryDistribution> {
    // Orient so the dominant entry is positive (null vectors have free sign).
    let dominant = p
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    if dominant < 0.0 {
        for v in &mut p {
            *v = -*v;
        }
    }
    let sum: f64 = p.iter().sum();
    if !sum.is_finite() || sum <= 0.0 {
        return Err(Error::Solver(format!("degenerate solution: sum = {sum}")));
    }
    for v in &mut p {
        *v /= sum;
    }
    if let Some(worst) = p.iter().copied().reduce(f64::min) {
        if worst < -PROB_NEGATIVE_ABS {
            return Err(Error::Solver(format!(
                "negative probability beyond tolerance: {worst:.3e}"
            )));
        }
    }
    for v in &mut p {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = p.iter().sum();
    for v in &mut p {
        *v /= sum;
    }

    // Residual of the untouched balance equations, relative to matrix scale.
    let q = generator.matrix();
    let mut residual = 0.0_f64;
    for r in 0..generator.dimension() {
        let mut acc = 0.0;
        for (c, pv) in p.iter().enumerate() {
            acc += q[[r, c]] * pv;
        }
        residual = residual.max(acc.abs());
    }
    let allowed = RESIDUAL_REL * generator.row_scale().max(1.0);
    if residual > allowed {
        return Err(Error::Solver(format!(
            "balance residual {residual:.3e} exceeds {allowed:.3e}"
        )));
    }

    Ok(StationaryDistribution { scenario: *generator.scenario(), probabilities: p })
}
