//! Balance-equation matrix of the availability chain.
//!
//! Row `s` holds the steady-state balance equation of state `s = (i, j)`:
//! the total outflow rate on the diagonal and the negated inflow rates on the
//! columns of the neighbouring states. The stationary vector `P` is the
//! solution of `Q * P = 0` together with normalization.
//!
//! Transitions are the four lattice moves:
//! repair `i -> i + 1` at rate `eta` while `i < h`, repair `j -> j + 1` at
//! rate `eta` while `j < f`, breakdown `i -> i - 1` at rate `i * xi`, and
//! breakdown `j -> j - 1` at rate `j * xi`. One repair per group can be in
//! flight, so two repairs run concurrently when both groups are degraded.

use std::io::{self, Write};

use ndarray::{Array2, ArrayView2};

use crate::model::{Scenario, StateIndex};

/// Dense balance-equation matrix plus the scenario it was built from.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    scenario: Scenario,
    matrix: Array2<f64>,
}

/// Build the balance-equation matrix for a scenario.
///
/// Row `(i, j)` gets the diagonal coefficient
/// `(2 - [i == h] - [j == f]) * eta + (i + j) * xi` and off-diagonal
/// coefficients `-eta` towards `(i - 1, j)` and `(i, j - 1)`,
/// `-(i + 1) * xi` towards `(i + 1, j)` and `-(j + 1) * xi` towards
/// `(i, j + 1)`, each present only while the neighbour exists.
pub fn build_generator(scenario: &Scenario) -> GeneratorMatrix {
    let h = scenario.honest_count();
    let f = scenario.byzantine_count();
    let xi = scenario.breakdown_rate();
    let eta = scenario.repair_rate();
    let n = scenario.state_count();
    let idx = |i: u32, j: u32| StateIndex { honest_up: i, byzantine_up: j }.flat(f);

    let mut m = Array2::<f64>::zeros((n, n));
    for i in 0..=h {
        for j in 0..=f {
            let r = idx(i, j);
            let repair_slots = (2 - u32::from(i == h) - u32::from(j == f)) as f64;
            m[[r, r]] = repair_slots * eta + (i + j) as f64 * xi;
            if j > 0 {
                m[[r, idx(i, j - 1)]] = -eta;
            }
            if i > 0 {
                m[[r, idx(i - 1, j)]] = -eta;
            }
            if i < h {
                m[[r, idx(i + 1, j)]] = -((i + 1) as f64) * xi;
            }
            if j < f {
                m[[r, idx(i, j + 1)]] = -((j + 1) as f64) * xi;
            }
        }
    }
    GeneratorMatrix { scenario: *scenario, matrix: m }
}

impl GeneratorMatrix {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Number of states (matrix is `dimension x dimension`).
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.matrix.view()
    }

    /// Largest |column sum|. Each column pairs a state's outflow against the
    /// inflow terms it contributes to its neighbours, so the sums vanish up
    /// to rounding; a nonzero value beyond [`crate::tolerances::CONSERVATION_ABS`]
    /// means probability flow is not conserved.
    pub fn conservation_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for c in self.matrix.columns() {
            worst = worst.max(c.sum().abs());
        }
        worst
    }

    /// Maximum number of nonzero entries in any row; the stencil allows five.
    pub fn max_row_nonzeros(&self) -> usize {
        self.matrix
            .rows()
            .into_iter()
            .map(|r| r.iter().filter(|v| **v != 0.0).count())
            .max()
            .unwrap_or(0)
    }

    /// Infinity norm (max absolute row sum); the row scale referenced by the
    /// residual tolerance.
    pub fn row_scale(&self) -> f64 {
        self.matrix
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Strong connectivity of the transition graph read off the nonzero
    /// off-diagonal pattern. Checks that state 0 reaches every state and every
    /// state reaches state 0.
    pub fn is_irreducible(&self) -> bool {
        let n = self.dimension();
        if n == 1 {
            return true;
        }
        let reach = |transpose: bool| -> usize {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(s) = stack.pop() {
                for (t, visited) in seen.iter_mut().enumerate() {
                    if t == s || *visited {
                        continue;
                    }
                    let edge = if transpose { self.matrix[[t, s]] } else { self.matrix[[s, t]] };
                    if edge != 0.0 {
                        *visited = true;
                        count += 1;
                        stack.push(t);
                    }
                }
            }
            count
        };
        reach(false) == n && reach(true) == n
    }

    /// Write the nonzero entries as `row col value` lines, row-major, for
    /// inspection with external sparse tooling.
    pub fn write_triplets<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for ((r, c), v) in self.matrix.indexed_iter() {
            if *v != 0.0 {
                writeln!(w, "{} {} {}", r, c, v)?;
            }
        }
        Ok(())
    }
}
