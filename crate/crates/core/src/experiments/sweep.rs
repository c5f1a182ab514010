//! Parameter sweeps over normalized `(γ, λ)` grids.
//!
//! A cell `(g, λ)` runs the chosen variant with stepsize `γ = g·s`, where `s`
//! is `β` for the plain iteration and `μ` for the strengthened one, so the
//! admissible region is always `g ∈ ]0, 4[`, `λ ≤ 2 − g/2`.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{Vector, Zero};
use crate::splitting::{fmt_f64, solve, SolveOutcome, SolverConfig, ThreeOperatorProblem};
use crate::strengthened::{strengthened_solve, StrengthenConfig};

/// Grid axes in normalized units.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub gammas: Vec<f64>,
    pub lambdas: Vec<f64>,
}

impl GridSpec {
    /// `g_i = 4i/(n_g + 1)` for `i = 1..=n_g` and `λ_j = 2j/(n_λ + 1)` for `j = 1..=n_λ`.
    pub fn uniform(n_gamma: usize, n_lambda: usize) -> Self {
        GridSpec {
            gammas: (1..=n_gamma)
                .map(|i| 4.0 * i as f64 / (n_gamma + 1) as f64)
                .collect(),
            lambdas: (1..=n_lambda)
                .map(|j| 2.0 * j as f64 / (n_lambda + 1) as f64)
                .collect(),
        }
    }

    /// The 99 × 50 grid (4950 cells).
    pub fn standard() -> Self {
        GridSpec::uniform(99, 50)
    }

    pub fn new(gammas: Vec<f64>, lambdas: Vec<f64>) -> Result<Self> {
        let spec = GridSpec { gammas, lambdas };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for &g in &self.gammas {
            if !(g > 0.0 && g < 4.0) {
                return Err(Error::InvalidParameter {
                    name: "gamma_norm",
                    value: g,
                    reason: "normalized stepsize must lie in ]0, 4[",
                });
            }
        }
        for &l in &self.lambdas {
            if !(l > 0.0 && l < 2.0) {
                return Err(Error::InvalidParameter {
                    name: "lambda",
                    value: l,
                    reason: "relaxation must lie in ]0, 2[",
                });
            }
        }
        if self.gammas.is_empty() || self.lambdas.is_empty() {
            return Err(Error::InvalidParameter {
                name: "grid",
                value: 0.0,
                reason: "grid axes must be nonempty",
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gammas.len() * self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cells outside the admissible region `λ ≤ 2 − g/2`.
    pub fn is_infeasible(gamma_norm: f64, lambda: f64) -> bool {
        lambda > 2.0 - gamma_norm / 2.0
    }
}

#[derive(Debug, Clone)]
pub enum Variant {
    DavisYin,
    Strengthened(StrengthenConfig),
    /// The plain iteration with `A` replaced by zero.
    ForwardBackward,
}

pub type Objective = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// What a cell reports.
#[derive(Clone)]
pub enum Measure {
    /// Iterations until `‖u_k − reference‖ < tol`, capped at `max_iter`.
    Iterations {
        reference: Vector,
        tol: f64,
        max_iter: usize,
    },
    /// Objective at the last shadow iterate after a fixed number of iterations.
    Objective {
        iterations: usize,
        objective: Objective,
    },
}

/// A problem, start and variant to sweep.
#[derive(Clone)]
pub struct SweepCase {
    pub problem: ThreeOperatorProblem,
    pub x0: Vector,
    pub variant: Variant,
    pub measure: Measure,
}

impl SweepCase {
    /// Scale `s` turning normalized stepsizes into actual ones.
    pub fn scale(&self) -> f64 {
        match &self.variant {
            Variant::Strengthened(c) => c.mu(self.problem.beta()),
            _ => self.problem.beta(),
        }
    }

    fn run(&self, config: &SolverConfig) -> Result<SolveOutcome> {
        match &self.variant {
            Variant::DavisYin => solve(&self.problem, config, &self.x0),
            Variant::Strengthened(c) => strengthened_solve(&self.problem, c, config, &self.x0),
            Variant::ForwardBackward => {
                let fb = ThreeOperatorProblem::new(
                    Arc::new(Zero::new(self.problem.dim())),
                    self.problem.b_arc(),
                    self.problem.t_arc(),
                )?;
                solve(&fb, config, &self.x0)
            }
        }
    }

    /// Evaluates one cell.
    pub fn cell(&self, gamma_norm: f64, lambda: f64) -> CellState {
        if GridSpec::is_infeasible(gamma_norm, lambda) {
            return CellState::Infeasible;
        }
        let gamma = gamma_norm * self.scale();
        let base = SolverConfig::constant(gamma, lambda).recording(false);
        let config = match &self.measure {
            Measure::Iterations {
                reference,
                tol,
                max_iter,
            } => base
                .with_max_iter(*max_iter)
                .with_tol_residual(0.0)
                .with_reference(reference.clone(), *tol),
            Measure::Objective { iterations, .. } => {
                base.with_max_iter(*iterations).with_tol_residual(0.0)
            }
        };
        match (self.run(&config), &self.measure) {
            (Err(Error::Validation(_)), _) => CellState::Infeasible,
            (Err(_), _) => CellState::NonConverged,
            (Ok(out), Measure::Iterations { .. }) if out.converged() => {
                CellState::Iterations(out.iterations())
            }
            (Ok(_), Measure::Iterations { .. }) => CellState::NonConverged,
            (Ok(out), Measure::Objective { objective, .. }) => {
                let value = objective(&out.solution);
                if value.is_finite() {
                    CellState::Objective(value)
                } else {
                    CellState::NonConverged
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellState {
    Iterations(usize),
    Objective(f64),
    Infeasible,
    NonConverged,
}

impl CellState {
    fn score(&self) -> Option<f64> {
        match self {
            CellState::Iterations(n) => Some(*n as f64),
            CellState::Objective(v) => Some(*v),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CellState::Iterations(_) => "converged",
            CellState::Objective(_) => "objective",
            CellState::Infeasible => "infeasible",
            CellState::NonConverged => "saturated",
        }
    }
}

/// Cell states in row-major order: index `i·n_λ + j` holds `(gammas[i], lambdas[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: GridSpec,
    pub cells: Vec<CellState>,
}

impl SweepResult {
    pub fn get(&self, i: usize, j: usize) -> CellState {
        self.cells[i * self.grid.lambdas.len() + j]
    }

    /// Grid coordinates `(g, λ)` of cell `(i, j)`.
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.grid.gammas[i], self.grid.lambdas[j])
    }

    /// All cells attaining the smallest iteration count or objective.
    pub fn argmin(&self) -> Vec<(usize, usize)> {
        let best = self
            .cells
            .iter()
            .filter_map(CellState::score)
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return Vec::new();
        }
        let n = self.grid.lambdas.len();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.score() == Some(best))
            .map(|(k, _)| (k / n, k % n))
            .collect()
    }

    pub fn min_value(&self) -> Option<f64> {
        self.argmin()
            .first()
            .and_then(|&(i, j)| self.get(i, j).score())
    }

    /// Columns `gamma_norm,lambda,status,iterations,objective`; inapplicable fields are empty.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "gamma_norm,lambda,status,iterations,objective")?;
        for (i, &g) in self.grid.gammas.iter().enumerate() {
            for (j, &l) in self.grid.lambdas.iter().enumerate() {
                let cell = self.get(i, j);
                let (iters, obj) = match cell {
                    CellState::Iterations(n) => (n.to_string(), String::new()),
                    CellState::Objective(v) => (String::new(), fmt_f64(v)),
                    _ => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_f64(g),
                    fmt_f64(l),
                    cell.status(),
                    iters,
                    obj
                )?;
            }
        }
        Ok(())
    }
}

/// Evaluates every cell of `grid` on `workers` threads (0 means all available).
/// The result does not depend on the worker count.
pub fn grid_sweep(case: &SweepCase, grid: &GridSpec, workers: usize) -> Result<SweepResult> {
    grid.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|_| Error::InvalidParameter {
            name: "workers",
            value: workers as f64,
            reason: "could not start worker threads",
        })?;
    let n = grid.lambdas.len();
    let cells = pool.install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|k| case.cell(grid.gammas[k / n], grid.lambdas[k % n]))
            .collect()
    });
    Ok(SweepResult {
        grid: grid.clone(),
        cells,
    })
}
