//! Resolvent of `A + B + T` through the strengthened Davis–Yin iteration.
//!
//! For `θ > 0` and shifts `σ_A, σ_B, σ_T` the iteration
//!
//! ```text
//! u_k     = J_{γθ/(1+γσ_A) A}((x_k + γσ_A q) / (1 + γσ_A))
//! v_k     = J_{γθ/(1+γσ_B) B}(((2 − γσ_T)u_k − x_k − θγT(u_k) + γ(σ_B + σ_T)q) / (1 + γσ_B))
//! x_{k+1} = x_k + λ_k(v_k − u_k)
//! ```
//!
//! drives `u_k` and `v_k` to `J_{θ/(σ_A+σ_B+σ_T) (A+B+T)}(q)`. Stepsizes live in
//! `]0, 4μ[` with `μ = (θ/β + σ_T)⁻¹`, and relaxations in `]0, 2 − γ/(2μ)]`.
//!
//! The shift route runs the plain iteration on `(A, B, (1/μ̃)(Id − q) + T)`
//! instead; it is the special case `σ_A = σ_B = 0`, `σ_T = 1/μ̃`, `θ = 1`.

use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::operators::{ShiftedMap, Vector};
use crate::splitting::{
    run, solve, validate_parameters, RelaxationSchedule, SolveOutcome, SolverConfig, Step,
    ThreeOperatorProblem, Warning,
};

/// Strengthening parameters and the resolvent query point.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthenConfig {
    pub theta: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub sigma_t: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub alpha_t: f64,
    pub q: Vector,
}

impl StrengthenConfig {
    /// Shifts `(σ_A, σ_B, σ_T)` with all monotonicity moduli zero.
    pub fn new(theta: f64, sigmas: [f64; 3], q: Vector) -> Self {
        StrengthenConfig {
            theta,
            sigma_a: sigmas[0],
            sigma_b: sigmas[1],
            sigma_t: sigmas[2],
            alpha_a: 0.0,
            alpha_b: 0.0,
            alpha_t: 0.0,
            q,
        }
    }

    /// Serves the resolvent with parameter `mu` using `θ = 1`, `σ = (0, 0, 1/mu)`.
    pub fn for_resolvent_parameter(mu: f64, q: Vector) -> Self {
        StrengthenConfig::new(1.0, [0.0, 0.0, 1.0 / mu], q)
    }

    pub fn with_moduli(mut self, alpha_a: f64, alpha_b: f64, alpha_t: f64) -> Self {
        self.alpha_a = alpha_a;
        self.alpha_b = alpha_b;
        self.alpha_t = alpha_t;
        self
    }

    pub fn sigma_sum(&self) -> f64 {
        self.sigma_a + self.sigma_b + self.sigma_t
    }

    /// Resolvent parameter `θ/(σ_A + σ_B + σ_T)` served by the iteration.
    pub fn served_parameter(&self) -> f64 {
        self.theta / self.sigma_sum()
    }

    /// `μ = (θ/β + σ_T)⁻¹`, the cocoercivity constant of the strengthened `T`.
    pub fn mu(&self, beta: f64) -> f64 {
        1.0 / (self.theta / beta + self.sigma_t)
    }
}

/// Checks the strengthening assumptions and the well-posedness of the scaled
/// resolvents at stepsize `gamma`. Every violated condition is reported.
pub fn validate_strengthen(config: &StrengthenConfig, beta: f64, gamma: f64) -> Result<()> {
    let mut v = Vec::new();
    let c = config;
    if !(c.theta > 0.0) {
        v.push(Violation::Theta { theta: c.theta });
    }
    if !(c.sigma_sum() > 0.0) {
        v.push(Violation::SigmaSum { sum: c.sigma_sum() });
    }
    if !(c.sigma_t >= 0.0) {
        v.push(Violation::NegativeSigmaT { sigma_t: c.sigma_t });
    }
    let moduli = [
        ("A", c.theta * c.alpha_a + c.sigma_a),
        ("B", c.theta * c.alpha_b + c.sigma_b),
        ("T", c.theta * c.alpha_t + c.sigma_t),
    ];
    for (operator, value) in moduli {
        if !(value >= 0.0) {
            v.push(Violation::StrengthenedModulus { operator, value });
        }
    }
    if moduli.iter().all(|(_, m)| *m == 0.0) {
        v.push(Violation::StrengthenedModuliAllZero);
    }
    let mu = c.mu(beta);
    if !(mu > 0.0) {
        v.push(Violation::Mu { mu });
    } else if !(gamma > 0.0 && gamma < 4.0 * mu) {
        v.push(Violation::Stepsize {
            gamma,
            upper: 4.0 * mu,
        });
    }
    for (operator, sigma) in [("A", c.sigma_a), ("B", c.sigma_b)] {
        let value = 1.0 + gamma * sigma;
        if !(value > 0.0) {
            v.push(Violation::ResolventScaling { operator, value });
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v))
    }
}

fn strengthened_step_unchecked(
    problem: &ThreeOperatorProblem,
    c: &StrengthenConfig,
    gamma: f64,
    lambda: f64,
    x: &Vector,
) -> Step {
    let scale_a = 1.0 + gamma * c.sigma_a;
    let scale_b = 1.0 + gamma * c.sigma_b;
    let shift_b = gamma * (c.sigma_b + c.sigma_t);

    let a_arg: Vector = x
        .iter()
        .zip(c.q.iter())
        .map(|(xi, qi)| (xi + gamma * c.sigma_a * qi) / scale_a)
        .collect::<Vec<_>>()
        .into();
    let u = problem.a().resolve(gamma * c.theta / scale_a, &a_arg);
    let tu = problem.t().apply(&u);
    let b_arg: Vector = u
        .iter()
        .zip(x.iter())
        .zip(tu.iter().zip(c.q.iter()))
        .map(|((ui, xi), (ti, qi))| {
            ((2.0 - gamma * c.sigma_t) * ui - xi - c.theta * gamma * ti + shift_b * qi) / scale_b
        })
        .collect::<Vec<_>>()
        .into();
    let v = problem.b().resolve(gamma * c.theta / scale_b, &b_arg);
    let next = x
        .iter()
        .zip(u.iter().zip(v.iter()))
        .map(|(xi, (ui, vi))| xi + lambda * (vi - ui))
        .collect::<Vec<_>>()
        .into();
    Step { next, u, v }
}

/// One strengthened Davis–Yin step.
pub fn strengthened_dy_step(
    problem: &ThreeOperatorProblem,
    config: &StrengthenConfig,
    gamma: f64,
    lambda: f64,
    x: &Vector,
) -> Result<Step> {
    x.check_dim(problem.dim())?;
    config.q.check_dim(problem.dim())?;
    let step = strengthened_step_unchecked(problem, config, gamma, lambda, x);
    if !(step.next.is_finite() && step.u.is_finite() && step.v.is_finite()) {
        return Err(Error::NonFinite { iteration: 0 });
    }
    Ok(step)
}

/// Runs the strengthened iteration under `solver`'s stopping rules. The
/// relaxation bound uses `μ` in place of `β`.
pub fn strengthened_solve(
    problem: &ThreeOperatorProblem,
    config: &StrengthenConfig,
    solver: &SolverConfig,
    x0: &Vector,
) -> Result<SolveOutcome> {
    x0.check_dim(problem.dim())?;
    config.q.check_dim(problem.dim())?;
    let beta = problem.beta();
    validate_strengthen(config, beta, solver.gamma)?;
    let warnings = validate_parameters(config.mu(beta), solver)?;
    let gamma = solver.gamma;
    run(solver, x0, warnings, |lambda, x| {
        strengthened_step_unchecked(problem, config, gamma, lambda, x)
    })
}

/// A computed resolvent point together with the run that produced it.
#[derive(Debug, Clone)]
pub struct ResolventOutcome {
    pub point: Vector,
    /// Resolvent parameter actually served.
    pub parameter: f64,
    pub outcome: SolveOutcome,
}

impl ResolventOutcome {
    pub fn converged(&self) -> bool {
        self.outcome.converged()
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.outcome.warnings
    }
}

/// `J_{θ/(σ_A+σ_B+σ_T) (A+B+T)}(q)` by the strengthened iteration, stopped at residual `tol`.
///
/// `q` must lie in the range of `Id + (θ/Σσ)(A + B + T)`, which holds for
/// every maximally monotone sum; this is not checked.
pub fn resolvent_of_sum(
    problem: &ThreeOperatorProblem,
    config: &StrengthenConfig,
    gamma: f64,
    schedule: RelaxationSchedule,
    x0: &Vector,
    tol: f64,
    max_iter: usize,
) -> Result<ResolventOutcome> {
    let solver = SolverConfig::new(gamma, schedule)
        .with_tol_residual(tol)
        .with_max_iter(max_iter);
    let outcome = strengthened_solve(problem, config, &solver, x0)?;
    Ok(ResolventOutcome {
        point: outcome.solution.clone(),
        parameter: config.served_parameter(),
        outcome,
    })
}

/// Builds `(A, B, (1/μ̃)(Id − q) + T)`, whose zero is `J_{μ̃(A+B+T)}(q)`.
pub fn shifted_problem(
    problem: &ThreeOperatorProblem,
    mu: f64,
    q: &Vector,
) -> Result<ThreeOperatorProblem> {
    let shifted = ShiftedMap::new(problem.t_arc(), mu, q.clone())?;
    ThreeOperatorProblem::new(problem.a_arc(), problem.b_arc(), Arc::new(shifted))
}

/// `J_{μ̃(A+B+T)}(q)` by running the plain iteration on the shifted problem.
/// `gamma` is validated against `β̃ = (1/β + 1/μ̃)⁻¹`.
#[allow(clippy::too_many_arguments)]
pub fn resolvent_via_shift(
    problem: &ThreeOperatorProblem,
    mu: f64,
    q: &Vector,
    gamma: f64,
    schedule: RelaxationSchedule,
    x0: &Vector,
    tol: f64,
    max_iter: usize,
) -> Result<ResolventOutcome> {
    let shifted = shifted_problem(problem, mu, q)?;
    let solver = SolverConfig::new(gamma, schedule)
        .with_tol_residual(tol)
        .with_max_iter(max_iter);
    let outcome = solve(&shifted, &solver, x0)?;
    Ok(ResolventOutcome {
        point: outcome.solution.clone(),
        parameter: mu,
        outcome,
    })
}
