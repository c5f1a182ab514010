//! Hard constraints `x ∈ A ∩ B` with a soft pull towards a third disc `C`.
//!
//! The point sought is
//! `argmin_{x ∈ A∩B} ½‖x − q‖² + (1/(2ρ)) d²(x, C)`,
//! which is the resolvent at `q`, with parameter 1, of `N_A + N_B + (1/ρ)(Id − P_C)`.

use std::sync::Arc;

use super::oracle::{oracle_minimize_2d, SearchRect};
use crate::error::Result;
use crate::operators::{Ball, SquaredDistanceGradient, Vector};
use crate::splitting::{RelaxationSchedule, ThreeOperatorProblem};
use crate::strengthened::{resolvent_of_sum, ResolventOutcome, StrengthenConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct HardSoft {
    pub a: Ball,
    pub b: Ball,
    pub c: Ball,
    pub q: Vector,
    pub rho: f64,
    pub x0: Vector,
}

/// Stepsize used for the high-accuracy reference solve, relative to `μ`.
const REFERENCE_GAMMA: f64 = 2.0;

impl HardSoft {
    pub fn standard() -> Self {
        HardSoft {
            a: Ball::new([-1.6, -0.75].into(), 0.55).expect("valid ball"),
            b: Ball::new([-0.35, 0.12].into(), 1.0).expect("valid ball"),
            c: Ball::new([1.0, -1.0].into(), 0.5).expect("valid ball"),
            q: [-1.75, 1.5].into(),
            rho: 1.0,
            x0: [0.7, 1.7].into(),
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    /// `A = N_A`, `B = N_B`, `T = (1/ρ)(Id − P_C)` with `β = ρ`.
    pub fn problem(&self) -> Result<ThreeOperatorProblem> {
        let t = SquaredDistanceGradient::new(Arc::new(self.c.clone()), self.rho)?;
        ThreeOperatorProblem::new(
            Arc::new(self.a.clone()),
            Arc::new(self.b.clone()),
            Arc::new(t),
        )
    }

    pub fn objective(&self, x: &Vector) -> f64 {
        let d = x.distance(&self.c.project(x));
        0.5 * x.distance(&self.q).powi(2) + d * d / (2.0 * self.rho)
    }

    pub fn feasible(&self, x: &Vector) -> bool {
        self.a.contains(x) && self.b.contains(x)
    }

    /// `θ = 1`, `σ = (0, 0, 1)`: the plain iteration on the shifted problem.
    pub fn dy_config(&self) -> StrengthenConfig {
        StrengthenConfig::for_resolvent_parameter(1.0, self.q.clone())
    }

    /// `θ = 2`, `σ = (0, 1, 1)`; the served parameter is again 1.
    pub fn strengthened_config(&self) -> StrengthenConfig {
        StrengthenConfig::new(2.0, [0.0, 1.0, 1.0], self.q.clone())
    }

    pub fn search_rect(&self) -> SearchRect {
        let small = if self.a.radius() <= self.b.radius() {
            &self.a
        } else {
            &self.b
        };
        let pad = small.radius() * 1.1;
        let c = small.center();
        SearchRect::new([c[0] - pad, c[1] - pad], [c[0] + pad, c[1] + pad])
    }

    pub fn oracle_solution(&self, tol: f64) -> Result<Vector> {
        oracle_minimize_2d(
            |x| self.objective(x),
            |x| self.feasible(x),
            self.search_rect(),
            tol,
        )
    }

    /// Resolvent by the strengthened iteration run to residual `tol`.
    pub fn resolvent(&self, config: &StrengthenConfig, tol: f64) -> Result<ResolventOutcome> {
        let problem = self.problem()?;
        let mu = config.mu(problem.beta());
        let gamma = REFERENCE_GAMMA * mu;
        let lambda = 0.9 * (2.0 - REFERENCE_GAMMA / 2.0);
        resolvent_of_sum(
            &problem,
            config,
            gamma,
            RelaxationSchedule::Constant(lambda),
            &self.x0,
            tol,
            1_000_000,
        )
    }

    /// Reference point for shadow-error stopping, computed with the strengthened configuration.
    pub fn reference_solution(&self) -> Result<Vector> {
        Ok(self.resolvent(&self.strengthened_config(), 1e-14)?.point)
    }
}
