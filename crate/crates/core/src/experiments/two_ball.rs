//! Minimum-norm point in the intersection of two discs.

use std::sync::Arc;

use super::oracle::{oracle_minimize_2d, SearchRect};
use crate::error::Result;
use crate::operators::{Ball, ScaledIdentity, Vector};
use crate::splitting::ThreeOperatorProblem;

/// `0 ∈ N_A(x) + N_B(x) + x`, whose solution is the projection of the origin onto `A ∩ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBall {
    pub a: Ball,
    pub b: Ball,
    pub x0: Vector,
}

impl TwoBall {
    /// Discs centered at (−1.6, −0.75) and (−0.35, 0.12) with radii 0.55 and 1.
    pub fn standard() -> Self {
        TwoBall {
            a: Ball::new([-1.6, -0.75].into(), 0.55).expect("valid ball"),
            b: Ball::new([-0.35, 0.12].into(), 1.0).expect("valid ball"),
            x0: [0.7, 1.7].into(),
        }
    }

    /// `A = N_A`, `B = N_B`, `T = Id` (so `β = 1`).
    pub fn problem(&self) -> ThreeOperatorProblem {
        ThreeOperatorProblem::new(
            Arc::new(self.a.clone()),
            Arc::new(self.b.clone()),
            Arc::new(ScaledIdentity::identity(2)),
        )
        .expect("two-dimensional data")
    }

    pub fn feasible(&self, x: &Vector) -> bool {
        self.a.contains(x) && self.b.contains(x)
    }

    pub fn objective(&self, x: &Vector) -> f64 {
        0.5 * x.norm_squared()
    }

    /// Bounding box of the smaller disc, padded.
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{solve, SolverConfig};

    #[test]
    fn discs_overlap_with_interior() {
        let tb = TwoBall::standard();
        let gap = tb.a.center().distance(tb.b.center());
        assert!((gap - (1.25f64.powi(2) + 0.87f64.powi(2)).sqrt()).abs() < 1e-15);
        assert!(gap + tb.a.radius() > tb.b.radius() && gap < tb.a.radius() + tb.b.radius());
        // a point strictly inside both
        let dir = (tb.b.center() - tb.a.center()).scale(1.0 / gap);
        let mid = tb.a.center().add_scaled(0.537, &dir);
        assert!(
            tb.a.center().distance(&mid) < tb.a.radius()
                && tb.b.center().distance(&mid) < tb.b.radius()
        );
    }

    #[test]
    fn solve_matches_oracle() {
        let tb = TwoBall::standard();
        let oracle = tb.oracle_solution(1e-11).unwrap();
        // the origin is outside A, so the answer is its projection onto A when that lies in B
        let proj = tb.a.project(&Vector::zeros(2));
        assert!(tb.b.contains(&proj));
        assert!(oracle.distance(&proj) < 1e-8, "{oracle:?} vs {proj:?}");

        let config = SolverConfig::constant(1.0, 0.99 * 1.5).with_tol_residual(1e-14);
        let out = solve(&tb.problem(), &config, &tb.x0).unwrap();
        assert!(out.converged());
        assert!(out.solution.distance(&oracle) < 1e-8);
    }
}
