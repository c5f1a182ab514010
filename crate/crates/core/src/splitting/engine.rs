use std::sync::Arc;

use super::trace::{Trace, TraceRecord};
use super::{validate, SolverConfig, ThreeOperatorProblem, Warning};
use crate::error::{Error, Result};
use crate::operators::{CocoerciveMap, ResolventOperator, Vector, Zero};

/// One Davis–Yin step: the next iterate and the two resolvent outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub next: Vector,
    pub u: Vector,
    pub v: Vector,
}

impl Step {
    fn is_finite(&self) -> bool {
        self.next.is_finite() && self.u.is_finite() && self.v.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ShadowError,
    Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged(StopReason),
    MaxIterations,
}

/// Result of a run. Hitting `max_iter` is reported through `status`, not as an error.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Last shadow iterate `u_k`.
    pub solution: Vector,
    /// The iterate `x_k` that produced `solution`.
    pub fixed_point: Vector,
    pub trace: Trace,
    pub status: Status,
    pub warnings: Vec<Warning>,
}

impl SolveOutcome {
    pub fn converged(&self) -> bool {
        matches!(self.status, Status::Converged(_))
    }

    /// Number of steps evaluated, i.e. shadow iterates `u_0, …, u_{n−1}` computed.
    pub fn iterations(&self) -> usize {
        self.trace.iterations
    }
}

fn step_unchecked(problem: &ThreeOperatorProblem, gamma: f64, lambda: f64, x: &Vector) -> Step {
    let u = problem.a().resolve(gamma, x);
    let tu = problem.t().apply(&u);
    let reflected: Vector = u
        .iter()
        .zip(x.iter())
        .zip(tu.iter())
        .map(|((ui, xi), ti)| 2.0 * ui - xi - gamma * ti)
        .collect::<Vec<_>>()
        .into();
    let v = problem.b().resolve(gamma, &reflected);
    let next = x
        .iter()
        .zip(u.iter().zip(v.iter()))
        .map(|(xi, (ui, vi))| xi + lambda * (vi - ui))
        .collect::<Vec<_>>()
        .into();
    Step { next, u, v }
}

/// A single Davis–Yin step from `x`. Evaluates `J_{γA}`, `J_{γB}` and `T` once each.
pub fn davis_yin_step(
    problem: &ThreeOperatorProblem,
    gamma: f64,
    lambda: f64,
    x: &Vector,
) -> Result<Step> {
    x.check_dim(problem.dim())?;
    let step = step_unchecked(problem, gamma, lambda, x);
    if !step.is_finite() {
        return Err(Error::NonFinite { iteration: 0 });
    }
    Ok(step)
}

/// `DY_γ(x) = J_{γB}(2J_{γA}(x) − x − γT(J_{γA}(x))) + x − J_{γA}(x)`.
pub fn dy_operator_apply(problem: &ThreeOperatorProblem, gamma: f64, x: &Vector) -> Result<Vector> {
    x.check_dim(problem.dim())?;
    Ok(step_unchecked(problem, gamma, 1.0, x).next)
}

/// Drives a stepping rule under the stopping rules of `config`.
///
/// Stopping priority: shadow error (when a reference is set), then residual,
/// then `max_iter`.
pub(crate) fn run<F>(
    config: &SolverConfig,
    x0: &Vector,
    warnings: Vec<Warning>,
    mut step: F,
) -> Result<SolveOutcome>
where
    F: FnMut(f64, &Vector) -> Step,
{
    let mut trace = Trace::default();
    let mut x = x0.clone();
    let mut last: Option<(Vector, Vector)> = None;

    for k in 0..config.max_iter {
        let lambda = config.schedule.at(k);
        let Step { next, u, v } = step(lambda, &x);
        if !(next.is_finite() && u.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite { iteration: k });
        }
        let residual = u.distance(&v);
        let shadow_error = config.reference.as_ref().map(|r| u.distance(&r.point));
        trace.final_residual = residual;
        trace.final_shadow_error = shadow_error;
        if config.record_trace {
            trace.records.push(TraceRecord {
                k,
                x: x.clone(),
                u: u.clone(),
                v: v.clone(),
                residual,
                shadow_error,
            });
        }

        let reason = match (&config.reference, shadow_error) {
            (Some(r), Some(e)) if e < r.tol => Some(StopReason::ShadowError),
            _ if residual <= config.tol_residual => Some(StopReason::Residual),
            _ => None,
        };
        if let Some(reason) = reason {
            trace.iterations = k + 1;
            trace.status = Status::Converged(reason);
            return Ok(SolveOutcome {
                solution: u,
                fixed_point: x,
                status: trace.status,
                trace,
                warnings,
            });
        }
        last = Some((x, u));
        x = next;
    }

    let (fixed_point, solution) = last.unwrap_or_else(|| (x0.clone(), x0.clone()));
    trace.iterations = config.max_iter;
    trace.status = Status::MaxIterations;
    Ok(SolveOutcome {
        solution,
        fixed_point,
        status: Status::MaxIterations,
        trace,
        warnings,
    })
}

/// Runs the Davis–Yin iteration from `x0`.
pub fn solve(
    problem: &ThreeOperatorProblem,
    config: &SolverConfig,
    x0: &Vector,
) -> Result<SolveOutcome> {
    x0.check_dim(problem.dim())?;
    let warnings = validate(problem, config)?;
    let gamma = config.gamma;
    run(config, x0, warnings, |lambda, x| {
        step_unchecked(problem, gamma, lambda, x)
    })
}

/// Forward-backward splitting (`A = 0`). Also returns `T(x̄)`, the unique dual solution.
pub fn forward_backward(
    b: Arc<dyn ResolventOperator>,
    t: Arc<dyn CocoerciveMap>,
    config: &SolverConfig,
    x0: &Vector,
) -> Result<(SolveOutcome, Vector)> {
    let problem = ThreeOperatorProblem::new(Arc::new(Zero::new(b.dim())), b, t)?;
    let outcome = solve(&problem, config, x0)?;
    let dual = problem.t().apply(&outcome.solution);
    Ok((outcome, dual))
}

/// Douglas–Rachford splitting (`T = 0`); the relaxation bound becomes 2 and any `γ > 0` is allowed.
pub fn douglas_rachford(
    a: Arc<dyn ResolventOperator>,
    b: Arc<dyn ResolventOperator>,
    config: &SolverConfig,
    x0: &Vector,
) -> Result<SolveOutcome> {
    let problem = ThreeOperatorProblem::new(a.clone(), b, Arc::new(Zero::new(a.dim())))?;
    solve(&problem, config, x0)
}

/// Backward-forward splitting (`B = 0`).
pub fn backward_forward(
    a: Arc<dyn ResolventOperator>,
    t: Arc<dyn CocoerciveMap>,
    config: &SolverConfig,
    x0: &Vector,
) -> Result<SolveOutcome> {
    let problem = ThreeOperatorProblem::new(a.clone(), Arc::new(Zero::new(a.dim())), t)?;
    solve(&problem, config, x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{Ball, ScaledIdentity};
    use crate::splitting::RelaxationSchedule;

    fn scalar(a: f64) -> Vector {
        Vector::from([a])
    }

    fn identity_problem() -> ThreeOperatorProblem {
        ThreeOperatorProblem::new(
            Arc::new(Zero::new(1)),
            Arc::new(Zero::new(1)),
            Arc::new(ScaledIdentity::identity(1)),
        )
        .unwrap()
    }

    #[test]
    fn all_zero_operators_fix_every_point() {
        let p = ThreeOperatorProblem::new(
            Arc::new(Zero::new(2)),
            Arc::new(Zero::new(2)),
            Arc::new(Zero::new(2)),
        )
        .unwrap();
        let x = Vector::from([0.3, -7.0]);
        let s = davis_yin_step(&p, 1.3, 0.9, &x).unwrap();
        assert_eq!(s.next, x);
        assert_eq!(s.u, x);
        assert_eq!(s.v, x);
    }

    #[test]
    fn gradient_descent_reduction() {
        // x − λγx with λ = 1, γ = 0.5
        let s = davis_yin_step(&identity_problem(), 0.5, 1.0, &scalar(1.0)).unwrap();
        assert_eq!(s.next[0], 0.5);
    }

    #[test]
    fn dy_operator_is_not_averaged_beyond_two_beta() {
        let p = identity_problem();
        let a = dy_operator_apply(&p, 3.0, &scalar(1.0)).unwrap();
        let b = dy_operator_apply(&p, 3.0, &scalar(-1.0)).unwrap();
        assert_eq!(a[0], -2.0);
        assert_eq!(b[0], 2.0);
        assert_eq!(a.distance(&b), 4.0);
        assert_eq!(dy_operator_apply(&p, 1.0, &scalar(5.0)).unwrap()[0], 0.0);
        assert_eq!(dy_operator_apply(&p, 2.2, &scalar(0.0)).unwrap()[0], 0.0);
    }

    #[test]
    fn dy_operator_matches_unit_relaxation_step() {
        let p = identity_problem();
        for x in [-2.0, 0.1, 9.0] {
            let s = davis_yin_step(&p, 1.7, 1.0, &scalar(x)).unwrap();
            assert_eq!(dy_operator_apply(&p, 1.7, &scalar(x)).unwrap(), s.next);
        }
    }

    #[test]
    fn scalar_contraction_with_large_stepsize() {
        let config = SolverConfig::constant(3.5, 0.2)
            .with_tol_residual(1e-14)
            .with_max_iter(100_000);
        let out = solve(&identity_problem(), &config, &scalar(1.0)).unwrap();
        assert!(out.converged());
        assert!(out.solution[0].abs() < 1e-13);
        // x_{k+1} = (1 − λγ) x_k = 0.3 x_k
        let recs = &out.trace.records;
        for pair in recs.windows(2) {
            assert!((pair[1].x[0] - 0.3 * pair[0].x[0]).abs() < 1e-16);
        }
    }

    #[test]
    fn saturation_is_a_value() {
        let config = SolverConfig::constant(0.1, 0.1).with_max_iter(3);
        let out = solve(&identity_problem(), &config, &scalar(1.0)).unwrap();
        assert_eq!(out.status, Status::MaxIterations);
        assert_eq!(out.iterations(), 3);
        assert_eq!(out.trace.records.len(), 3);
    }

    #[test]
    fn shadow_rule_takes_priority() {
        let config = SolverConfig::constant(1.0, 1.0)
            .with_tol_residual(1e300)
            .with_reference(scalar(0.0), 10.0);
        let out = solve(&identity_problem(), &config, &scalar(1.0)).unwrap();
        assert_eq!(out.status, Status::Converged(StopReason::ShadowError));
        assert_eq!(out.iterations(), 1);
    }

    #[test]
    fn rejects_invalid_config_and_dimension() {
        assert!(solve(
            &identity_problem(),
            &SolverConfig::constant(4.0, 0.1),
            &scalar(1.0)
        )
        .is_err());
        assert!(solve(
            &identity_problem(),
            &SolverConfig::constant(1.0, 0.1),
            &Vector::zeros(2)
        )
        .is_err());
    }

    #[test]
    fn non_finite_iterates_reported_with_index() {
        struct Blowup;
        impl CocoerciveMap for Blowup {
            fn dim(&self) -> usize {
                1
            }
            fn beta(&self) -> f64 {
                1.0
            }
            fn apply(&self, x: &Vector) -> Vector {
                x.map(|v| if v.abs() < 0.5 { f64::NAN } else { v })
            }
        }
        let p = ThreeOperatorProblem::new(
            Arc::new(Zero::new(1)),
            Arc::new(Zero::new(1)),
            Arc::new(Blowup),
        )
        .unwrap();
        let err = solve(&p, &SolverConfig::constant(1.0, 0.5), &scalar(1.0)).unwrap_err();
        assert!(matches!(err, Error::NonFinite { iteration: 2 }), "{err:?}");
    }

    #[test]
    fn specializations_share_the_engine() {
        let ball: Arc<dyn ResolventOperator> = Arc::new(Ball::new([1.0, 0.0].into(), 0.5).unwrap());
        let t: Arc<dyn CocoerciveMap> = Arc::new(ScaledIdentity::identity(2));
        let config = SolverConfig::new(1.2, RelaxationSchedule::Constant(1.0)).with_max_iter(40);
        let x0 = Vector::from([-1.0, 2.0]);
        let (fb, dual) = forward_backward(ball.clone(), t.clone(), &config, &x0).unwrap();
        let generic = solve(
            &ThreeOperatorProblem::new(Arc::new(Zero::new(2)), ball.clone(), t.clone()).unwrap(),
            &config,
            &x0,
        )
        .unwrap();
        assert_eq!(fb.trace.records, generic.trace.records);
        assert_eq!(dual, fb.solution);
        let bf = backward_forward(ball.clone(), t, &config, &x0).unwrap();
        assert!(bf.converged());
        assert!((bf.solution.distance(&[0.5, 0.0].into())) < 1e-10);
    }
}
