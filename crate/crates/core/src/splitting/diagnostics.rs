//! Convergence diagnostics evaluated on recorded traces.

use super::trace::Trace;
use super::ThreeOperatorProblem;
use crate::operators::Vector;

pub const FEJER_SLACK: f64 = 1e-12;
pub const RESIDUAL_SLACK: f64 = 1e-12;
pub const STEP_INEQUALITY_SLACK: f64 = 1e-10;

/// Largest one-step increase of a sequence that should be nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// `max_k (s_{k+1} − s_k)`; zero for sequences with fewer than two terms.
    pub max_increase: f64,
    pub pass: bool,
}

fn monotone(values: impl Iterator<Item = f64>, slack: f64) -> MonotonicityReport {
    let values: Vec<f64> = values.collect();
    let max_increase = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max);
    MonotonicityReport {
        max_increase,
        pass: max_increase <= slack,
    }
}

/// Fejér monotonicity of `(x_k)` with respect to `reference`.
pub fn fejer_report(trace: &Trace, reference: &Vector) -> MonotonicityReport {
    monotone(
        trace.records.iter().map(|r| r.x.distance(reference)),
        FEJER_SLACK,
    )
}

/// Monotonicity of the residuals `‖w_k‖`.
pub fn residual_report(trace: &Trace) -> MonotonicityReport {
    monotone(trace.residuals(), RESIDUAL_SLACK)
}

/// Worst value over consecutive records of
/// `⟨x_{k+1} − x_k, w_k − w_{k+1}⟩ − ‖w_k − w_{k+1}‖² − γ⟨T(u_{k+1}) − T(u_k), v_{k+1} − v_k⟩`,
/// which is nonnegative for monotone `A`, `B`. Returns `+∞` for traces shorter than two records.
pub fn step_inequality_margin(problem: &ThreeOperatorProblem, gamma: f64, trace: &Trace) -> f64 {
    let t = problem.t();
    trace
        .records
        .windows(2)
        .map(|pair| {
            let (cur, nxt) = (&pair[0], &pair[1]);
            let w_cur = &cur.v - &cur.u;
            let w_nxt = &nxt.v - &nxt.u;
            let dw = &w_cur - &w_nxt;
            let dx = &nxt.x - &cur.x;
            let dt = &t.apply(&nxt.u) - &t.apply(&cur.u);
            let dv = &nxt.v - &cur.v;
            dx.dot(&dw) - dw.norm_squared() - gamma * dt.dot(&dv)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::TraceRecord;

    fn trace_of(xs: &[f64]) -> Trace {
        let mut trace = Trace::default();
        for (k, &x) in xs.iter().enumerate() {
            trace.records.push(TraceRecord {
                k,
                x: [x].into(),
                u: [x].into(),
                v: [x].into(),
                residual: x.abs(),
                shadow_error: None,
            });
        }
        trace
    }

    #[test]
    fn constant_trace_has_zero_margin() {
        let r = fejer_report(&trace_of(&[1.0; 5]), &[0.0].into());
        assert!(r.pass);
        assert_eq!(r.max_increase, 0.0);
    }

    #[test]
    fn detects_moving_away() {
        let r = fejer_report(&trace_of(&[1.0, 0.5, 0.7]), &[0.0].into());
        assert!(!r.pass);
        assert!((r.max_increase - 0.2).abs() < 1e-15);
        assert!(!residual_report(&trace_of(&[1.0, 0.5, 0.7])).pass);
        assert!(residual_report(&trace_of(&[1.0, 0.5, 0.2])).pass);
    }
}
