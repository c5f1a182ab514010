//! The Davis–Yin iteration for `0 ∈ (A + B + T)(x)`.
//!
//! With `u_k = J_{γA}(x_k)`, `v_k = J_{γB}(2u_k − x_k − γT(u_k))` and
//! `x_{k+1} = x_k + λ_k(v_k − u_k)`, the stepsize may be taken anywhere in
//! `]0, 4β[` provided the relaxation parameters stay in `]0, 2 − γ/(2β)]`.
//! The shadow sequence `u_k` converges to a zero of the sum and `x_k` to a
//! fixed point of the Davis–Yin operator.

mod diagnostics;
mod engine;
mod trace;

use std::fmt;
use std::sync::Arc;

pub use diagnostics::{
    fejer_report, residual_report, step_inequality_margin, MonotonicityReport, FEJER_SLACK,
    RESIDUAL_SLACK, STEP_INEQUALITY_SLACK,
};
pub(crate) use engine::run;
pub use engine::{
    backward_forward, davis_yin_step, douglas_rachford, dy_operator_apply, forward_backward, solve,
    SolveOutcome, Status, Step, StopReason,
};
pub use trace::{fmt_f64, Trace, TraceRecord};

use crate::error::{Error, Result, Violation};
use crate::operators::{CocoerciveMap, ResolventOperator, Vector};

/// The inclusion `0 ∈ (A + B + T)(x)` with `T` cocoercive.
#[derive(Clone)]
pub struct ThreeOperatorProblem {
    a: Arc<dyn ResolventOperator>,
    b: Arc<dyn ResolventOperator>,
    t: Arc<dyn CocoerciveMap>,
    dim: usize,
}

impl fmt::Debug for ThreeOperatorProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThreeOperatorProblem")
            .field("dim", &self.dim)
            .field("beta", &self.beta())
            .finish_non_exhaustive()
    }
}

impl ThreeOperatorProblem {
    pub fn new(
        a: Arc<dyn ResolventOperator>,
        b: Arc<dyn ResolventOperator>,
        t: Arc<dyn CocoerciveMap>,
    ) -> Result<Self> {
        let dim = a.dim();
        for found in [b.dim(), t.dim()] {
            if found != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found,
                });
            }
        }
        let beta = t.beta();
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "cocoercivity constant must be positive",
            });
        }
        Ok(ThreeOperatorProblem { a, b, t, dim })
    }

    pub fn a(&self) -> &dyn ResolventOperator {
        self.a.as_ref()
    }

    pub fn b(&self) -> &dyn ResolventOperator {
        self.b.as_ref()
    }

    pub fn t(&self) -> &dyn CocoerciveMap {
        self.t.as_ref()
    }

    pub fn a_arc(&self) -> Arc<dyn ResolventOperator> {
        self.a.clone()
    }

    pub fn b_arc(&self) -> Arc<dyn ResolventOperator> {
        self.b.clone()
    }

    pub fn t_arc(&self) -> Arc<dyn CocoerciveMap> {
        self.t.clone()
    }

    /// Cocoercivity constant of `T`.
    pub fn beta(&self) -> f64 {
        self.t.beta()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Relaxation parameters `λ_k`.
#[derive(Clone)]
pub enum RelaxationSchedule {
    Constant(f64),
    /// Explicit values; the last one repeats once the table is exhausted.
    Table(Vec<f64>),
    Rule {
        rule: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
        description: String,
    },
}

impl RelaxationSchedule {
    pub fn rule(
        description: impl Into<String>,
        rule: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RelaxationSchedule::Rule {
            rule: Arc::new(rule),
            description: description.into(),
        }
    }

    pub fn at(&self, k: usize) -> f64 {
        match self {
            RelaxationSchedule::Constant(l) => *l,
            RelaxationSchedule::Table(values) => match values.get(k) {
                Some(v) => *v,
                None => values.last().copied().unwrap_or(f64::NAN),
            },
            RelaxationSchedule::Rule { rule, .. } => rule(k),
        }
    }
}

impl fmt::Debug for RelaxationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelaxationSchedule::Constant(l) => f.debug_tuple("Constant").field(l).finish(),
            RelaxationSchedule::Table(v) => f.debug_tuple("Table").field(v).finish(),
            RelaxationSchedule::Rule { description, .. } => f
                .debug_struct("Rule")
                .field("description", description)
                .finish(),
        }
    }
}

/// Stop as soon as `‖u_k − point‖ < tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowReference {
    pub point: Vector,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub gamma: f64,
    pub schedule: RelaxationSchedule,
    pub max_iter: usize,
    /// Stop when `‖v_k − u_k‖ ≤ tol_residual`.
    pub tol_residual: f64,
    pub reference: Option<ShadowReference>,
    pub record_trace: bool,
}

impl SolverConfig {
    pub fn new(gamma: f64, schedule: RelaxationSchedule) -> Self {
        SolverConfig {
            gamma,
            schedule,
            max_iter: 10_000,
            tol_residual: 1e-12,
            reference: None,
            record_trace: true,
        }
    }

    pub fn constant(gamma: f64, lambda: f64) -> Self {
        SolverConfig::new(gamma, RelaxationSchedule::Constant(lambda))
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_tol_residual(mut self, tol: f64) -> Self {
        self.tol_residual = tol;
        self
    }

    pub fn with_reference(mut self, point: Vector, tol: f64) -> Self {
        self.reference = Some(ShadowReference { point, tol });
        self
    }

    pub fn recording(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }
}

/// Non-fatal findings of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Every `λ_k` equals `2 − γ/(2β)`, so `Σ λ_k(2 − γ/(2β) − λ_k)` is finite and
    /// convergence of the residual is only guaranteed under uniform monotonicity.
    ConstantAtBound { lambda: f64, bound: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ConstantAtBound { lambda, bound } => write!(
                f,
                "relaxation is constantly {lambda} = 2 - gamma/(2 beta) = {bound}; the divergence condition on the relaxation fails"
            ),
        }
    }
}

/// Upper bound `2 − γ/(2β)` on the relaxation parameters.
pub fn relaxation_bound(gamma: f64, beta: f64) -> f64 {
    2.0 - gamma / (2.0 * beta)
}

/// Checks `γ ∈ ]0, 4β[` and `λ_k ∈ ]0, 2 − γ/(2β)]` for `k < max_iter`.
pub fn validate(problem: &ThreeOperatorProblem, config: &SolverConfig) -> Result<Vec<Warning>> {
    validate_parameters(problem.beta(), config)
}

pub(crate) fn validate_parameters(beta: f64, config: &SolverConfig) -> Result<Vec<Warning>> {
    let mut violations = Vec::new();
    let gamma = config.gamma;
    let upper = 4.0 * beta;
    if !(gamma > 0.0 && gamma < upper) {
        violations.push(Violation::Stepsize { gamma, upper });
    }
    if config.max_iter == 0 {
        violations.push(Violation::MaxIter);
    }
    let bound = relaxation_bound(gamma, beta);
    let checked = match &config.schedule {
        RelaxationSchedule::Constant(_) => 1,
        _ => config.max_iter.max(1),
    };
    let mut all_at_bound = true;
    for k in 0..checked {
        let lambda = config.schedule.at(k);
        if !(lambda > 0.0 && lambda <= bound) {
            violations.push(Violation::Relaxation {
                k,
                lambda,
                upper: bound,
            });
            // one offending value per schedule is enough to report
            break;
        }
        all_at_bound &= lambda == bound;
    }
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let mut warnings = Vec::new();
    if all_at_bound {
        warnings.push(Warning::ConstantAtBound {
            lambda: config.schedule.at(0),
            bound,
        });
    }
    Ok(warnings)
}
