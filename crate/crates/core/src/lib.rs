//! Three-operator splitting for `0 ∈ A(x) + B(x) + T(x)` with `A`, `B`
//! maximally monotone and `T` cocoercive.
//!
//! - [`operators`]: vectors, linear maps and a catalog of resolvents and cocoercive maps.
//! - [`splitting`]: the Davis–Yin iteration with stepsizes in `]0, 4β[`.
//! - [`strengthened`]: resolvents of `A + B + T` through the strengthened iteration.
//! - [`experiments`]: problem builders, parameter sweeps and brute-force oracles.
//! - [`io`]: PGM and CSV image formats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod io;
pub mod operators;
pub mod splitting;
pub mod strengthened;

pub use error::{Error, Result, Violation};
pub use operators::{CocoerciveMap, LinearMap, ResolventOperator, Vector};
pub use splitting::{
    solve, validate, RelaxationSchedule, SolveOutcome, SolverConfig, Status, ThreeOperatorProblem,
    Trace, Warning,
};
pub use strengthened::{resolvent_of_sum, resolvent_via_shift, StrengthenConfig};
