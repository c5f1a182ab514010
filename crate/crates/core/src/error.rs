use std::fmt;

/// Errors produced by the operators, solvers and experiment builders.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid box: lower bound {lo} exceeds upper bound {hi} at index {index}")]
    InvalidBox { index: usize, lo: f64, hi: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "power iteration did not converge after {iterations} iterations (last estimate {estimate})"
    )]
    PowerIteration { estimate: f64, iterations: usize },

    #[error("non-finite value produced at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("parameter validation failed: {}", join(.0))]
    Validation(Vec<Violation>),

    #[error("no feasible point found in the search rectangle")]
    EmptyFeasibleRegion,

    #[error("image of size {width}x{height} is not divisible by {divisor}")]
    ImageShape {
        width: usize,
        height: usize,
        divisor: usize,
    },

    #[error("malformed {format} input: {message}")]
    Format {
        format: &'static str,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single violated condition found while validating solver parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// The stepsize must lie in `]0, upper[`.
    Stepsize { gamma: f64, upper: f64 },
    /// Relaxation parameter `k` must lie in `]0, upper]`.
    Relaxation { k: usize, lambda: f64, upper: f64 },
    /// `sigma_A + sigma_B + sigma_T > 0` fails.
    SigmaSum { sum: f64 },
    /// `sigma_T >= 0` fails.
    NegativeSigmaT { sigma_t: f64 },
    /// One of `theta * alpha + sigma` is negative.
    StrengthenedModulus { operator: &'static str, value: f64 },
    /// All three `theta * alpha + sigma` are zero.
    StrengthenedModuliAllZero,
    /// `1 + gamma * sigma` must be positive for the scaled resolvents.
    ResolventScaling { operator: &'static str, value: f64 },
    /// `theta` must be positive.
    Theta { theta: f64 },
    /// The strengthened cocoercivity constant `(theta/beta + sigma_T)^-1` is not positive.
    Mu { mu: f64 },
    /// Dimensions of the problem parts disagree.
    Dimension { expected: usize, found: usize },
    /// `max_iter` must be at least one.
    MaxIter,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Stepsize { gamma, upper } => {
                write!(f, "stepsize gamma = {gamma} outside ]0, {upper}[")
            }
            Violation::Relaxation { k, lambda, upper } => {
                write!(f, "relaxation lambda_{k} = {lambda} outside ]0, {upper}]")
            }
            Violation::SigmaSum { sum } => {
                write!(f, "sigma_A + sigma_B + sigma_T = {sum} must be > 0")
            }
            Violation::NegativeSigmaT { sigma_t } => write!(f, "sigma_T = {sigma_t} must be >= 0"),
            Violation::StrengthenedModulus { operator, value } => {
                write!(
                    f,
                    "theta*alpha_{operator} + sigma_{operator} = {value} must be >= 0"
                )
            }
            Violation::StrengthenedModuliAllZero => {
                write!(f, "theta*alpha + sigma is zero for all three operators")
            }
            Violation::ResolventScaling { operator, value } => {
                write!(f, "1 + gamma*sigma_{operator} = {value} must be > 0")
            }
            Violation::Theta { theta } => write!(f, "theta = {theta} must be > 0"),
            Violation::Mu { mu } => write!(f, "mu = (theta/beta + sigma_T)^-1 = {mu} must be > 0"),
            Violation::Dimension { expected, found } => {
                write!(
                    f,
                    "operator dimension {found} differs from problem dimension {expected}"
                )
            }
            Violation::MaxIter => write!(f, "max_iter must be at least 1"),
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
