use std::sync::Arc;

use super::linalg::{power_iteration, LinearMap, Vector};
use super::{
    ball_projection, box_projection, check_box, soft_threshold, CocoerciveMap, ResolventOperator,
};
use crate::error::{Error, Result};

/// The zero operator. As a resolvent operator `J_{γ0} = Id`; as a cocoercive
/// map it is `β`-cocoercive for every `β`, reported as `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub dim: usize,
}

impl Zero {
    pub fn new(dim: usize) -> Self {
        Zero { dim }
    }
}

impl ResolventOperator for Zero {
    fn dim(&self) -> usize {
        self.dim
    }

    fn resolve(&self, _gamma: f64, x: &Vector) -> Vector {
        x.clone()
    }
}

impl CocoerciveMap for Zero {
    fn dim(&self) -> usize {
        self.dim
    }

    fn beta(&self) -> f64 {
        f64::INFINITY
    }

    fn apply(&self, x: &Vector) -> Vector {
        Vector::zeros(x.dim())
    }
}

/// Normal cone of a closed ball; its resolvent is the ball projector for every `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vector,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius",
                value: radius,
                reason: "ball radius must be positive",
            });
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn project(&self, x: &Vector) -> Vector {
        ball_projection(&self.center, self.radius, x)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.distance(&self.center) <= self.radius
    }
}

impl ResolventOperator for Ball {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn resolve(&self, _gamma: f64, x: &Vector) -> Vector {
        self.project(x)
    }
}

/// Normal cone of the box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    lo: Vector,
    hi: Vector,
}

impl BoxSet {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        hi.check_dim(lo.dim())?;
        check_box(&lo, &hi)?;
        Ok(BoxSet { lo, hi })
    }

    pub fn unit(dim: usize) -> Self {
        BoxSet {
            lo: Vector::zeros(dim),
            hi: Vector::filled(dim, 1.0),
        }
    }

    pub fn project(&self, x: &Vector) -> Vector {
        box_projection(&self.lo, &self.hi, x)
    }
}

impl ResolventOperator for BoxSet {
    fn dim(&self) -> usize {
        self.lo.dim()
    }

    fn resolve(&self, _gamma: f64, x: &Vector) -> Vector {
        self.project(x)
    }
}

/// Subdifferential of `weight·‖·‖₁`; the resolvent soft-thresholds at `γ·weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Norm {
    pub dim: usize,
    pub weight: f64,
}

impl ResolventOperator for L1Norm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn resolve(&self, gamma: f64, x: &Vector) -> Vector {
        soft_threshold(gamma * self.weight, x)
    }
}

/// `T = scale·Id`, which is `(1/scale)`-cocoercive and `scale`-strongly monotone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledIdentity {
    pub dim: usize,
    pub scale: f64,
}

impl ScaledIdentity {
    pub fn identity(dim: usize) -> Self {
        ScaledIdentity { dim, scale: 1.0 }
    }
}

impl CocoerciveMap for ScaledIdentity {
    fn dim(&self) -> usize {
        self.dim
    }

    fn beta(&self) -> f64 {
        1.0 / self.scale
    }

    fn modulus(&self) -> f64 {
        self.scale
    }

    fn apply(&self, x: &Vector) -> Vector {
        if self.scale == 1.0 {
            x.clone()
        } else {
            x.scale(self.scale)
        }
    }
}

/// `T(x) = Mᵀ(Mx − b)` with `β = 1/‖MᵀM‖`.
#[derive(Clone)]
pub struct LeastSquares {
    map: Arc<dyn LinearMap>,
    b: Vector,
    beta: f64,
}

impl LeastSquares {
    /// Estimates `‖MᵀM‖` by power iteration (relative accuracy 1e-12).
    pub fn new(map: Arc<dyn LinearMap>, b: Vector) -> Result<Self> {
        let top = power_iteration(map.as_ref(), 1e-12, 100_000, 0x5eed)?;
        Self::with_beta(map, b, 1.0 / top)
    }

    pub fn with_beta(map: Arc<dyn LinearMap>, b: Vector, beta: f64) -> Result<Self> {
        b.check_dim(map.rows())?;
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "cocoercivity constant must be positive",
            });
        }
        Ok(LeastSquares { map, b, beta })
    }

    pub fn map(&self) -> &dyn LinearMap {
        self.map.as_ref()
    }

    pub fn rhs(&self) -> &Vector {
        &self.b
    }

    /// `½‖Mx − b‖²`.
    pub fn value(&self, x: &Vector) -> f64 {
        let r = self.map.apply(x);
        0.5 * r
            .iter()
            .zip(self.b.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
    }
}

pub(crate) fn normal_equations_residual(map: &dyn LinearMap, b: &Vector, x: &Vector) -> Vector {
    let mut r = map.apply(x);
    r.iter_mut().zip(b.iter()).for_each(|(ri, bi)| *ri -= bi);
    map.apply_adjoint(&r).into()
}

impl CocoerciveMap for LeastSquares {
    fn dim(&self) -> usize {
        self.map.cols()
    }

    fn beta(&self) -> f64 {
        self.beta
    }

    fn apply(&self, x: &Vector) -> Vector {
        normal_equations_residual(self.map.as_ref(), &self.b, x)
    }
}

/// `T = (1/ρ)(Id − P_C)`, the gradient of `(1/(2ρ)) d²(·, C)`.
///
/// `P_C` is taken as the resolvent of the normal cone of `C` (any `γ`). The
/// declared cocoercivity constant is `ρ`: the gradient is `(1/ρ)`-Lipschitz
/// and convex, hence `ρ`-cocoercive by Baillon–Haddad.
#[derive(Clone)]
pub struct SquaredDistanceGradient {
    set: Arc<dyn ResolventOperator>,
    rho: f64,
}

impl SquaredDistanceGradient {
    pub fn new(set: Arc<dyn ResolventOperator>, rho: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "rho must be positive",
            });
        }
        Ok(SquaredDistanceGradient { set, rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn project(&self, x: &Vector) -> Vector {
        self.set.resolve(1.0, x)
    }
}

impl CocoerciveMap for SquaredDistanceGradient {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn beta(&self) -> f64 {
        self.rho
    }

    fn apply(&self, x: &Vector) -> Vector {
        let p = self.project(x);
        (x - &p).scale(1.0 / self.rho)
    }
}

/// `T̃(x) = (1/μ)(x − q) + T(x)`, cocoercive with constant `(1/β + 1/μ)⁻¹`.
///
/// A zero of `A + B + T̃` is the resolvent of `A + B + T` with parameter `μ` at `q`.
#[derive(Clone)]
pub struct ShiftedMap {
    inner: Arc<dyn CocoerciveMap>,
    mu: f64,
    q: Vector,
}

impl ShiftedMap {
    pub fn new(inner: Arc<dyn CocoerciveMap>, mu: f64, q: Vector) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "resolvent parameter must be positive",
            });
        }
        q.check_dim(inner.dim())?;
        Ok(ShiftedMap { inner, mu, q })
    }
}

impl CocoerciveMap for ShiftedMap {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn beta(&self) -> f64 {
        1.0 / (1.0 / self.inner.beta() + 1.0 / self.mu)
    }

    fn modulus(&self) -> f64 {
        self.inner.modulus() + 1.0 / self.mu
    }

    fn apply(&self, x: &Vector) -> Vector {
        let t = self.inner.apply(x);
        let inv_mu = 1.0 / self.mu;
        x.iter()
            .zip(self.q.iter())
            .zip(t.iter())
            .map(|((xi, qi), ti)| inv_mu * (xi - qi) + ti)
            .collect::<Vec<_>>()
            .into()
    }
}
