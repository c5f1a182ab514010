//! Vector arithmetic and a catalog of concrete operators.
//!
//! Set-valued maximally monotone operators are represented through their
//! resolvents `J_{γA} = (Id + γA)^{-1}`; single-valued cocoercive operators
//! are represented directly. Every catalog entry is immutable and can be
//! shared between concurrent solves.

mod catalog;
mod checks;
pub mod linalg;

pub use catalog::{
    Ball, BoxSet, L1Norm, LeastSquares, ScaledIdentity, ShiftedMap, SquaredDistanceGradient, Zero,
};
pub use checks::{
    check_cocoercive, check_firmly_nonexpansive, InequalityReport, CHECK_SLACK, DEFAULT_CHECK_SEED,
};
pub use linalg::{power_iteration, DenseMatrix, LinearMap, Vector};

use crate::error::{Error, Result};

/// A maximally monotone operator given by its resolvent.
pub trait ResolventOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// Monotonicity modulus `α` (the operator is `α`-monotone). Zero for the
    /// normal cones and subdifferentials in the catalog.
    fn modulus(&self) -> f64 {
        0.0
    }

    /// Evaluates `J_{γA}(x)`. Callers guarantee `1 + γα > 0` and matching dimensions.
    fn resolve(&self, gamma: f64, x: &Vector) -> Vector;
}

/// A single-valued `β`-cocoercive operator.
pub trait CocoerciveMap: Send + Sync {
    fn dim(&self) -> usize;

    /// Declared cocoercivity constant; `f64::INFINITY` for the zero map.
    fn beta(&self) -> f64;

    fn modulus(&self) -> f64 {
        0.0
    }

    fn apply(&self, x: &Vector) -> Vector;
}

/// Projection onto the closed ball `B(center, radius)`.
pub fn project_ball(center: &Vector, radius: f64, x: &Vector) -> Result<Vector> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
            reason: "ball radius must be positive",
        });
    }
    x.check_dim(center.dim())?;
    Ok(ball_projection(center, radius, x))
}

pub(crate) fn ball_projection(center: &Vector, radius: f64, x: &Vector) -> Vector {
    let offset = x - center;
    let dist = offset.norm();
    if dist <= radius {
        x.clone()
    } else {
        center.add_scaled(radius / dist, &offset)
    }
}

/// Componentwise clamp onto `[lo, hi]`.
pub fn project_box(lo: &Vector, hi: &Vector, x: &Vector) -> Result<Vector> {
    hi.check_dim(lo.dim())?;
    x.check_dim(lo.dim())?;
    check_box(lo, hi)?;
    Ok(box_projection(lo, hi, x))
}

pub(crate) fn check_box(lo: &Vector, hi: &Vector) -> Result<()> {
    match lo.iter().zip(hi.iter()).position(|(l, h)| l > h) {
        Some(index) => Err(Error::InvalidBox {
            index,
            lo: lo[index],
            hi: hi[index],
        }),
        None => Ok(()),
    }
}

pub(crate) fn box_projection(lo: &Vector, hi: &Vector, x: &Vector) -> Vector {
    x.iter()
        .zip(lo.iter().zip(hi.iter()))
        .map(|(v, (l, h))| v.max(*l).min(*h))
        .collect::<Vec<_>>()
        .into()
}

/// Proximity operator of `t‖·‖₁`.
pub fn soft_threshold(t: f64, x: &Vector) -> Vector {
    x.map(|v| {
        if v > t {
            v - t
        } else if v < -t {
            v + t
        } else {
            0.0
        }
    })
}

/// Resolvent of the zero operator, i.e. the identity.
pub fn zero_operator_resolvent(_gamma: f64, x: &Vector) -> Vector {
    x.clone()
}

/// Gradient `Mᵀ(Mx − b)` of `½‖Mx − b‖²`.
pub fn least_squares_gradient(m: &dyn LinearMap, b: &Vector, x: &Vector) -> Result<Vector> {
    x.check_dim(m.cols())?;
    b.check_dim(m.rows())?;
    Ok(catalog::normal_equations_residual(m, b, x))
}

/// `(1/ρ)(x − P_C(x))`, the gradient of `(1/(2ρ)) d²(·, C)`.
pub fn squared_distance_gradient(
    projector: impl Fn(&Vector) -> Vector,
    rho: f64,
    x: &Vector,
) -> Vector {
    let p = projector(x);
    (x - &p).scale(1.0 / rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::oracle_minimize_2d;
    use crate::experiments::SearchRect;

    #[test]
    fn ball_interior_point_unchanged() {
        let p = project_ball(&Vector::zeros(2), 1.0, &[0.3, 0.4].into()).unwrap();
        assert_eq!(p.as_slice(), &[0.3, 0.4]);
    }

    #[test]
    fn ball_radial_scaling() {
        let p = project_ball(&Vector::zeros(2), 1.0, &[3.0, 4.0].into()).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn ball_projection_matches_grid_oracle() {
        let center = Vector::from([-1.6, -0.75]);
        let x = Vector::zeros(2);
        let p = project_ball(&center, 0.55, &x).unwrap();
        let norm = (1.6f64 * 1.6 + 0.75 * 0.75).sqrt();
        assert!((p[0] - (-1.6 + 0.55 * 1.6 / norm)).abs() < 1e-15);
        assert!((p[1] - (-0.75 + 0.55 * 0.75 / norm)).abs() < 1e-15);

        let c = center.clone();
        let oracle = oracle_minimize_2d(
            |y: &Vector| y.norm_squared(),
            move |y: &Vector| y.distance(&c) <= 0.55,
            SearchRect::new([-2.5, -1.5], [-0.5, 0.5]),
            1e-10,
        )
        .unwrap();
        assert!(oracle.distance(&p) < 1e-8, "{oracle:?} vs {p:?}");
    }

    #[test]
    fn ball_center_is_fixed() {
        let c = Vector::from([1.0, -2.0]);
        assert_eq!(project_ball(&c, 0.5, &c).unwrap(), c);
    }

    #[test]
    fn ball_rejects_dimension_mismatch() {
        let err = project_ball(&Vector::zeros(2), 1.0, &Vector::zeros(3)).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        ));
        assert!(project_ball(&Vector::zeros(2), 0.0, &Vector::zeros(2)).is_err());
    }

    #[test]
    fn box_clamps() {
        let lo = Vector::zeros(3);
        let hi = Vector::filled(3, 1.0);
        let p = project_box(&lo, &hi, &[-0.5, 0.5, 1.5].into()).unwrap();
        assert_eq!(p.as_slice(), &[0.0, 0.5, 1.0]);
        let inside = Vector::from([0.1, 0.9, 0.0]);
        assert_eq!(project_box(&lo, &hi, &inside).unwrap(), inside);
        let p = project_box(
            &Vector::zeros(2),
            &Vector::filled(2, 1.0),
            &[2.0, 2.0].into(),
        )
        .unwrap();
        assert_eq!(p.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn box_rejects_inverted_bounds() {
        let err =
            project_box(&[0.0, 2.0].into(), &[1.0, 1.0].into(), &[0.0, 0.0].into()).unwrap_err();
        assert!(matches!(err, Error::InvalidBox { index: 1, .. }));
    }

    #[test]
    fn soft_threshold_three_cases() {
        let p = soft_threshold(1.0, &[2.0, -0.5, -3.0].into());
        assert_eq!(p.as_slice(), &[1.0, 0.0, -2.0]);
        assert_eq!(soft_threshold(1.0, &Vector::zeros(4)), Vector::zeros(4));
    }

    /// Minimizes `t|u| + ½(u − x)²` by bisection on its right derivative,
    /// which is nondecreasing; the minimizer is where it changes sign.
    fn scalar_prox_oracle(t: f64, x: f64) -> f64 {
        let right_derivative = |u: f64| (u - x) + if u >= 0.0 { t } else { -t };
        let (mut lo, mut hi) = (-x.abs() - t - 1.0, x.abs() + t + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if right_derivative(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    #[test]
    fn soft_threshold_matches_scalar_oracle() {
        let p = soft_threshold(0.25, &[0.3].into());
        assert!((p[0] - 0.05).abs() < 1e-15);
        assert!((scalar_prox_oracle(0.25, 0.3) - 0.05).abs() < 1e-8);

        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for t in [0.1, 1.0, 10.0] {
            for _ in 0..100 {
                let x: f64 = rng.random_range(-20.0..20.0);
                let got = soft_threshold(t, &[x].into())[0];
                let want = scalar_prox_oracle(t, x);
                assert!((got - want).abs() < 1e-8, "t={t} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn zero_resolvent_is_identity() {
        let x = Vector::from([1.0, 2.0]);
        assert_eq!(zero_operator_resolvent(0.7, &x), x);
        assert_eq!(
            zero_operator_resolvent(3.9, &Vector::zeros(3)),
            Vector::zeros(3)
        );
        assert_eq!(
            zero_operator_resolvent(1.0, &zero_operator_resolvent(1.0, &x)),
            x
        );
    }

    #[test]
    fn least_squares_examples() {
        let id = DenseMatrix::identity(2);
        let g = least_squares_gradient(&id, &Vector::zeros(2), &[1.0, 2.0].into()).unwrap();
        assert_eq!(g.as_slice(), &[1.0, 2.0]);

        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        let x = Vector::from([1.0, -1.0]);
        let b = Vector::from(m.apply(&x));
        assert_eq!(
            least_squares_gradient(&m, &b, &x).unwrap(),
            Vector::zeros(2)
        );

        let d = DenseMatrix::diagonal(&[2.0, 1.0]);
        let g = least_squares_gradient(&d, &Vector::zeros(2), &[1.0, 1.0].into()).unwrap();
        assert_eq!(g.as_slice(), &[4.0, 1.0]);
        let ls = LeastSquares::new(std::sync::Arc::new(d), Vector::zeros(2)).unwrap();
        assert!((ls.beta() - 0.25).abs() < 1e-12);

        assert!(least_squares_gradient(&id, &Vector::zeros(3), &Vector::zeros(2)).is_err());
    }

    #[test]
    fn squared_distance_gradient_examples() {
        let unit = |x: &Vector| ball_projection(&Vector::zeros(2), 1.0, x);
        assert_eq!(
            squared_distance_gradient(unit, 1.0, &[0.2, 0.1].into()),
            Vector::zeros(2)
        );
        assert_eq!(
            squared_distance_gradient(unit, 1.0, &[2.0, 0.0].into()).as_slice(),
            &[1.0, 0.0]
        );
    }
}
