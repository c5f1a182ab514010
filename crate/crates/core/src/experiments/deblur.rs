//! Wavelet-regularized deblurring in coefficient coordinates.
//!
//! With `W` the Haar synthesis operator, `R` the blur and `M = RW`, the problem
//!
//! ```text
//! minimize  reg·‖x‖₁ + ½‖Mx − b‖²   subject to  Wx ∈ [0, 1]ⁿ
//! ```
//!
//! is split as `A = N_{[0,1]ⁿ} ∘ W`, `B = ∂(reg·‖·‖₁)` and `T = Mᵀ(M· − b)`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::blur::{Blur, Composed, Kernel};
use super::haar::Haar2d;
use crate::error::{Error, Result};
use crate::io::Image;
use crate::operators::{L1Norm, LeastSquares, LinearMap, ResolventOperator, Vector};
use crate::splitting::{solve, SolverConfig, Status, ThreeOperatorProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct ImageProblemSpec {
    pub width: usize,
    pub height: usize,
    /// Side of the square Gaussian stencil; 1 gives the identity blur.
    pub kernel_size: usize,
    pub kernel_std: f64,
    pub noise_std: f64,
    pub seed: u64,
    pub reg_weight: f64,
    pub stages: usize,
}

impl Default for ImageProblemSpec {
    fn default() -> Self {
        ImageProblemSpec {
            width: 32,
            height: 32,
            kernel_size: 9,
            kernel_std: 4.0,
            noise_std: 1e-3,
            seed: 0,
            reg_weight: 2e-5,
            stages: 3,
        }
    }
}

impl ImageProblemSpec {
    pub fn kernel(&self) -> Result<Kernel> {
        if self.kernel_size == 1 {
            Ok(Kernel::identity())
        } else {
            Kernel::gaussian(self.kernel_size, self.kernel_std)
        }
    }

    pub fn validate(&self) -> Result<()> {
        Haar2d::new(self.width, self.height, self.stages)?;
        self.kernel()?;
        if !(self.noise_std >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "noise_std",
                value: self.noise_std,
                reason: "noise level must be nonnegative",
            });
        }
        if !(self.reg_weight >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "reg_weight",
                value: self.reg_weight,
                reason: "regularization weight must be nonnegative",
            });
        }
        Ok(())
    }
}

/// Piecewise-constant test picture with values in `[0.1, 0.9]`.
pub fn synthetic_image(width: usize, height: usize) -> Image {
    let (w, h) = (width as f64, height as f64);
    let mut pixels = vec![0.1; width * height];
    for r in 0..height {
        for c in 0..width {
            let (y, x) = ((r as f64 + 0.5) / h, (c as f64 + 0.5) / w);
            let mut v = 0.1;
            if (0.12..0.45).contains(&y) && (0.18..0.82).contains(&x) {
                v = 0.9;
            }
            if (x - 0.35).powi(2) + (y - 0.7).powi(2) < 0.2f64.powi(2) {
                v = 0.5;
            }
            if (0.6..0.9).contains(&y) && (0.62..0.88).contains(&x) {
                v = 0.7;
            }
            pixels[r * width + c] = v;
        }
    }
    Image::new(width, height, pixels).expect("sizes agree")
}

/// `N_{[0,1]ⁿ} ∘ W` in coefficient space; its resolvent is `Wᵀ ∘ clamp ∘ W` because `W` is orthonormal.
#[derive(Debug, Clone, Copy)]
pub struct WaveletBox {
    haar: Haar2d,
}

impl WaveletBox {
    pub fn new(haar: Haar2d) -> Self {
        WaveletBox { haar }
    }
}

impl ResolventOperator for WaveletBox {
    fn dim(&self) -> usize {
        self.haar.len()
    }

    fn resolve(&self, _gamma: f64, x: &Vector) -> Vector {
        let mut img = self.haar.inverse(x);
        img.iter_mut().for_each(|p| *p = p.clamp(0.0, 1.0));
        self.haar.forward(&img).into()
    }
}

/// An assembled deblurring instance.
pub struct DeblurProblem {
    pub spec: ImageProblemSpec,
    pub problem: ThreeOperatorProblem,
    /// `R(truth)` before noise.
    pub blurred: Vector,
    /// `b = R(truth) + noise`.
    pub observed: Vector,
    /// Starting point `Wᵀb`.
    pub x0: Vector,
    haar: Haar2d,
    data_term: Arc<LeastSquares>,
}

/// Result of a fixed number of iterations.
#[derive(Debug, Clone)]
pub struct DeblurRun {
    /// Final shadow iterate in coefficient coordinates.
    pub coeffs: Vector,
    /// Objective at `u_k` for every iteration performed.
    pub objectives: Vec<f64>,
    pub status: Status,
}

impl DeblurRun {
    pub fn final_objective(&self) -> f64 {
        self.objectives.last().copied().unwrap_or(f64::NAN)
    }
}

pub fn build_deblur(spec: &ImageProblemSpec, truth: &Image) -> Result<DeblurProblem> {
    spec.validate()?;
    if truth.width() != spec.width || truth.height() != spec.height {
        return Err(Error::DimensionMismatch {
            expected: spec.width * spec.height,
            found: truth.width() * truth.height(),
        });
    }
    if truth.pixels().iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidParameter {
            name: "truth",
            value: f64::NAN,
            reason: "pixel values must lie in [0, 1]",
        });
    }
    let haar = Haar2d::new(spec.width, spec.height, spec.stages)?;
    let blur: Arc<dyn LinearMap> = Arc::new(Blur::new(spec.width, spec.height, spec.kernel()?));
    let blurred: Vector = blur.apply(truth.pixels()).into();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let observed: Vector = blurred
        .iter()
        .map(|v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + spec.noise_std * z
        })
        .collect::<Vec<_>>()
        .into();

    let m: Arc<dyn LinearMap> = Arc::new(Composed::new(blur, Arc::new(haar))?);
    let data_term = Arc::new(LeastSquares::new(m, observed.clone())?);
    let n = haar.len();
    let problem = ThreeOperatorProblem::new(
        Arc::new(WaveletBox::new(haar)),
        Arc::new(L1Norm {
            dim: n,
            weight: spec.reg_weight,
        }),
        data_term.clone(),
    )?;
    let x0 = haar.forward(&observed).into();
    Ok(DeblurProblem {
        spec: spec.clone(),
        problem,
        blurred,
        observed,
        x0,
        haar,
        data_term,
    })
}

impl DeblurProblem {
    /// `reg·‖x‖₁ + ½‖Mx − b‖²`.
    pub fn objective(&self, x: &Vector) -> f64 {
        self.spec.reg_weight * x.norm_l1() + self.data_term.value(x)
    }

    pub fn beta(&self) -> f64 {
        self.problem.beta()
    }

    /// The data map `M = R∘W` from coefficients to blurred pixels.
    pub fn data_map(&self) -> &dyn LinearMap {
        self.data_term.map()
    }

    /// Image `Wx` for coefficients `x`.
    pub fn image(&self, coeffs: &Vector) -> Image {
        Image::new(self.spec.width, self.spec.height, self.haar.inverse(coeffs))
            .expect("sizes agree")
    }

    pub fn observed_image(&self) -> Image {
        Image::new(self.spec.width, self.spec.height, self.observed.to_vec()).expect("sizes agree")
    }

    pub fn blurred_image(&self) -> Image {
        Image::new(self.spec.width, self.spec.height, self.blurred.to_vec()).expect("sizes agree")
    }

    /// `iterations` Davis–Yin steps from `x0` at constant `(γ, λ)`.
    pub fn run(&self, gamma: f64, lambda: f64, iterations: usize) -> Result<DeblurRun> {
        let config = SolverConfig::constant(gamma, lambda)
            .with_max_iter(iterations)
            .with_tol_residual(0.0);
        let outcome = solve(&self.problem, &config, &self.x0)?;
        let objectives = outcome
            .trace
            .records
            .iter()
            .map(|r| self.objective(&r.u))
            .collect();
        Ok(DeblurRun {
            coeffs: outcome.solution,
            objectives,
            status: outcome.status,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> ImageProblemSpec {
        ImageProblemSpec {
            width: 4,
            height: 4,
            kernel_size: 3,
            kernel_std: 1.0,
            noise_std: 0.0,
            seed: 3,
            reg_weight: 1e-3,
            stages: 1,
        }
    }

    #[test]
    fn synthetic_image_in_range() {
        let img = synthetic_image(32, 32);
        assert!(img.pixels().iter().all(|p| (0.1..=0.9).contains(p)));
        let distinct: std::collections::BTreeSet<u64> =
            img.pixels().iter().map(|p| p.to_bits()).collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn noiseless_truth_has_zero_misfit() {
        let spec = ImageProblemSpec {
            noise_std: 0.0,
            ..ImageProblemSpec::default()
        };
        let truth = synthetic_image(32, 32);
        let dp = build_deblur(&spec, &truth).unwrap();
        let coeffs: Vector = Haar2d::new(32, 32, 3)
            .unwrap()
            .forward(truth.pixels())
            .into();
        assert!(dp.data_term.value(&coeffs) < 1e-28);
    }

    #[test]
    fn noise_is_seeded() {
        let truth = synthetic_image(32, 32);
        let spec = ImageProblemSpec::default();
        let a = build_deblur(&spec, &truth).unwrap();
        let b = build_deblur(&spec, &truth).unwrap();
        assert_eq!(a.observed, b.observed);
        let noise = (&a.observed - &a.blurred).norm() / 32.0;
        assert!((noise - 1e-3).abs() < 1e-4, "{noise}");
        let other = build_deblur(&ImageProblemSpec { seed: 1, ..spec }, &truth).unwrap();
        assert_ne!(a.observed, other.observed);
    }

    #[test]
    fn box_resolvent_clamps_image() {
        let haar = Haar2d::new(8, 8, 3).unwrap();
        let img: Vec<f64> = (0..64).map(|i| i as f64 / 32.0 - 0.5).collect();
        let out = WaveletBox::new(haar).resolve(1.0, &haar.forward(&img).into());
        let back = haar.inverse(&out);
        for (a, b) in img.iter().zip(&back) {
            assert!((a.clamp(0.0, 1.0) - b).abs() < 1e-14);
        }
    }

    /// Coordinate descent on the unconstrained problem; valid as an oracle
    /// when the box turns out inactive at its answer.
    fn lasso_coordinate_descent(dp: &DeblurProblem, sweeps: usize) -> Vector {
        let n = dp.x0.dim();
        let m = dp.data_term.map();
        let columns: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                m.apply(&e)
            })
            .collect();
        let mut x = vec![0.0; n];
        let mut resid: Vec<f64> = dp.observed.iter().map(|b| -b).collect();
        for _ in 0..sweeps {
            for j in 0..n {
                let col = &columns[j];
                let norm2: f64 = col.iter().map(|c| c * c).sum();
                let grad: f64 = col.iter().zip(&resid).map(|(c, r)| c * r).sum();
                let z = x[j] - grad / norm2;
                let t = dp.spec.reg_weight / norm2;
                let new = z.signum() * (z.abs() - t).max(0.0);
                let delta = new - x[j];
                if delta != 0.0 {
                    resid.iter_mut().zip(col).for_each(|(r, c)| *r += delta * c);
                    x[j] = new;
                }
            }
        }
        x.into()
    }

    #[test]
    fn small_instance_matches_coordinate_descent() {
        let truth = Image::new(
            4,
            4,
            (0..16)
                .map(|i| 0.3 + 0.4 * ((i * 7 % 16) as f64) / 15.0)
                .collect(),
        )
        .unwrap();
        let dp = build_deblur(&small_spec(), &truth).unwrap();
        let oracle = lasso_coordinate_descent(&dp, 20_000);
        assert!(dp
            .image(&oracle)
            .pixels()
            .iter()
            .all(|p| (0.0..=1.0).contains(p)));

        let config = SolverConfig::constant(1.5 * dp.beta(), 1.0)
            .with_max_iter(200_000)
            .with_tol_residual(1e-13);
        let out = solve(&dp.problem, &config, &dp.x0).unwrap();
        assert!(out.converged());
        let gap = (dp.objective(&out.solution) - dp.objective(&oracle)).abs();
        assert!(gap < 1e-6, "{gap}");
        assert!(out.solution.distance(&oracle) < 1e-6);
    }

    #[test]
    fn rejects_bad_specs() {
        let truth = synthetic_image(32, 32);
        assert!(build_deblur(
            &ImageProblemSpec {
                width: 30,
                ..Default::default()
            },
            &synthetic_image(30, 32)
        )
        .is_err());
        assert!(build_deblur(
            &ImageProblemSpec {
                kernel_size: 4,
                ..Default::default()
            },
            &truth
        )
        .is_err());
        assert!(build_deblur(
            &ImageProblemSpec {
                noise_std: -1.0,
                ..Default::default()
            },
            &truth
        )
        .is_err());
        assert!(build_deblur(&ImageProblemSpec::default(), &synthetic_image(16, 16)).is_err());
    }
}
