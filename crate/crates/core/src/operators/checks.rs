//! Sampled falsification tests for the defining inequalities of the catalog.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CocoerciveMap, ResolventOperator, Vector};

/// Absolute slack allowed on sampled inequality margins.
pub const CHECK_SLACK: f64 = 1e-10;

/// Seed used by the catalog invariants.
pub const DEFAULT_CHECK_SEED: u64 = 0xC0C0_E5CE;

/// Half-width of the sampling cube `[-10, 10]^n`.
const SAMPLE_BOX: f64 = 10.0;

/// Outcome of a sampled inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    /// Smallest observed margin; nonnegative margins satisfy the inequality.
    pub worst_margin: f64,
    pub samples: usize,
    pub pass: bool,
}

fn sample_pairs(dim: usize, samples: usize, seed: u64) -> impl Iterator<Item = (Vector, Vector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(move |_| {
        let mut draw = || -> Vector {
            (0..dim)
                .map(|_| rng.random_range(-SAMPLE_BOX..=SAMPLE_BOX))
                .collect::<Vec<_>>()
                .into()
        };
        (draw(), draw())
    })
}

fn report(worst_margin: f64, samples: usize) -> InequalityReport {
    InequalityReport {
        worst_margin,
        samples,
        pass: worst_margin >= -CHECK_SLACK,
    }
}

/// Worst margin of `⟨x − y, Tx − Ty⟩ − β‖Tx − Ty‖²` over sampled pairs.
pub fn check_cocoercive(map: &dyn CocoerciveMap, samples: usize, seed: u64) -> InequalityReport {
    let beta = map.beta();
    let worst = sample_pairs(map.dim(), samples.max(1), seed)
        .map(|(x, y)| {
            let d = &x - &y;
            let e = &map.apply(&x) - &map.apply(&y);
            let e2 = e.norm_squared();
            // β = ∞ only for the zero map, where e = 0
            let penalty = if e2 == 0.0 { 0.0 } else { beta * e2 };
            d.dot(&e) - penalty
        })
        .fold(f64::INFINITY, f64::min);
    report(worst, samples)
}

/// Worst margin of `⟨x − y, Jx − Jy⟩ − ‖Jx − Jy‖²` for `J = J_{γA}`.
pub fn check_firmly_nonexpansive(
    op: &dyn ResolventOperator,
    gamma: f64,
    samples: usize,
    seed: u64,
) -> InequalityReport {
    let worst = sample_pairs(op.dim(), samples.max(1), seed)
        .map(|(x, y)| {
            let d = &x - &y;
            let e = &op.resolve(gamma, &x) - &op.resolve(gamma, &y);
            d.dot(&e) - e.norm_squared()
        })
        .fold(f64::INFINITY, f64::min);
    report(worst, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{soft_threshold, Ball, L1Norm, ScaledIdentity, Zero};

    #[test]
    fn identity_is_exactly_one_cocoercive() {
        let r = check_cocoercive(&ScaledIdentity::identity(4), 1000, 1);
        assert!(r.pass);
        assert_eq!(r.worst_margin, 0.0);
    }

    #[test]
    fn identity_is_not_one_and_a_half_cocoercive() {
        struct Overclaim;
        impl CocoerciveMap for Overclaim {
            fn dim(&self) -> usize {
                2
            }
            fn beta(&self) -> f64 {
                1.5
            }
            fn apply(&self, x: &Vector) -> Vector {
                x.clone()
            }
        }
        let r = check_cocoercive(&Overclaim, 100, 1);
        assert!(!r.pass);
        assert!(r.worst_margin < 0.0);
    }

    #[test]
    fn doubled_identity_half_cocoercive() {
        let r = check_cocoercive(&ScaledIdentity { dim: 3, scale: 2.0 }, 1000, 5);
        assert!(r.pass);
        assert_eq!(r.worst_margin, 0.0);
    }

    #[test]
    fn firmly_nonexpansive_examples() {
        let r = check_firmly_nonexpansive(&Zero::new(2), 1.0, 500, 2);
        assert!(r.pass);
        assert_eq!(r.worst_margin, 0.0);
        let ball = Ball::new([1.0, 1.0].into(), 2.0).unwrap();
        assert!(check_firmly_nonexpansive(&ball, 1.0, 10_000, 2).pass);
        let l1 = L1Norm {
            dim: 2,
            weight: 1.0,
        };
        assert!(check_firmly_nonexpansive(&l1, 0.5, 10_000, 2).pass);
        assert_eq!(
            l1.resolve(0.5, &[1.0, -0.2].into()),
            soft_threshold(0.5, &[1.0, -0.2].into())
        );
    }

    #[test]
    fn expansive_map_fails() {
        struct Doubler;
        impl ResolventOperator for Doubler {
            fn dim(&self) -> usize {
                1
            }
            fn resolve(&self, _gamma: f64, x: &Vector) -> Vector {
                x.scale(2.0)
            }
        }
        assert!(!check_firmly_nonexpansive(&Doubler, 1.0, 10, 0).pass);
    }
}
