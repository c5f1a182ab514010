//! Brute-force ground truth for two-dimensional strongly convex problems.

use crate::error::{Error, Result};
use crate::operators::Vector;

/// Axis-aligned search rectangle `[lo, hi]` in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl SearchRect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        SearchRect { lo, hi }
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        (0..2).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }

    fn diagonal(&self) -> f64 {
        ((self.hi[0] - self.lo[0]).powi(2) + (self.hi[1] - self.lo[1]).powi(2)).sqrt()
    }
}

const GRID: usize = 200;
const SHRINK: f64 = 10.0;

/// Minimizes `objective` over `{x in rect : feasible(x)}`.
///
/// A nested 200×200 grid search (window shrinking ×10 per level) locates the
/// minimizer to roughly `sqrt(ε)`. The result is then polished: first by
/// coordinate-wise bisection on central-difference slopes, which is accepted
/// when the unconstrained minimizer is feasible; otherwise by bisection along
/// the boundary, parametrized by angle around an interior point (the centroid
/// of the feasible grid nodes). Smooth minimizers come out accurate to about
/// `1e-10`; a minimizer sitting on a corner of the boundary is only located to
/// within the difference step (`~1e-6` relative).
pub fn oracle_minimize_2d<F, G>(
    objective: F,
    feasible: G,
    rect: SearchRect,
    tol: f64,
) -> Result<Vector>
where
    F: Fn(&Vector) -> f64,
    G: Fn(&Vector) -> bool,
{
    let inside = |p: [f64; 2]| rect.contains(p) && feasible(&Vector::from(p));
    let f = |p: [f64; 2]| objective(&Vector::from(p));

    // level 0 also yields an interior point for the boundary parametrization
    let mut centroid = [0.0; 2];
    let mut count = 0usize;
    let mut best: Option<([f64; 2], f64)> = None;
    let h0 = [
        (rect.hi[0] - rect.lo[0]) / GRID as f64,
        (rect.hi[1] - rect.lo[1]) / GRID as f64,
    ];
    for i in 0..=GRID {
        for j in 0..=GRID {
            let p = [rect.lo[0] + h0[0] * i as f64, rect.lo[1] + h0[1] * j as f64];
            if !inside(p) {
                continue;
            }
            centroid[0] += p[0];
            centroid[1] += p[1];
            count += 1;
            let v = f(p);
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((p, v));
            }
        }
    }
    let (mut best, mut best_val) = best.ok_or(Error::EmptyFeasibleRegion)?;
    centroid = [centroid[0] / count as f64, centroid[1] / count as f64];

    let scale = rect.diagonal().max(1.0);
    let mut half = [h0[0] * SHRINK / 2.0, h0[1] * SHRINK / 2.0];
    while half[0].max(half[1]) * 2.0 / GRID as f64 > (tol * 0.1).max(1e-13 * scale) {
        let lo = [best[0] - half[0], best[1] - half[1]];
        let h = [2.0 * half[0] / GRID as f64, 2.0 * half[1] / GRID as f64];
        for i in 0..=GRID {
            for j in 0..=GRID {
                let p = [lo[0] + h[0] * i as f64, lo[1] + h[1] * j as f64];
                if !inside(p) {
                    continue;
                }
                let v = f(p);
                if v < best_val {
                    best_val = v;
                    best = p;
                }
            }
        }
        half = [half[0] / SHRINK, half[1] / SHRINK];
    }

    if let Some(p) = polish_unconstrained(&f, &rect, best, tol) {
        if inside(p) {
            return Ok(Vector::from(p));
        }
    }
    if !inside(centroid) {
        return Ok(Vector::from(best));
    }
    let polished = polish_boundary(&f, &inside, &rect, centroid, best, tol);
    Ok(Vector::from(
        if f(polished) <= best_val + 1e-12 * best_val.abs().max(1.0) {
            polished
        } else {
            best
        },
    ))
}

/// Finds a root of the slope of a unimodal 1-D function on `[lo, hi]`.
///
/// Brackets shrink to three quarters so a kink near the midpoint stays inside.
fn slope_bisection(phi: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let step = |t: f64| 6e-6 * t.abs().max(1.0);
    let slope = |t: f64| {
        let d = step(t);
        phi(t + d) - phi(t - d)
    };
    if slope(lo) >= 0.0 {
        return lo;
    }
    if slope(hi) <= 0.0 {
        return hi;
    }
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let quarter = 0.25 * (hi - lo);
        if slope(mid) > 0.0 {
            hi = mid + quarter.min(step(mid));
        } else {
            lo = mid - quarter.min(step(mid));
        }
    }
    0.5 * (lo + hi)
}

/// Cyclic coordinate minimization within `rect`. Returns `None` when a
/// coordinate search ends on the rectangle boundary.
fn polish_unconstrained(
    f: &impl Fn([f64; 2]) -> f64,
    rect: &SearchRect,
    start: [f64; 2],
    tol: f64,
) -> Option<[f64; 2]> {
    let mut p = start;
    let inner_tol = (tol * 1e-2).max(1e-15);
    for _ in 0..500 {
        let prev = p;
        for axis in 0..2 {
            let (lo, hi) = (rect.lo[axis], rect.hi[axis]);
            let t = slope_bisection(
                |t| {
                    let mut q = p;
                    q[axis] = t;
                    f(q)
                },
                lo,
                hi,
                inner_tol,
            );
            if t <= lo || t >= hi {
                return None;
            }
            p[axis] = t;
        }
        let moved = ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2)).sqrt();
        if moved < inner_tol {
            break;
        }
    }
    Some(p)
}

fn polish_boundary(
    f: &impl Fn([f64; 2]) -> f64,
    inside: &impl Fn([f64; 2]) -> bool,
    rect: &SearchRect,
    center: [f64; 2],
    near: [f64; 2],
    tol: f64,
) -> [f64; 2] {
    let reach = rect.diagonal();
    let boundary = |angle: f64| -> [f64; 2] {
        let dir = [angle.cos(), angle.sin()];
        let (mut lo, mut hi) = (0.0, reach);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside([center[0] + mid * dir[0], center[1] + mid * dir[1]]) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        [center[0] + lo * dir[0], center[1] + lo * dir[1]]
    };
    let angle0 = (near[1] - center[1]).atan2(near[0] - center[0]);
    let radius = ((near[0] - center[0]).powi(2) + (near[1] - center[1]).powi(2))
        .sqrt()
        .max(1e-12);
    let window = 1e-3;
    let angle = slope_bisection(
        |a| f(boundary(a)),
        angle0 - window,
        angle0 + window,
        (tol * 1e-2 / radius).max(1e-15),
    );
    boundary(angle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_closest_to_origin() {
        let c = Vector::from([2.0, 0.0]);
        let p = oracle_minimize_2d(
            |x: &Vector| x.norm_squared(),
            |x: &Vector| x.distance(&c) <= 1.0,
            SearchRect::new([0.5, -1.5], [3.5, 1.5]),
            1e-10,
        )
        .unwrap();
        assert!(p.distance(&[1.0, 0.0].into()) < 1e-9, "{p:?}");
    }

    #[test]
    fn interior_minimum() {
        let p = oracle_minimize_2d(
            |x: &Vector| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.1).powi(2) + 0.5 * x[0] * x[1],
            |_| true,
            SearchRect::new([-1.0, -1.0], [1.0, 1.0]),
            1e-10,
        )
        .unwrap();
        // ∇ = (2(x−0.3) + 0.5y, 4(y+0.1) + 0.5x) = 0
        let det = 2.0 * 4.0 - 0.25;
        let want = [
            (0.6 * 4.0 + 0.5 * 0.4) / det,
            (-0.4 * 2.0 - 0.5 * 0.6) / det,
        ];
        assert!(p.distance(&want.into()) < 1e-9, "{p:?} vs {want:?}");
    }

    #[test]
    fn empty_region_is_an_error() {
        let err = oracle_minimize_2d(
            |x: &Vector| x.norm(),
            |_| false,
            SearchRect::new([0.0, 0.0], [1.0, 1.0]),
            1e-9,
        );
        assert!(matches!(err, Err(Error::EmptyFeasibleRegion)));
    }

    #[test]
    fn corner_of_a_square() {
        // min ‖x − (2, 2)‖² over [0,1]² sits on the corner (1, 1)
        let p = oracle_minimize_2d(
            |x: &Vector| (x[0] - 2.0).powi(2) + (x[1] - 2.0).powi(2),
            |x: &Vector| x[0] <= 1.0 && x[1] <= 1.0 && x[0] >= 0.0 && x[1] >= 0.0,
            SearchRect::new([-0.5, -0.5], [1.5, 1.5]),
            1e-9,
        )
        .unwrap();
        assert!(p.distance(&[1.0, 1.0].into()) < 1e-5, "{p:?}");
    }
}
