//! Periodic 2-D convolution with a normalized kernel.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operators::LinearMap;

/// Square convolution kernel of odd size, entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
    /// 1-D factor when `weights` is its outer product with itself.
    factor: Option<Vec<f64>>,
}

impl Kernel {
    /// Sampled Gaussian `exp(−(i² + j²)/(2 std²))` on a `size × size` stencil, normalized.
    pub fn gaussian(size: usize, std: f64) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "kernel_size",
                value: size as f64,
                reason: "kernel size must be odd",
            });
        }
        if !(std > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kernel_std",
                value: std,
                reason: "standard deviation must be positive",
            });
        }
        let r = (size / 2) as i64;
        let mut factor: Vec<f64> = (-r..=r)
            .map(|i| (-((i * i) as f64) / (2.0 * std * std)).exp())
            .collect();
        let total: f64 = factor.iter().sum();
        factor.iter_mut().for_each(|f| *f /= total);
        let weights = factor
            .iter()
            .flat_map(|a| factor.iter().map(move |b| a * b))
            .collect();
        Ok(Kernel {
            size,
            weights,
            factor: Some(factor),
        })
    }

    pub fn identity() -> Self {
        Kernel {
            size: 1,
            weights: vec![1.0],
            factor: Some(vec![1.0]),
        }
    }

    /// Normalizes nonnegative `weights` (row-major `size × size`) to sum to one.
    pub fn from_weights(size: usize, mut weights: Vec<f64>) -> Result<Self> {
        if size.is_multiple_of(2) || weights.len() != size * size {
            return Err(Error::InvalidParameter {
                name: "kernel_size",
                value: size as f64,
                reason: "kernel must be an odd square stencil",
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "kernel",
                value: f64::NAN,
                reason: "kernel weights must be nonnegative",
            });
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kernel",
                value: total,
                reason: "kernel weights must not all vanish",
            });
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Kernel {
            size,
            weights,
            factor: None,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Circular convolution `R` on `width × height` images.
#[derive(Debug, Clone, PartialEq)]
pub struct Blur {
    width: usize,
    height: usize,
    kernel: Kernel,
}

impl Blur {
    pub fn new(width: usize, height: usize, kernel: Kernel) -> Self {
        Blur {
            width,
            height,
            kernel,
        }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    fn convolve(&self, x: &[f64], flipped: bool) -> Vec<f64> {
        match &self.kernel.factor {
            Some(factor) => self.convolve_separable(x, factor, flipped),
            None => self.convolve_full(x, flipped),
        }
    }

    fn convolve_separable(&self, x: &[f64], factor: &[f64], flipped: bool) -> Vec<f64> {
        let (w, h) = (self.width as i64, self.height as i64);
        let r = (factor.len() / 2) as i64;
        let sign = if flipped { 1 } else { -1 };
        let mut rows = vec![0.0; x.len()];
        for p in 0..h {
            let line = &x[(p * w) as usize..((p + 1) * w) as usize];
            for q in 0..w {
                rows[(p * w + q) as usize] = factor
                    .iter()
                    .zip(-r..=r)
                    .map(|(f, d)| f * line[(q + sign * d).rem_euclid(w) as usize])
                    .sum();
            }
        }
        let mut out = vec![0.0; x.len()];
        for p in 0..h {
            for q in 0..w {
                out[(p * w + q) as usize] = factor
                    .iter()
                    .zip(-r..=r)
                    .map(|(f, d)| f * rows[((p + sign * d).rem_euclid(h) * w + q) as usize])
                    .sum();
            }
        }
        out
    }

    fn convolve_full(&self, x: &[f64], flipped: bool) -> Vec<f64> {
        let (w, h) = (self.width as i64, self.height as i64);
        let r = (self.kernel.size / 2) as i64;
        let mut out = vec![0.0; x.len()];
        for p in 0..h {
            for q in 0..w {
                let mut acc = 0.0;
                for (ki, di) in (-r..=r).enumerate() {
                    let row_off = if flipped { di } else { -di };
                    let src_row = (p + row_off).rem_euclid(h) * w;
                    let kernel_row =
                        &self.kernel.weights[ki * self.kernel.size..(ki + 1) * self.kernel.size];
                    for (kw, dj) in kernel_row.iter().zip(-r..=r) {
                        let col_off = if flipped { dj } else { -dj };
                        acc += kw * x[(src_row + (q + col_off).rem_euclid(w)) as usize];
                    }
                }
                out[(p * w + q) as usize] = acc;
            }
        }
        out
    }
}

impl LinearMap for Blur {
    fn rows(&self) -> usize {
        self.width * self.height
    }

    fn cols(&self) -> usize {
        self.width * self.height
    }

    /// `(Rx)[p, q] = Σ k[i, j] x[p − i, q − j]` with periodic indices.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.convolve(x, false)
    }

    /// Correlation with the kernel, i.e. convolution with the flipped kernel.
    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64> {
        self.convolve(y, true)
    }
}

/// `outer ∘ inner`.
pub struct Composed {
    outer: Arc<dyn LinearMap>,
    inner: Arc<dyn LinearMap>,
}

impl Composed {
    pub fn new(outer: Arc<dyn LinearMap>, inner: Arc<dyn LinearMap>) -> Result<Self> {
        if outer.cols() != inner.rows() {
            return Err(Error::DimensionMismatch {
                expected: outer.cols(),
                found: inner.rows(),
            });
        }
        Ok(Composed { outer, inner })
    }
}

impl LinearMap for Composed {
    fn rows(&self) -> usize {
        self.outer.rows()
    }

    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.outer.apply(&self.inner.apply(x))
    }

    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64> {
        self.inner.apply_adjoint(&self.outer.apply_adjoint(y))
    }
}
