//! Orthonormal multi-level 2-D Haar transform (Mallat layout, row-major images).

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::operators::LinearMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Haar2d {
    width: usize,
    height: usize,
    stages: usize,
}

impl Haar2d {
    pub fn new(width: usize, height: usize, stages: usize) -> Result<Self> {
        let divisor = 1usize << stages;
        if width == 0
            || height == 0
            || !width.is_multiple_of(divisor)
            || !height.is_multiple_of(divisor)
        {
            return Err(Error::ImageShape {
                width,
                height,
                divisor,
            });
        }
        Ok(Haar2d {
            width,
            height,
            stages,
        })
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Analysis: image → coefficients.
    pub fn forward(&self, image: &[f64]) -> Vec<f64> {
        assert_eq!(image.len(), self.len());
        let mut data = image.to_vec();
        let mut scratch = vec![0.0; self.width.max(self.height)];
        let (mut w, mut h) = (self.width, self.height);
        for _ in 0..self.stages {
            for r in 0..h {
                let row = &mut data[r * self.width..r * self.width + w];
                split(row, &mut scratch[..w]);
            }
            for c in 0..w {
                let mut col: Vec<f64> = (0..h).map(|r| data[r * self.width + c]).collect();
                split(&mut col, &mut scratch[..h]);
                for (r, v) in col.into_iter().enumerate() {
                    data[r * self.width + c] = v;
                }
            }
            w /= 2;
            h /= 2;
        }
        data
    }

    /// Synthesis: coefficients → image. Exact inverse (and adjoint) of [`Haar2d::forward`].
    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.len());
        let mut data = coeffs.to_vec();
        let mut scratch = vec![0.0; self.width.max(self.height)];
        for level in (0..self.stages).rev() {
            let (w, h) = (self.width >> level, self.height >> level);
            for c in 0..w {
                let mut col: Vec<f64> = (0..h).map(|r| data[r * self.width + c]).collect();
                merge(&mut col, &mut scratch[..h]);
                for (r, v) in col.into_iter().enumerate() {
                    data[r * self.width + c] = v;
                }
            }
            for r in 0..h {
                let row = &mut data[r * self.width..r * self.width + w];
                merge(row, &mut scratch[..w]);
            }
        }
        data
    }
}

fn split(x: &mut [f64], scratch: &mut [f64]) {
    let half = x.len() / 2;
    for i in 0..half {
        let (a, b) = (x[2 * i], x[2 * i + 1]);
        scratch[i] = (a + b) * FRAC_1_SQRT_2;
        scratch[half + i] = (a - b) * FRAC_1_SQRT_2;
    }
    x.copy_from_slice(scratch);
}

fn merge(x: &mut [f64], scratch: &mut [f64]) {
    let half = x.len() / 2;
    for i in 0..half {
        let (s, d) = (x[i], x[half + i]);
        scratch[2 * i] = (s + d) * FRAC_1_SQRT_2;
        scratch[2 * i + 1] = (s - d) * FRAC_1_SQRT_2;
    }
    x.copy_from_slice(scratch);
}

/// The synthesis operator `W` (coefficients → image) as a linear map.
impl LinearMap for Haar2d {
    fn rows(&self) -> usize {
        self.len()
    }

    fn cols(&self) -> usize {
        self.len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.inverse(x)
    }

    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64> {
        self.forward(y)
    }
}

/// Three-level analysis of a `width × height` image.
pub fn haar_3stage(image: &[f64], width: usize, height: usize) -> Result<Vec<f64>> {
    let haar = Haar2d::new(width, height, 3)?;
    check_len(image.len(), haar.len())?;
    Ok(haar.forward(image))
}

/// Three-level synthesis, inverse of [`haar_3stage`].
pub fn haar_3stage_inverse(coeffs: &[f64], width: usize, height: usize) -> Result<Vec<f64>> {
    let haar = Haar2d::new(width, height, 3)?;
    check_len(coeffs.len(), haar.len())?;
    Ok(haar.inverse(coeffs))
}

fn check_len(found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
