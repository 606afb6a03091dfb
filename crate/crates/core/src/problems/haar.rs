//! Orthonormal multi-level Haar wavelet transforms (1-D and 2-D, row-major).

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// An orthogonal linear map on `R^len`.
#[allow(clippy::len_without_is_empty)]
pub trait OrthogonalTransform<S: Scalar>: Send + Sync {
    fn len(&self) -> usize;
    fn forward(&self, x: &Array1<S>) -> Array1<S>;
    /// Inverse, equal to the adjoint.
    fn inverse(&self, x: &Array1<S>) -> Array1<S>;
}

fn check_divisible(context: &'static str, size: usize, levels: usize) -> Result<()> {
    let block = 1usize
        .checked_shl(levels as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("{levels} Haar levels")))?;
    if size == 0 || !size.is_multiple_of(block) {
        return Err(Error::Shape {
            context,
            expected: block * (size / block).max(1),
            got: size,
        });
    }
    Ok(())
}

// One analysis step on `buf[..n]` read with `stride`, written back in place.
fn analyze<S: Scalar>(data: &mut [S], offset: usize, stride: usize, n: usize, scratch: &mut Vec<S>) {
    let s = S::of(std::f64::consts::FRAC_1_SQRT_2);
    let half = n / 2;
    scratch.clear();
    scratch.resize(n, S::zero());
    for i in 0..half {
        let a = data[offset + 2 * i * stride];
        let b = data[offset + (2 * i + 1) * stride];
        scratch[i] = (a + b) * s;
        scratch[half + i] = (a - b) * s;
    }
    for (i, &v) in scratch.iter().enumerate() {
        data[offset + i * stride] = v;
    }
}

fn synthesize<S: Scalar>(data: &mut [S], offset: usize, stride: usize, n: usize, scratch: &mut Vec<S>) {
    let s = S::of(std::f64::consts::FRAC_1_SQRT_2);
    let half = n / 2;
    scratch.clear();
    scratch.resize(n, S::zero());
    for i in 0..half {
        let a = data[offset + i * stride];
        let d = data[offset + (half + i) * stride];
        scratch[2 * i] = (a + d) * s;
        scratch[2 * i + 1] = (a - d) * s;
    }
    for (i, &v) in scratch.iter().enumerate() {
        data[offset + i * stride] = v;
    }
}

/// 1-D Haar transform; `x.len()` must be a multiple of `2^levels`.
pub fn haar_transform<S: Scalar>(
    x: &Array1<S>,
    levels: usize,
    direction: Direction,
) -> Result<Array1<S>> {
    Haar1d::new(x.len(), levels).map(|t| match direction {
        Direction::Forward => t.forward(x),
        Direction::Inverse => t.inverse(x),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Haar1d {
    len: usize,
    levels: usize,
}

impl Haar1d {
    pub fn new(len: usize, levels: usize) -> Result<Self> {
        check_divisible("1-D Haar length", len, levels)?;
        Ok(Self { len, levels })
    }
}

impl<S: Scalar> OrthogonalTransform<S> for Haar1d {
    fn len(&self) -> usize {
        self.len
    }

    fn forward(&self, x: &Array1<S>) -> Array1<S> {
        assert_eq!(x.len(), self.len, "Haar input length");
        let mut out = x.to_vec();
        let mut scratch = Vec::with_capacity(self.len);
        for level in 0..self.levels {
            analyze(&mut out, 0, 1, self.len >> level, &mut scratch);
        }
        Array1::from(out)
    }

    fn inverse(&self, x: &Array1<S>) -> Array1<S> {
        assert_eq!(x.len(), self.len, "Haar input length");
        let mut out = x.to_vec();
        let mut scratch = Vec::with_capacity(self.len);
        for level in (0..self.levels).rev() {
            synthesize(&mut out, 0, 1, self.len >> level, &mut scratch);
        }
        Array1::from(out)
    }
}

/// Separable 2-D Haar transform on a row-major `rows x cols` image
/// (Mallat ordering: each level transforms rows, then columns, of the
/// current approximation block).
#[derive(Debug, Clone, Copy)]
pub struct Haar2d {
    rows: usize,
    cols: usize,
    levels: usize,
}

impl Haar2d {
    pub fn new(rows: usize, cols: usize, levels: usize) -> Result<Self> {
        check_divisible("2-D Haar rows", rows, levels)?;
        check_divisible("2-D Haar cols", cols, levels)?;
        Ok(Self { rows, cols, levels })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

impl<S: Scalar> OrthogonalTransform<S> for Haar2d {
    fn len(&self) -> usize {
        self.rows * self.cols
    }

    fn forward(&self, x: &Array1<S>) -> Array1<S> {
        assert_eq!(x.len(), self.rows * self.cols, "Haar image size");
        let mut out = x.to_vec();
        let mut scratch = Vec::new();
        for level in 0..self.levels {
            let (r, c) = (self.rows >> level, self.cols >> level);
            for row in 0..r {
                analyze(&mut out, row * self.cols, 1, c, &mut scratch);
            }
            for col in 0..c {
                analyze(&mut out, col, self.cols, r, &mut scratch);
            }
        }
        Array1::from(out)
    }

    fn inverse(&self, x: &Array1<S>) -> Array1<S> {
        assert_eq!(x.len(), self.rows * self.cols, "Haar image size");
        let mut out = x.to_vec();
        let mut scratch = Vec::new();
        for level in (0..self.levels).rev() {
            let (r, c) = (self.rows >> level, self.cols >> level);
            for col in 0..c {
                synthesize(&mut out, col, self.cols, r, &mut scratch);
            }
            for row in 0..r {
                synthesize(&mut out, row * self.cols, 1, c, &mut scratch);
            }
        }
        Array1::from(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn constant_and_detail_pairs() {
        let s2 = 2f64.sqrt();
        let a = haar_transform(&array![1.0, 1.0], 1, Direction::Forward).unwrap();
        assert!((a[0] - s2).abs() < 1e-15 && a[1] == 0.0);
        let d = haar_transform(&array![1.0, -1.0], 1, Direction::Forward).unwrap();
        assert!(d[0] == 0.0 && (d[1] - s2).abs() < 1e-15);
    }

    #[test]
    fn incompatible_size() {
        assert!(matches!(
            haar_transform(&array![1.0, 2.0, 3.0], 1, Direction::Forward),
            Err(Error::Shape { .. })
        ));
        assert!(Haar2d::new(12, 8, 3).is_err());
        assert!(Haar2d::new(16, 8, 3).is_ok());
    }

    #[test]
    fn two_level_constant_signal() {
        // all energy ends up in the coarsest coefficient
        let y = haar_transform(&array![1.0f64, 1.0, 1.0, 1.0], 2, Direction::Forward).unwrap();
        assert!((y[0] - 2.0).abs() < 1e-15);
        assert!(y.iter().skip(1).all(|v| v.abs() < 1e-15));
    }
}
