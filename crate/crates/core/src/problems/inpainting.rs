use ndarray::Array1;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::haar::{Haar2d, OrthogonalTransform};
use crate::error::{check_len, Error, Result};
use crate::problem::{soft_threshold, CompositeProblem};
use crate::scalar::Scalar;

/// Masked reconstruction with a sparsifying orthogonal transform:
/// `f(x) = 1/2 |Mx - y|^2`, `h(x) = lambda |Tx|_1`.
///
/// Because `T` is orthogonal, `prox_{tau h} = T^T o soft_{lambda tau} o T`.
#[derive(Clone)]
pub struct InpaintingProblem<S, T> {
    mask: Array1<S>,
    observed: Array1<S>,
    transform: T,
    lambda: S,
}

impl<S: Scalar, T: OrthogonalTransform<S>> InpaintingProblem<S, T> {
    /// `mask` entries must be 0 or 1.
    pub fn new(mask: Array1<S>, observed: Array1<S>, transform: T, lambda: S) -> Result<Self> {
        check_len("inpainting observation", mask.len(), observed.len())?;
        check_len("inpainting transform", mask.len(), transform.len())?;
        if mask.iter().any(|&m| m != S::zero() && m != S::one()) {
            return Err(Error::InvalidParameter("inpainting mask must be 0/1".into()));
        }
        if !(lambda > S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "inpainting lambda must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            mask,
            observed,
            transform,
            lambda,
        })
    }

    pub fn mask(&self) -> &Array1<S> {
        &self.mask
    }

    pub fn observed(&self) -> &Array1<S> {
        &self.observed
    }

    pub fn transform(&self) -> &T {
        &self.transform
    }

    fn residual(&self, x: &Array1<S>) -> Array1<S> {
        &self.mask * x - &self.observed
    }
}

impl<S: Scalar> InpaintingProblem<S, Haar2d> {
    /// Masks `image` (row-major `rows x cols`), keeping each pixel with
    /// probability `keep`.
    pub fn from_image(
        image: &Array1<S>,
        rows: usize,
        cols: usize,
        levels: usize,
        keep: f64,
        lambda: S,
        seed: u64,
    ) -> Result<Self> {
        check_len("inpainting image", rows * cols, image.len())?;
        let transform = Haar2d::new(rows, cols, levels)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = Array1::from_shape_fn(rows * cols, |_| {
            if rng.random::<f64>() < keep {
                S::one()
            } else {
                S::zero()
            }
        });
        let observed = &mask * image;
        Self::new(mask, observed, transform, lambda)
    }
}

/// Piecewise-smooth synthetic test image with values in `[0, 1]`.
pub fn synthetic_image<S: Scalar>(rows: usize, cols: usize) -> Array1<S> {
    Array1::from_shape_fn(rows * cols, |i| {
        let (r, c) = ((i / cols) as f64 / rows as f64, (i % cols) as f64 / cols as f64);
        let mut v = 0.2 + 0.3 * r * c;
        if (0.2..0.6).contains(&r) && (0.25..0.7).contains(&c) {
            v += 0.4;
        }
        if (r - 0.7).powi(2) + (c - 0.3).powi(2) < 0.02 {
            v = 0.9 - 0.2 * c;
        }
        S::of(v.clamp(0.0, 1.0))
    })
}

impl<S: Scalar, T: OrthogonalTransform<S>> CompositeProblem<S> for InpaintingProblem<S, T> {
    fn dim(&self) -> usize {
        self.mask.len()
    }

    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        check_len("inpainting point", self.dim(), x.len())?;
        let r = self.residual(x);
        Ok(S::of(0.5) * r.dot(&r))
    }

    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("inpainting point", self.dim(), x.len())?;
        Ok(&self.mask * &self.residual(x))
    }

    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        check_len("inpainting point", self.dim(), x.len())?;
        let r = self.residual(x);
        Ok((S::of(0.5) * r.dot(&r), &self.mask * &r))
    }

    fn penalty_value(&self, x: &Array1<S>) -> S {
        self.lambda * self.transform.forward(x).iter().map(|v| v.abs()).sum::<S>()
    }

    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        let coeffs = soft_threshold(&self.transform.forward(z), self.lambda * tau);
        self.transform.inverse(&coeffs)
    }
}
