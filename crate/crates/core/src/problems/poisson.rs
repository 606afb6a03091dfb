use ndarray::Array1;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::operators::{BlockDownsample, Convolution};
use crate::error::{check_len, Error, Result};
use crate::problem::{CompositeProblem, Penalty};
use crate::scalar::Scalar;

/// Poisson super-resolution with sparsity and non-negativity:
///
/// ```text
/// f(x) = KL(MHx + b; z) = sum_i z_i log(z_i / ((MHx)_i + b)) + (MHx)_i + b - z_i
/// h(x) = lambda |x|_1 + indicator(x >= 0)
/// ```
///
/// with `0 log 0 = 0`, `H` a convolution on the fine grid and `M` a
/// `q x q` block average onto the coarse grid.
#[derive(Debug, Clone)]
pub struct PoissonSrProblem<S> {
    blur: Convolution<S>,
    downsample: BlockDownsample,
    data: Array1<S>,
    background: S,
    penalty: Penalty<S>,
}

impl<S: Scalar> PoissonSrProblem<S> {
    pub fn new(
        blur: Convolution<S>,
        downsample: BlockDownsample,
        data: Array1<S>,
        background: S,
        lambda: S,
    ) -> Result<Self> {
        check_len("Poisson data", downsample.output_len(), data.len())?;
        if !(background > S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "background must be positive, got {background}"
            )));
        }
        if data.iter().any(|&z| !(z >= S::zero())) {
            return Err(Error::InvalidParameter("Poisson data must be non-negative".into()));
        }
        if !(lambda >= S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be non-negative, got {lambda}"
            )));
        }
        Ok(Self {
            blur,
            downsample,
            data,
            background,
            penalty: Penalty::NonNegL1(lambda),
        })
    }

    /// Sparse bright spots on a `rows x cols` grid, blurred by a Gaussian PSF,
    /// down-sampled by `factor`, with Poisson noise around `MHx + background`.
    pub fn synthetic(
        rows: usize,
        cols: usize,
        factor: usize,
        background: S,
        lambda: S,
        seed: u64,
    ) -> Result<Self> {
        let blur = Convolution::new(rows, cols, Convolution::gaussian_kernel(2, 1.0))?;
        let downsample = BlockDownsample::new(rows, cols, factor)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth = Array1::from_shape_fn(rows * cols, |_| {
            if rng.random::<f64>() < 0.05 {
                S::of(50.0 + 150.0 * rng.random::<f64>())
            } else {
                S::zero()
            }
        });
        let clean = downsample.apply(&blur.apply(&truth)?)?;
        let data = clean.mapv(|w| {
            let rate = (w + background).as_f64();
            S::of(Poisson::new(rate).map(|p| p.sample(&mut rng)).unwrap_or(0.0))
        });
        Self::new(blur, downsample, data, background, lambda)
    }

    pub fn data(&self) -> &Array1<S> {
        &self.data
    }

    pub fn background(&self) -> S {
        self.background
    }

    /// `MHx`
    pub fn forward(&self, x: &Array1<S>) -> Result<Array1<S>> {
        self.downsample.apply(&self.blur.apply(x)?)
    }

    /// `(MH)^T y`
    pub fn adjoint(&self, y: &Array1<S>) -> Result<Array1<S>> {
        self.blur.apply_adjoint(&self.downsample.apply_adjoint(y)?)
    }

    /// `max(z) / b^2 * max((MH)^T 1) * max(MH 1)`
    pub fn lipschitz_estimate(&self) -> Result<S> {
        let max = |v: Array1<S>| v.iter().copied().fold(S::neg_infinity(), S::max);
        let zmax = max(self.data.clone());
        let col = max(self.adjoint(&Array1::ones(self.downsample.output_len()))?);
        let row = max(self.forward(&Array1::ones(self.downsample.input_len()))?);
        Ok(zmax / (self.background * self.background) * col * row)
    }

    fn intensities(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("Poisson point", self.dim(), x.len())?;
        let mut w = self.forward(x)?;
        for (i, v) in w.iter_mut().enumerate() {
            *v += self.background;
            if !(*v > S::zero()) {
                return Err(Error::Domain {
                    index: i,
                    value: v.as_f64(),
                });
            }
        }
        Ok(w)
    }

    fn kl(&self, w: &Array1<S>) -> S {
        w.iter()
            .zip(self.data.iter())
            .map(|(&w, &z)| {
                let log_term = if z > S::zero() { z * (z / w).ln() } else { S::zero() };
                log_term + w - z
            })
            .sum()
    }

    pub fn value_grad(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        let w = self.intensities(x)?;
        let ratio = Array1::from_shape_fn(w.len(), |i| S::one() - self.data[i] / w[i]);
        Ok((self.kl(&w), self.adjoint(&ratio)?))
    }
}

impl<S: Scalar> CompositeProblem<S> for PoissonSrProblem<S> {
    fn dim(&self) -> usize {
        self.downsample.input_len()
    }

    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        Ok(self.kl(&self.intensities(x)?))
    }

    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        Ok(self.value_grad(x)?.1)
    }

    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        self.value_grad(x)
    }

    fn penalty_value(&self, x: &Array1<S>) -> S {
        self.penalty.value(x)
    }

    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        self.penalty.prox(z, tau)
    }
}
