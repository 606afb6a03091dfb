use ndarray::Array1;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::problem::{soft_threshold_scalar, CompositeProblem, GroundTruth, Penalty};
use crate::scalar::Scalar;

/// `f(x) = 1/2 x^T Q x - c^T x` with diagonal `Q`, plus a separable penalty.
///
/// Every instance is in closed form, so the minimizer, optimal value, the
/// Lipschitz constant (`max Q`) and the growth parameter (`min Q`) are exact.
#[derive(Debug, Clone)]
pub struct QuadraticProblem<S> {
    diag: Array1<S>,
    linear: Array1<S>,
    penalty: Penalty<S>,
    truth: GroundTruth<S>,
}

impl<S: Scalar> QuadraticProblem<S> {
    /// `penalty` may be [`Penalty::Zero`] or [`Penalty::L1`].
    pub fn new(diag: Array1<S>, linear: Array1<S>, penalty: Penalty<S>) -> Result<Self> {
        check_len("quadratic linear term", diag.len(), linear.len())?;
        if diag.is_empty() {
            return Err(Error::Empty("quadratic diagonal"));
        }
        let lo = diag.iter().copied().fold(S::infinity(), S::min);
        let hi = diag.iter().copied().fold(S::zero(), S::max);
        if !(lo > S::zero()) {
            return Err(Error::InvalidConditioning {
                mu: lo.as_f64(),
                lipschitz: hi.as_f64(),
            });
        }
        let x_star = match penalty {
            Penalty::Zero => &linear / &diag,
            Penalty::L1(w) => Array1::from_shape_fn(diag.len(), |i| {
                soft_threshold_scalar(linear[i], w) / diag[i]
            }),
            Penalty::NonNegL1(w) => {
                Array1::from_shape_fn(diag.len(), |i| (linear[i] - w).max(S::zero()) / diag[i])
            }
        };
        let mut problem = Self {
            diag,
            linear,
            penalty,
            truth: GroundTruth {
                lipschitz: hi,
                mu: lo,
                f_star: S::zero(),
                x_star,
            },
        };
        problem.truth.f_star = problem.objective(&problem.truth.x_star)?;
        Ok(problem)
    }

    pub fn diag(&self) -> &Array1<S> {
        &self.diag
    }

    pub fn linear(&self) -> &Array1<S> {
        &self.linear
    }

    pub fn penalty(&self) -> Penalty<S> {
        self.penalty
    }
}

impl<S: Scalar> CompositeProblem<S> for QuadraticProblem<S> {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        check_len("quadratic point", self.dim(), x.len())?;
        Ok(x.iter()
            .zip(self.diag.iter().zip(self.linear.iter()))
            .map(|(&xi, (&q, &c))| S::of(0.5) * q * xi * xi - c * xi)
            .sum())
    }

    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("quadratic point", self.dim(), x.len())?;
        Ok(&self.diag * x - &self.linear)
    }

    fn penalty_value(&self, x: &Array1<S>) -> S {
        self.penalty.value(x)
    }

    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        self.penalty.prox(z, tau)
    }

    fn ground_truth(&self) -> Option<&GroundTruth<S>> {
        Some(&self.truth)
    }
}

/// Synthetic member of the smooth + quadratic-growth class with a known
/// conditioning: the spectrum of `Q` spans `[mu, lipschitz]` with both ends
/// attained, interior eigenvalues log-uniform, and `c ~ U[-1, 1]^dim`.
pub fn make_quadratic_growth_test<S: Scalar>(
    dim: usize,
    lipschitz: S,
    mu: S,
    penalty: Penalty<S>,
    seed: u64,
) -> Result<QuadraticProblem<S>> {
    if !(mu > S::zero()) || mu > lipschitz {
        return Err(Error::InvalidConditioning {
            mu: mu.as_f64(),
            lipschitz: lipschitz.as_f64(),
        });
    }
    if dim == 0 {
        return Err(Error::Empty("quadratic dimension"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (log_lo, log_hi) = (mu.as_f64().ln(), lipschitz.as_f64().ln());
    let mut diag = Array1::from_shape_fn(dim, |_| {
        S::of((log_lo + (log_hi - log_lo) * rng.random::<f64>()).exp())
    });
    diag[0] = mu;
    diag[dim - 1] = lipschitz;
    let linear = Array1::from_shape_fn(dim, |_| S::of(rng.random_range(-1.0..1.0)));
    QuadraticProblem::new(diag, linear, penalty)
}
