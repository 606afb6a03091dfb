use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Result};
use crate::problem::{CompositeProblem, Penalty};
use crate::scalar::Scalar;

/// `f(x) = 1/2 |Ax - b|^2` with a separable penalty (lasso when the penalty
/// is L1).
#[derive(Debug, Clone)]
pub struct LeastSquaresProblem<S> {
    matrix: Array2<S>,
    target: Array1<S>,
    penalty: Penalty<S>,
}

impl<S: Scalar> LeastSquaresProblem<S> {
    pub fn new(matrix: Array2<S>, target: Array1<S>, penalty: Penalty<S>) -> Result<Self> {
        check_len("least-squares target", matrix.nrows(), target.len())?;
        Ok(Self {
            matrix,
            target,
            penalty,
        })
    }

    /// Gaussian `m x n` lasso instance; `b = A x_true + 0.1 noise` with a
    /// sparse `x_true`.
    pub fn random_lasso(m: usize, n: usize, lambda: S, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gauss = || -> S { S::of(StandardNormal.sample(&mut rng)) };
        let matrix = Array2::from_shape_fn((m, n), |_| gauss());
        let x_true = Array1::from_shape_fn(n, |i| if i % 5 == 0 { gauss() } else { S::zero() });
        let noise = Array1::from_shape_fn(m, |_| S::of(0.1) * gauss());
        let target = matrix.dot(&x_true) + noise;
        Self::new(matrix, target, Penalty::L1(lambda))
    }

    pub fn matrix(&self) -> &Array2<S> {
        &self.matrix
    }
}

impl<S: Scalar> CompositeProblem<S> for LeastSquaresProblem<S> {
    fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        check_len("least-squares point", self.dim(), x.len())?;
        let r = self.matrix.dot(x) - &self.target;
        Ok(S::of(0.5) * r.dot(&r))
    }

    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("least-squares point", self.dim(), x.len())?;
        let r = self.matrix.dot(x) - &self.target;
        Ok(self.matrix.t().dot(&r))
    }

    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        check_len("least-squares point", self.dim(), x.len())?;
        let r = self.matrix.dot(x) - &self.target;
        Ok((S::of(0.5) * r.dot(&r), self.matrix.t().dot(&r)))
    }

    fn penalty_value(&self, x: &Array1<S>) -> S {
        self.penalty.value(x)
    }

    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        self.penalty.prox(z, tau)
    }
}
