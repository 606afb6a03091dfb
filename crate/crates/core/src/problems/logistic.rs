use ndarray::{Array1, Array2};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::design::Design;
use crate::error::{check_len, Error, Result};
use crate::problem::{soft_threshold, CompositeProblem};
use crate::scalar::{max_abs, norm_sq, Scalar};

/// L2-L1 regularized logistic regression:
///
/// ```text
/// f(x) = lambda1 / (2 |A^T b|_inf) * sum_j log(1 + exp(-b_j <a_j, x>)) + lambda2/2 |x|^2
/// h(x) = |x|_1
/// ```
///
/// `a_j` is the j-th row of the `m x n` matrix `A`; labels are in `{-1, +1}`.
#[derive(Debug, Clone)]
pub struct LogisticProblem<S> {
    design: Design<S>,
    labels: Array1<S>,
    lambda1: S,
    lambda2: S,
    /// `A^T b`
    correlation: Array1<S>,
    /// `lambda1 / (2 |A^T b|_inf)`
    loss_weight: S,
}

/// `log(1 + e^t)` without overflow.
#[inline]
pub fn softplus<S: Scalar>(t: S) -> S {
    t.max(S::zero()) + (-t.abs()).exp().ln_1p()
}

/// `1 / (1 + e^{-t})` without overflow.
#[inline]
pub fn sigmoid<S: Scalar>(t: S) -> S {
    if t >= S::zero() {
        S::one() / (S::one() + (-t).exp())
    } else {
        let e = t.exp();
        e / (S::one() + e)
    }
}

impl<S: Scalar> LogisticProblem<S> {
    pub fn new(design: Design<S>, labels: Array1<S>, lambda1: S, lambda2: S) -> Result<Self> {
        check_len("logistic labels", design.nrows(), labels.len())?;
        if !(lambda1 > S::zero()) || !(lambda2 > S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "logistic weights must be positive, got lambda1 = {lambda1}, lambda2 = {lambda2}"
            )));
        }
        if let Some(bad) = labels.iter().find(|&&b| b != S::one() && b != -S::one()) {
            return Err(Error::InvalidParameter(format!(
                "logistic labels must be +1 or -1, got {bad}"
            )));
        }
        let correlation = design.apply_transpose(&labels)?;
        let inf_norm = max_abs(&correlation);
        if inf_norm == S::zero() {
            return Err(Error::DegenerateData("A^T b vanishes"));
        }
        let loss_weight = lambda1 / (S::of(2.0) * inf_norm);
        Ok(Self {
            design,
            labels,
            lambda1,
            lambda2,
            correlation,
            loss_weight,
        })
    }

    /// Dense Gaussian `m x n` design with uniformly random labels.
    pub fn random(m: usize, n: usize, lambda1: S, lambda2: S, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_fn((m, n), |_| S::of(StandardNormal.sample(&mut rng)));
        let b = Array1::from_shape_fn(m, |_| if rng.random::<bool>() { S::one() } else { -S::one() });
        Self::new(Design::Dense(a), b, lambda1, lambda2)
    }

    pub fn design(&self) -> &Design<S> {
        &self.design
    }

    pub fn labels(&self) -> &Array1<S> {
        &self.labels
    }

    /// Upper bound `lambda1 |A^T b|^2 / (8 |A^T b|_inf) + lambda2` on the
    /// gradient's Lipschitz constant.
    pub fn lipschitz_estimate(&self) -> S {
        let inf_norm = max_abs(&self.correlation);
        self.lambda1 * norm_sq(&self.correlation) / (S::of(8.0) * inf_norm) + self.lambda2
    }

    /// Value and exact gradient of the smooth part.
    pub fn value_grad(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        check_len("logistic point", self.design.ncols(), x.len())?;
        let margins = self.design.apply(x)?;
        let mut loss = S::zero();
        let mut weights = Array1::zeros(margins.len());
        for ((w, &margin), &b) in weights.iter_mut().zip(margins.iter()).zip(self.labels.iter()) {
            let t = -b * margin;
            loss += softplus(t);
            // d/dmargin log(1 + exp(-b margin)) = -b sigma(-b margin)
            *w = -b * sigmoid(t);
        }
        let mut grad = self.design.apply_transpose(&weights)?;
        grad.mapv_inplace(|g| g * self.loss_weight);
        grad.scaled_add(self.lambda2, x);
        let value = self.loss_weight * loss + S::of(0.5) * self.lambda2 * norm_sq(x);
        Ok((value, grad))
    }
}

impl<S: Scalar> CompositeProblem<S> for LogisticProblem<S> {
    fn dim(&self) -> usize {
        self.design.ncols()
    }

    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        check_len("logistic point", self.dim(), x.len())?;
        let margins = self.design.apply(x)?;
        let loss: S = margins
            .iter()
            .zip(self.labels.iter())
            .map(|(&m, &b)| softplus(-b * m))
            .sum();
        Ok(self.loss_weight * loss + S::of(0.5) * self.lambda2 * norm_sq(x))
    }

    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        Ok(self.value_grad(x)?.1)
    }

    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        self.value_grad(x)
    }

    fn penalty_value(&self, x: &Array1<S>) -> S {
        x.iter().map(|v| v.abs()).sum()
    }

    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        soft_threshold(z, tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn tiny(lambda2: f64) -> LogisticProblem<f64> {
        LogisticProblem::new(
            Design::Dense(Array2::eye(2)),
            array![1.0, -1.0],
            8.0,
            lambda2,
        )
        .unwrap()
    }

    #[test]
    fn value_at_origin() {
        // lambda2 must be positive; the origin does not see it.
        let p = tiny(1e-9);
        let f0 = p.smooth_value(&array![0.0, 0.0]).unwrap();
        let expected = 8.0 * 2.0 * 2f64.ln() / (2.0 * 1.0);
        assert!((f0 - expected).abs() < 1e-14);
    }

    #[test]
    fn gradient_at_origin_by_hand() {
        let p = tiny(1e-9);
        let g = p.smooth_gradient(&array![0.0, 0.0]).unwrap();
        assert!((g[0] + 2.0).abs() < 1e-14 && (g[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lipschitz_formula() {
        assert!((tiny(1e-300).lipschitz_estimate() - 2.0).abs() < 1e-14);
        assert!((tiny(3.0).lipschitz_estimate() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn softplus_is_overflow_safe() {
        assert_eq!(softplus(1000.0f64), 1000.0);
        assert!(softplus(-1000.0f64) >= 0.0 && softplus(-1000.0f64) < 1e-300);
        assert!((softplus(0.0f64) - 2f64.ln()).abs() < 1e-16);
        assert_eq!(sigmoid(-1000.0f64), 0.0);
        assert_eq!(sigmoid(1000.0f64), 1.0);
    }

    #[test]
    fn degenerate_and_shape_errors() {
        let zero = LogisticProblem::new(
            Design::Dense(Array2::zeros((2, 2))),
            array![1.0, -1.0],
            1.0,
            1.0,
        );
        assert!(matches!(zero, Err(Error::DegenerateData(_))));
        let p = tiny(1.0);
        assert!(matches!(
            p.value_grad(&array![1.0, 2.0, 3.0]),
            Err(Error::Shape { .. })
        ));
        let bad = LogisticProblem::new(Design::Dense(Array2::eye(2)), array![1.0, 0.5], 1.0, 1.0);
        assert!(matches!(bad, Err(Error::InvalidParameter(_))));
    }
}
