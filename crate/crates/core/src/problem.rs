//! The composite problem interface: minimize `F = f + h` with `f` smooth and
//! `h` convex with a computable proximal operator.

use ndarray::Array1;

use crate::error::Result;
use crate::scalar::Scalar;

/// Known solution data for synthetic instances.
#[derive(Debug, Clone)]
pub struct GroundTruth<S> {
    /// Lipschitz constant of the gradient of `f`.
    pub lipschitz: S,
    /// Quadratic growth parameter of `F`.
    pub mu: S,
    pub f_star: S,
    pub x_star: Array1<S>,
}

/// A convex composite objective `F(x) = f(x) + h(x)` on `R^dim`.
///
/// Implementations are immutable after construction, so one problem may be
/// shared by several solver runs on different threads.
pub trait CompositeProblem<S: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    /// Value of the smooth part `f`.
    fn smooth_value(&self, x: &Array1<S>) -> Result<S>;

    /// Gradient of the smooth part `f`.
    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>>;

    /// Both at once; problems sharing work between the two override this.
    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        Ok((self.smooth_value(x)?, self.smooth_gradient(x)?))
    }

    /// Value of the nonsmooth part `h`; `+inf` outside its domain.
    fn penalty_value(&self, x: &Array1<S>) -> S;

    /// `argmin_w h(w) + |w - z|^2 / (2 tau)`.
    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S>;

    fn ground_truth(&self) -> Option<&GroundTruth<S>> {
        None
    }

    fn objective(&self, x: &Array1<S>) -> Result<S> {
        Ok(self.smooth_value(x)? + self.penalty_value(x))
    }
}

impl<S: Scalar, P: CompositeProblem<S> + ?Sized> CompositeProblem<S> for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        (**self).smooth_value(x)
    }
    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        (**self).smooth_gradient(x)
    }
    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        (**self).smooth_value_gradient(x)
    }
    fn penalty_value(&self, x: &Array1<S>) -> S {
        (**self).penalty_value(x)
    }
    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        (**self).prox(z, tau)
    }
    fn ground_truth(&self) -> Option<&GroundTruth<S>> {
        (**self).ground_truth()
    }
}

impl<S: Scalar, P: CompositeProblem<S> + ?Sized> CompositeProblem<S> for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn smooth_value(&self, x: &Array1<S>) -> Result<S> {
        (**self).smooth_value(x)
    }
    fn smooth_gradient(&self, x: &Array1<S>) -> Result<Array1<S>> {
        (**self).smooth_gradient(x)
    }
    fn smooth_value_gradient(&self, x: &Array1<S>) -> Result<(S, Array1<S>)> {
        (**self).smooth_value_gradient(x)
    }
    fn penalty_value(&self, x: &Array1<S>) -> S {
        (**self).penalty_value(x)
    }
    fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        (**self).prox(z, tau)
    }
    fn ground_truth(&self) -> Option<&GroundTruth<S>> {
        (**self).ground_truth()
    }
}

/// Componentwise soft thresholding, the prox of `threshold * |.|_1`.
pub fn soft_threshold<S: Scalar>(z: &Array1<S>, threshold: S) -> Array1<S> {
    z.mapv(|v| soft_threshold_scalar(v, threshold))
}

#[inline]
pub fn soft_threshold_scalar<S: Scalar>(v: S, threshold: S) -> S {
    if v > threshold {
        v - threshold
    } else if v < -threshold {
        v + threshold
    } else {
        S::zero()
    }
}

/// Separable penalties with closed-form prox.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty<S> {
    Zero,
    /// `weight * |x|_1`
    L1(S),
    /// `weight * |x|_1 + indicator(x >= 0)`
    NonNegL1(S),
}

impl<S: Scalar> Penalty<S> {
    pub fn value(&self, x: &Array1<S>) -> S {
        match *self {
            Penalty::Zero => S::zero(),
            Penalty::L1(w) => w * x.iter().map(|v| v.abs()).sum::<S>(),
            Penalty::NonNegL1(w) => {
                if x.iter().any(|&v| v < S::zero()) {
                    S::infinity()
                } else {
                    w * x.sum()
                }
            }
        }
    }

    pub fn prox(&self, z: &Array1<S>, tau: S) -> Array1<S> {
        match *self {
            Penalty::Zero => z.clone(),
            Penalty::L1(w) => soft_threshold(z, w * tau),
            Penalty::NonNegL1(w) => z.mapv(|v| (v - w * tau).max(S::zero())),
        }
    }
}
