use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{Array1, NdFloat};
use num_traits::FromPrimitive;

/// Floating point type the solvers are generic over.
///
/// Implemented for `f32` and `f64`. Every tolerance in the crate is written
/// for double precision and scaled by [`Scalar::precision_ratio`] so that the
/// same code stays meaningful in single precision.
pub trait Scalar: NdFloat + FromPrimitive + Sum + Default + Debug + Display + Send + Sync {
    /// Lossless-enough conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64;

    /// Machine epsilon of `Self` relative to that of `f64` (1 for `f64`).
    fn precision_ratio() -> Self {
        Self::epsilon() / Self::of(f64::EPSILON)
    }
}

impl Scalar for f32 {
    fn as_f64(self) -> f64 {
        f64::from(self)
    }
}

impl Scalar for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

pub(crate) fn dot<S: Scalar>(a: &Array1<S>, b: &Array1<S>) -> S {
    a.dot(b)
}

pub(crate) fn norm_sq<S: Scalar>(a: &Array1<S>) -> S {
    a.dot(a)
}

pub fn norm<S: Scalar>(a: &Array1<S>) -> S {
    norm_sq(a).sqrt()
}

pub(crate) fn dist<S: Scalar>(a: &Array1<S>, b: &Array1<S>) -> S {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<S>()
        .sqrt()
}

pub(crate) fn max_abs<S: Scalar>(a: &Array1<S>) -> S {
    a.iter().fold(S::zero(), |m, &v| m.max(v.abs()))
}
