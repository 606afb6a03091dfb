//! Image operators for the super-resolution model: direct 2-D convolution
//! with a half-sample symmetric boundary, and `q x q` block averaging.

use ndarray::{Array1, Array2};

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;

#[inline]
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let mut i = i;
    // period 2n; a kernel wider than the image folds several times
    i = i.rem_euclid(2 * n);
    if i >= n {
        (2 * n - 1 - i) as usize
    } else {
        i as usize
    }
}

/// `(Hx)[r, c] = sum_{a, b} k[a, b] x[r - a + ca, c - b + cb]`, out-of-range
/// indices mirrored (`-1 -> 0`, `n -> n - 1`). The kernel has odd sides and
/// is centred at `(ca, cb)`.
#[derive(Debug, Clone)]
pub struct Convolution<S> {
    rows: usize,
    cols: usize,
    kernel: Array2<S>,
}

impl<S: Scalar> Convolution<S> {
    pub fn new(rows: usize, cols: usize, kernel: Array2<S>) -> Result<Self> {
        let (kr, kc) = kernel.dim();
        if kr % 2 == 0 || kc % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "convolution kernel sides must be odd, got {kr}x{kc}"
            )));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("convolution image"));
        }
        Ok(Self { rows, cols, kernel })
    }

    /// Normalized isotropic Gaussian kernel of side `2 * radius + 1`.
    pub fn gaussian_kernel(radius: usize, sigma: f64) -> Array2<S> {
        let side = 2 * radius + 1;
        let r = radius as f64;
        let raw = Array2::from_shape_fn((side, side), |(a, b)| {
            let (da, db) = (a as f64 - r, b as f64 - r);
            (-(da * da + db * db) / (2.0 * sigma * sigma)).exp()
        });
        let total = raw.sum();
        raw.mapv(|v| S::of(v / total))
    }

    pub fn kernel(&self) -> &Array2<S> {
        &self.kernel
    }

    fn for_each_tap(&self, mut visit: impl FnMut(usize, usize, S)) {
        let (kr, kc) = self.kernel.dim();
        let (ca, cb) = ((kr / 2) as isize, (kc / 2) as isize);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let out = r * self.cols + c;
                for ((a, b), &k) in self.kernel.indexed_iter() {
                    let sr = reflect(r as isize - a as isize + ca, self.rows);
                    let sc = reflect(c as isize - b as isize + cb, self.cols);
                    visit(out, sr * self.cols + sc, k);
                }
            }
        }
    }

    pub fn apply(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("convolution input", self.rows * self.cols, x.len())?;
        let mut out = Array1::zeros(x.len());
        self.for_each_tap(|o, i, k| out[o] += k * x[i]);
        Ok(out)
    }

    pub fn apply_adjoint(&self, y: &Array1<S>) -> Result<Array1<S>> {
        check_len("convolution adjoint input", self.rows * self.cols, y.len())?;
        let mut out = Array1::zeros(y.len());
        self.for_each_tap(|o, i, k| out[i] += k * y[o]);
        Ok(out)
    }
}

/// `q x q` block averaging from a `rows x cols` image to
/// `rows/q x cols/q`; the adjoint replicates and divides by `q^2`.
#[derive(Debug, Clone, Copy)]
pub struct BlockDownsample {
    rows: usize,
    cols: usize,
    factor: usize,
}

impl BlockDownsample {
    pub fn new(rows: usize, cols: usize, factor: usize) -> Result<Self> {
        if factor == 0 || rows == 0 || cols == 0 || !rows.is_multiple_of(factor) || !cols.is_multiple_of(factor) {
            return Err(Error::InvalidParameter(format!(
                "down-sampling factor {factor} must divide image size {rows}x{cols}"
            )));
        }
        Ok(Self { rows, cols, factor })
    }

    pub fn input_len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn output_len(&self) -> usize {
        self.input_len() / (self.factor * self.factor)
    }

    pub fn output_shape(&self) -> (usize, usize) {
        (self.rows / self.factor, self.cols / self.factor)
    }

    fn coarse_index(&self, r: usize, c: usize) -> usize {
        (r / self.factor) * (self.cols / self.factor) + c / self.factor
    }

    pub fn apply<S: Scalar>(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("down-sampling input", self.input_len(), x.len())?;
        let w = S::one() / S::of((self.factor * self.factor) as f64);
        let mut out = Array1::zeros(self.output_len());
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[self.coarse_index(r, c)] += x[r * self.cols + c];
            }
        }
        out.mapv_inplace(|v| v * w);
        Ok(out)
    }

    pub fn apply_adjoint<S: Scalar>(&self, y: &Array1<S>) -> Result<Array1<S>> {
        check_len("down-sampling adjoint input", self.output_len(), y.len())?;
        let w = S::one() / S::of((self.factor * self.factor) as f64);
        Ok(Array1::from_shape_fn(self.input_len(), |i| {
            let (r, c) = (i / self.cols, i % self.cols);
            y[self.coarse_index(r, c)] * w
        }))
    }
}
