use ndarray::{Array1, Array2};
use sprs::{CsMat, TriMat};

use crate::error::{check_len, Result};
use crate::scalar::Scalar;

/// Data matrix of a linear model, stored densely or in CSR form.
#[derive(Debug, Clone)]
pub enum Design<S> {
    Dense(Array2<S>),
    Sparse(CsMat<S>),
}

impl<S: Scalar> Design<S> {
    /// CSR matrix from `(row, col, value)` triplets (0-based). Duplicates add up.
    pub fn sparse_from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, S)>,
    ) -> Self {
        let mut tri = TriMat::new((nrows, ncols));
        for (r, c, v) in triplets {
            tri.add_triplet(r, c, v);
        }
        Design::Sparse(tri.to_csr())
    }

    pub fn nrows(&self) -> usize {
        match self {
            Design::Dense(a) => a.nrows(),
            Design::Sparse(a) => a.rows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Design::Dense(a) => a.ncols(),
            Design::Sparse(a) => a.cols(),
        }
    }

    /// `A x`
    pub fn apply(&self, x: &Array1<S>) -> Result<Array1<S>> {
        check_len("design apply", self.ncols(), x.len())?;
        Ok(match self {
            Design::Dense(a) => a.dot(x),
            Design::Sparse(a) => Array1::from_iter(
                a.outer_iterator()
                    .map(|row| row.iter().map(|(c, &v)| v * x[c]).sum::<S>()),
            ),
        })
    }

    /// `A^T y`
    pub fn apply_transpose(&self, y: &Array1<S>) -> Result<Array1<S>> {
        check_len("design transpose apply", self.nrows(), y.len())?;
        Ok(match self {
            // row accumulation keeps the access contiguous
            Design::Dense(a) => {
                let mut out = Array1::zeros(a.ncols());
                for (row, &yr) in a.rows().into_iter().zip(y.iter()) {
                    out.scaled_add(yr, &row);
                }
                out
            }
            Design::Sparse(a) => {
                let mut out = Array1::zeros(a.cols());
                for (r, row) in a.outer_iterator().enumerate() {
                    let yr = y[r];
                    for (c, &v) in row.iter() {
                        out[c] += v * yr;
                    }
                }
                out
            }
        })
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, S)> {
        match self {
            Design::Dense(a) => a
                .indexed_iter()
                .filter(|(_, v)| **v != S::zero())
                .map(|((r, c), &v)| (r, c, v))
                .collect(),
            Design::Sparse(a) => a
                .outer_iterator()
                .enumerate()
                .flat_map(|(r, row)| {
                    row.iter()
                        .map(move |(c, &v)| (r, c, v))
                        .collect::<Vec<_>>()
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn sparse_and_dense_agree() {
        let dense = array![[1.0, 0.0, 2.0], [0.0, -3.0, 0.0]];
        let sparse = Design::sparse_from_triplets(2, 3, [(0, 0, 1.0), (0, 2, 2.0), (1, 1, -3.0)]);
        let dense = Design::Dense(dense);
        let x = array![1.0, 2.0, 3.0];
        let y = array![0.5, -1.0];
        assert_eq!(dense.apply(&x).unwrap(), sparse.apply(&x).unwrap());
        assert_eq!(
            dense.apply_transpose(&y).unwrap(),
            sparse.apply_transpose(&y).unwrap()
        );
        assert_eq!(dense.triplets(), sparse.triplets());
    }
}
