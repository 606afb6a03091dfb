//! Builds problem instances and their starting points from a [`ProblemSpec`].

use freefista::problems::{synthetic_image, Haar2d};
use freefista::{
    make_quadratic_growth_test, CompositeProblem, InpaintingProblem, LeastSquaresProblem, LogisticProblem, Penalty,
    PoissonSrProblem,
};
use ndarray::{Array1, Array2};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::{ProblemKind, ProblemSpec};
use crate::dataset::load_sparse_dataset;
use crate::error::{HarnessError, Result};
use crate::pgm::load_pgm;

/// A problem ready to solve. `l_hat` is the Lipschitz bound used by the
/// fixed-step methods.
pub struct Instance {
    pub spec: ProblemSpec,
    pub seed: u64,
    pub problem: Box<dyn CompositeProblem<f64>>,
    pub x0: Array1<f64>,
    pub l_hat: f64,
    /// SHA-256 of the resolved spec, the seed and any data file contents.
    pub hash: String,
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Instance")
            .field("problem", &self.spec.name)
            .field("dim", &self.problem.dim())
            .field("seed", &self.seed)
            .field("l_hat", &self.l_hat)
            .field("hash", &self.hash)
            .finish()
    }
}

/// Starting points of the random problems are U[-1, 1] from `seed + 1`.
fn uniform_start(dim: usize, seed: u64) -> Array1<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    Array1::from_shape_fn(dim, |_| rng.random_range(-1.0..1.0))
}

/// Largest eigenvalue of `A^T A` by power iteration from a fixed start,
/// inflated by 1% to cover the iteration's underestimate.
pub fn gram_spectral_bound(a: &Array2<f64>) -> f64 {
    let mut v = Array1::from_elem(a.ncols(), 1.0 / (a.ncols() as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w = a.t().dot(&a.dot(&v));
        let n = w.dot(&w).sqrt();
        if n == 0.0 {
            break;
        }
        lambda = n;
        v = w / n;
    }
    1.01 * lambda
}

fn digest(spec: &ProblemSpec, seed: u64) -> Result<String> {
    let mut h = Sha256::new();
    h.update(toml::to_string(spec).expect("problem specs always serialize").as_bytes());
    h.update(seed.to_le_bytes());
    for path in [&spec.dataset, &spec.image].into_iter().flatten() {
        h.update(std::fs::read(path).map_err(|e| HarnessError::io(path, e))?);
    }
    Ok(hex::encode(h.finalize()))
}

pub fn build_instance(spec: &ProblemSpec, seed: u64) -> Result<Instance> {
    let spec = spec.resolved()?;
    let hash = digest(&spec, seed)?;
    let (problem, x0, l_hat): (Box<dyn CompositeProblem<f64>>, _, _) = match spec.kind()? {
        ProblemKind::Quadratic => {
            let dim = spec.dim.unwrap();
            let mu = spec.mu.unwrap();
            let p = make_quadratic_growth_test(dim, mu * spec.ratio.unwrap(), mu, Penalty::L1(spec.lambda.unwrap()), seed)?;
            let l = p.ground_truth().map(|g| g.lipschitz).unwrap();
            (Box::new(p), uniform_start(dim, seed), l)
        }
        ProblemKind::Lasso => {
            let n = spec.features.unwrap();
            let p = LeastSquaresProblem::random_lasso(spec.samples.unwrap(), n, spec.lambda.unwrap(), seed)?;
            let l = gram_spectral_bound(p.matrix());
            (Box::new(p), uniform_start(n, seed), l)
        }
        ProblemKind::Logistic => {
            let (l1, l2) = (spec.lambda1.unwrap(), spec.lambda2.unwrap());
            let p = match &spec.dataset {
                Some(path) => {
                    let data = load_sparse_dataset(path)?;
                    LogisticProblem::new(data.design, data.labels, l1, l2)?
                }
                None => LogisticProblem::random(spec.samples.unwrap(), spec.features.unwrap(), l1, l2, seed)?,
            };
            let l = p.lipschitz_estimate();
            let x0 = uniform_start(p.dim(), seed);
            (Box::new(p), x0, l)
        }
        ProblemKind::Inpainting => {
            let (image, rows, cols) = match &spec.image {
                Some(path) => {
                    let img = load_pgm(path)?;
                    (img.pixels, img.rows, img.cols)
                }
                None => {
                    let (r, c) = (spec.rows.unwrap(), spec.cols.unwrap());
                    (synthetic_image(r, c), r, c)
                }
            };
            let keep = spec.keep.unwrap();
            if !(0.0..=1.0).contains(&keep) {
                return Err(HarnessError::Config(format!("keep must lie in [0, 1], got {keep}")));
            }
            let p: InpaintingProblem<f64, Haar2d> =
                InpaintingProblem::from_image(&image, rows, cols, spec.levels.unwrap(), keep, spec.lambda.unwrap(), seed)?;
            let x0 = p.observed().clone();
            (Box::new(p), x0, 1.0)
        }
        ProblemKind::Poisson => {
            let (rows, cols) = (spec.rows.unwrap(), spec.cols.unwrap());
            let p = PoissonSrProblem::synthetic(
                rows,
                cols,
                spec.factor.unwrap(),
                spec.background.unwrap(),
                spec.lambda.unwrap(),
                seed,
            )?;
            let l = p.lipschitz_estimate()?;
            (Box::new(p), Array1::zeros(rows * cols), l)
        }
    };
    Ok(Instance {
        spec,
        seed,
        problem,
        x0,
        l_hat,
        hash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_start_is_in_range_and_seeded() {
        let a = uniform_start(1000, 3);
        assert!(a.iter().all(|v| (-1.0..1.0).contains(v)));
        assert!((a.mean().unwrap()).abs() < 0.1);
        assert_eq!(a, uniform_start(1000, 3));
        assert_ne!(a, uniform_start(1000, 4));
    }

    #[test]
    fn spectral_bound_of_a_diagonal() {
        let a = Array2::from_diag(&ndarray::array![3.0, 1.0, 0.5]);
        let l = gram_spectral_bound(&a);
        assert!((9.0..=9.0 * 1.01 + 1e-12).contains(&l));
    }

    #[test]
    fn hash_tracks_parameters_and_seed() {
        let spec = ProblemSpec {
            name: "quadratic".into(),
            dim: Some(10),
            ..ProblemSpec::default()
        };
        let a = build_instance(&spec, 1).unwrap();
        assert_eq!(a.hash, build_instance(&spec, 1).unwrap().hash);
        assert_ne!(a.hash, build_instance(&spec, 2).unwrap().hash);
        let other = ProblemSpec { dim: Some(11), ..spec };
        assert_ne!(a.hash, build_instance(&other, 1).unwrap().hash);
        assert_eq!(a.x0.len(), 10);
    }

    #[test]
    fn every_kind_builds() {
        for kind in ProblemKind::ALL {
            let spec = ProblemSpec {
                name: kind.name().into(),
                rows: Some(16),
                cols: Some(16),
                samples: Some(20),
                features: Some(30),
                dim: Some(12),
                ..ProblemSpec::default()
            };
            let inst = build_instance(&spec, 5).unwrap();
            assert_eq!(inst.x0.len(), inst.problem.dim(), "{kind}");
            assert!(inst.l_hat > 0.0 && inst.l_hat.is_finite(), "{kind}");
            assert!(inst.problem.objective(&inst.x0).unwrap().is_finite(), "{kind}");
        }
    }
}
