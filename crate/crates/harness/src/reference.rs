//! Reference values `F̂ ≈ F*` for plotting `log(F - F̂)`, computed by a long
//! Free-FISTA run and stored in a TOML file keyed by the problem hash.

use std::path::Path;

use freefista::{free_fista, CompositeProblem, FreeFistaConfig, TraceRecord};
use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::instance::Instance;

/// A reference run must be at least this many times longer than any
/// benchmark it serves.
pub const BUDGET_FACTOR: usize = 10;

/// Runs Free-FISTA from `x0` for `budget` steps (no tolerance exit) and
/// returns the final value and point.
pub fn compute_reference<P>(prob: &P, x0: &Array1<f64>, budget: usize) -> Result<(f64, Array1<f64>)>
where
    P: CompositeProblem<f64> + ?Sized,
{
    if budget == 0 {
        return Err(HarnessError::Config("reference budget must be positive".into()));
    }
    let cfg = FreeFistaConfig {
        epsilon: f64::MIN_POSITIVE,
        max_total_iterations: budget,
        ..FreeFistaConfig::default()
    };
    let rep = free_fista(prob, x0, &cfg)?;
    Ok((rep.final_objective, rep.x_out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub problem: String,
    pub problem_hash: String,
    pub seed: u64,
    pub budget: usize,
    pub f_hat: f64,
    /// Lipschitz bound and starting distance, for rate envelopes.
    pub l_hat: f64,
    pub dist0: f64,
    pub x_hat: Vec<f64>,
}

impl Reference {
    pub fn compute(instance: &Instance, budget: usize) -> Result<Self> {
        let (f_hat, x_hat) = compute_reference(instance.problem.as_ref(), &instance.x0, budget)?;
        let d = &instance.x0 - &x_hat;
        Ok(Self {
            problem: instance.spec.name.clone(),
            problem_hash: instance.hash.clone(),
            seed: instance.seed,
            budget,
            f_hat,
            l_hat: instance.l_hat,
            dist0: d.dot(&d).sqrt(),
            x_hat: x_hat.to_vec(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        toml::from_str(&text).map_err(|e| HarnessError::Format {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).expect("references always serialize");
        std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
    }

    /// Rejects a reference that belongs to another problem or was computed
    /// with less than [`BUDGET_FACTOR`] times the benchmark budget.
    pub fn check_applies(&self, problem_hash: &str, benchmark_budget: usize) -> Result<()> {
        if self.problem_hash != problem_hash {
            return Err(HarnessError::StaleReference(format!(
                "reference is for problem hash {}, this run has {}; recompute it",
                self.problem_hash, problem_hash
            )));
        }
        if self.budget < BUDGET_FACTOR.saturating_mul(benchmark_budget) {
            return Err(HarnessError::StaleReference(format!(
                "reference budget {} is below {BUDGET_FACTOR} x the benchmark budget {benchmark_budget}; recompute it",
                self.budget
            )));
        }
        Ok(())
    }

    /// Rejects a reference that a benchmark run undercut by more than rounding.
    pub fn check_trace(&self, trace: &[TraceRecord<f64>]) -> Result<()> {
        let floor = self.f_hat - 8.0 * f64::EPSILON * self.f_hat.abs().max(1.0);
        match trace.iter().find(|r| r.f_value < floor) {
            Some(r) => Err(HarnessError::StaleReference(format!(
                "{} reached F = {:e} at step {}, below the reference {:e}; recompute with a larger budget",
                r.algo, r.f_value, r.global_iter, self.f_hat
            ))),
            None => Ok(()),
        }
    }
}
