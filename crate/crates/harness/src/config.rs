//! Run configuration: a TOML file with `[problem]`, `[solver]` and
//! `[output]` sections, overridden field by field from the command line.
//!
//! ```toml
//! algo = "free-fista"
//! seed = 7
//!
//! [problem]
//! name = "logistic"
//! samples = 100
//! features = 2000
//!
//! [solver]
//! eps = 1e-6
//! max_iters = 100000
//!
//! [output]
//! trace = "free.csv"
//! ```
//!
//! [`RunConfig::resolved`] fills every unset field with its default so the
//! report can echo the values that were actually used.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use freefista::{optimal_c, Algorithm, BacktrackConfig, FreeFistaConfig};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Quadratic,
    Lasso,
    Logistic,
    Inpainting,
    Poisson,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::Quadratic,
        ProblemKind::Lasso,
        ProblemKind::Logistic,
        ProblemKind::Inpainting,
        ProblemKind::Poisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Quadratic => "quadratic",
            ProblemKind::Lasso => "lasso",
            ProblemKind::Logistic => "logistic",
            ProblemKind::Inpainting => "inpainting",
            ProblemKind::Poisson => "poisson",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            ProblemKind::Quadratic => "diagonal quadratic + l1 with known L, mu and minimizer (dim, ratio, mu, lambda)",
            ProblemKind::Lasso => "Gaussian least squares + l1 (samples, features, lambda)",
            ProblemKind::Logistic => "l1/l2 logistic regression, synthetic or from `dataset` (samples, features, lambda1, lambda2)",
            ProblemKind::Inpainting => "masked image + Haar l1, synthetic or from a PGM `image` (rows, cols, levels, keep, lambda)",
            ProblemKind::Poisson => "Poisson super-resolution with KL data term + nonneg l1 (rows, cols, factor, background, lambda)",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = ProblemKind::ALL.iter().map(|k| k.name()).collect();
            HarnessError::Config(format!("unknown problem '{s}', expected one of: {}", names.join(", ")))
        })
    }
}

pub fn parse_algorithm(name: &str) -> Result<Algorithm> {
    name.parse().map_err(|e: freefista::Error| match e {
        freefista::Error::InvalidParameter(msg) => HarnessError::Config(msg),
        other => other.into(),
    })
}

/// Problem name and parameters. Parameters that do not apply to the named
/// problem are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    pub dim: Option<usize>,
    /// Condition number `L / mu` of the quadratic.
    pub ratio: Option<f64>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub samples: Option<usize>,
    pub features: Option<usize>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// Sparse `label idx:val` file for logistic regression.
    pub dataset: Option<PathBuf>,
    /// Binary PGM for inpainting.
    pub image: Option<PathBuf>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub levels: Option<usize>,
    /// Fraction of observed pixels.
    pub keep: Option<f64>,
    pub factor: Option<usize>,
    pub background: Option<f64>,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self {
            name: ProblemKind::Lasso.name().into(),
            dim: None,
            ratio: None,
            mu: None,
            lambda: None,
            samples: None,
            features: None,
            lambda1: None,
            lambda2: None,
            dataset: None,
            image: None,
            rows: None,
            cols: None,
            levels: None,
            keep: None,
            factor: None,
            background: None,
        }
    }
}

impl ProblemSpec {
    pub fn kind(&self) -> Result<ProblemKind> {
        self.name.parse()
    }

    /// Copy with the defaults of this problem filled in and the parameters
    /// of other problems cleared.
    pub fn resolved(&self) -> Result<ProblemSpec> {
        let kind = self.kind()?;
        let mut out = ProblemSpec {
            name: kind.name().into(),
            ..ProblemSpec::default()
        };
        match kind {
            ProblemKind::Quadratic => {
                out.dim = Some(self.dim.unwrap_or(100));
                out.ratio = Some(self.ratio.unwrap_or(1e4));
                out.mu = Some(self.mu.unwrap_or(1.0));
                out.lambda = Some(self.lambda.unwrap_or(0.1));
            }
            ProblemKind::Lasso => {
                out.samples = Some(self.samples.unwrap_or(200));
                out.features = Some(self.features.unwrap_or(100));
                out.lambda = Some(self.lambda.unwrap_or(0.5));
            }
            ProblemKind::Logistic => {
                out.lambda1 = Some(self.lambda1.unwrap_or(10.0));
                out.lambda2 = Some(self.lambda2.unwrap_or(3.0));
                if let Some(path) = &self.dataset {
                    require_file(path)?;
                    out.dataset = Some(path.clone());
                } else {
                    out.samples = Some(self.samples.unwrap_or(100));
                    out.features = Some(self.features.unwrap_or(2000));
                }
            }
            ProblemKind::Inpainting => {
                if let Some(path) = &self.image {
                    require_file(path)?;
                    out.image = Some(path.clone());
                } else {
                    out.rows = Some(self.rows.unwrap_or(64));
                    out.cols = Some(self.cols.unwrap_or(64));
                }
                out.levels = Some(self.levels.unwrap_or(3));
                out.keep = Some(self.keep.unwrap_or(0.5));
                out.lambda = Some(self.lambda.unwrap_or(0.05));
            }
            ProblemKind::Poisson => {
                out.rows = Some(self.rows.unwrap_or(64));
                out.cols = Some(self.cols.unwrap_or(64));
                out.factor = Some(self.factor.unwrap_or(2));
                out.background = Some(self.background.unwrap_or(1.0));
                out.lambda = Some(self.lambda.unwrap_or(0.1));
            }
        }
        Ok(out)
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(HarnessError::Config(format!("data file {} does not exist", path.display())))
    }
}

/// Solver parameters; unset values take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub rho: Option<f64>,
    pub delta: Option<f64>,
    pub eps: Option<f64>,
    pub l_min: Option<f64>,
    pub l0: Option<f64>,
    /// Doubling constant; defaults to the optimal value for `rho`.
    pub c: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SolverSettings {
    pub fn resolved(&self) -> SolverSettings {
        let bt = BacktrackConfig::<f64>::default();
        let base = FreeFistaConfig::<f64>::default();
        let rho = self.rho.unwrap_or(bt.rho);
        SolverSettings {
            rho: Some(rho),
            delta: Some(self.delta.unwrap_or(bt.delta)),
            eps: Some(self.eps.unwrap_or(base.epsilon)),
            l_min: Some(self.l_min.unwrap_or(bt.l_min)),
            l0: Some(self.l0.unwrap_or(bt.l0)),
            c: Some(self.c.unwrap_or_else(|| optimal_c(rho))),
            max_iters: Some(self.max_iters.unwrap_or(base.max_total_iterations)),
        }
    }

    pub fn to_config(&self) -> Result<FreeFistaConfig<f64>> {
        let r = self.resolved();
        let cfg = FreeFistaConfig {
            backtrack: BacktrackConfig {
                rho: r.rho.unwrap(),
                delta: r.delta.unwrap(),
                l_min: r.l_min.unwrap(),
                l0: r.l0.unwrap(),
                ..BacktrackConfig::default()
            },
            c: r.c.unwrap(),
            epsilon: r.eps.unwrap(),
            max_total_iterations: r.max_iters.unwrap(),
            record_block_starts: false,
        };
        cfg.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    /// CSV trace.
    pub trace: Option<PathBuf>,
    /// TOML run report; printed to stdout when unset.
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub algo: String,
    pub seed: u64,
    pub problem: ProblemSpec,
    pub solver: SolverSettings,
    pub output: OutputPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algo: Algorithm::FreeFista.name().into(),
            seed: 0,
            problem: ProblemSpec::default(),
            solver: SolverSettings::default(),
            output: OutputPaths::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1);
            HarnessError::Parse {
                path: path.to_path_buf(),
                line,
                message: e.message().to_string(),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs always serialize")
    }

    pub fn algorithm(&self) -> Result<Algorithm> {
        parse_algorithm(&self.algo)
    }

    /// Validated copy with every default written out.
    pub fn resolved(&self) -> Result<RunConfig> {
        self.algorithm()?;
        self.solver.to_config()?;
        Ok(RunConfig {
            algo: self.algo.clone(),
            seed: self.seed,
            problem: self.problem.resolved()?,
            solver: self.solver.resolved(),
            output: self.output.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let cfg = RunConfig::default().resolved().unwrap();
        assert_eq!(cfg.problem.name, "lasso");
        assert_eq!(cfg.solver.rho, Some(0.8));
        assert!((cfg.solver.c.unwrap() - 6.38 / 0.8f64.sqrt()).abs() < 1e-12);
        let again = RunConfig::from_toml(&cfg.to_toml(), Path::new("echo")).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn unknown_names_list_the_choices() {
        let err = "ridge".parse::<ProblemKind>().unwrap_err().to_string();
        assert!(err.contains("quadratic") && err.contains("poisson"), "{err}");
        let cfg = RunConfig {
            algo: "ista".into(),
            ..RunConfig::default()
        };
        let err = cfg.resolved().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("fista-adabt"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = RunConfig::from_toml("seed = 1\n[solver]\nrho = oops\n", Path::new("run.toml")).unwrap_err();
        match &err {
            HarnessError::Parse { line, .. } => assert_eq!(*line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(err.exit_code(), 4);
        assert!(RunConfig::from_toml("[solver]\nrh0 = 0.5\n", Path::new("x")).is_err());
    }

    #[test]
    fn invalid_solver_values_are_config_errors() {
        let s = SolverSettings {
            rho: Some(1.5),
            ..SolverSettings::default()
        };
        assert_eq!(s.to_config().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn missing_data_file() {
        let spec = ProblemSpec {
            name: "logistic".into(),
            dataset: Some("/nonexistent/data.svm".into()),
            ..ProblemSpec::default()
        };
        assert!(matches!(spec.resolved(), Err(HarnessError::Config(_))));
    }
}
