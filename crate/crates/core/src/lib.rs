//! Restarted FISTA with adaptive backtracking for composite problems
//! `min_x f(x) + h(x)`, where `f` is smooth with a Lipschitz gradient and `h`
//! has a cheap proximal operator.
//!
//! [`free_fista()`] needs neither the Lipschitz constant nor the growth
//! constant: step sizes come from a non-monotone backtracking search and the
//! restart period is adapted from an online conditioning estimate. The
//! crate also ships the fixed-step and non-restarted comparators, a set of
//! test problems and closed-form worst-case bounds.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the double precision variants.
//!
//! ```
//! use freefista::{free_fista, FreeFistaConfig, Penalty, QuadraticProblem};
//! use ndarray::array;
//!
//! let prob = QuadraticProblem::new(array![1.0, 10.0], array![2.0, -3.0], Penalty::L1(0.1)).unwrap();
//! let report = free_fista(&prob, &array![0.0, 0.0], &FreeFistaConfig::default()).unwrap();
//! assert!(report.final_g_norm <= 1e-6);
//! ```

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bounds;
pub mod error;
pub mod fista_adabt;
pub mod free_fista;
pub mod problem;
pub mod problems;
pub mod proximal;
pub mod scalar;
pub mod trace;

pub use baselines::{fista_adabt_to_tolerance, vanilla_fista};
pub use error::{Error, Result};
pub use fista_adabt::{fista_adabt, harmonic_l_bar, t_update, AdaBt, AdaBtOutput, AdaBtState, StepInfo, StepRule};
pub use free_fista::{
    doubling_rule, free_fista, kappa_estimate, optimal_c, restart_fista_fixed_step, ExitReason, FreeFistaConfig,
    RestartRecord, SolveReport,
};
pub use problem::{soft_threshold, CompositeProblem, GroundTruth, Penalty};
pub use problems::{
    make_quadratic_growth_test, Design, InpaintingProblem, LeastSquaresProblem, LogisticProblem, PoissonSrProblem,
    QuadraticProblem,
};
pub use proximal::{
    acceptance_test, bregman_divergence, composite_gradient_mapping, fb_bt, forward_backward_map, BacktrackConfig,
    FbStep,
};
pub use scalar::{norm, Scalar};
pub use trace::{Algorithm, RunClock, TraceRecord};

pub type Config = FreeFistaConfig<f64>;
pub type Report = SolveReport<f64>;
pub type Record = TraceRecord<f64>;
pub type Quadratic = QuadraticProblem<f64>;
pub type Lasso = LeastSquaresProblem<f64>;
pub type Logistic = LogisticProblem<f64>;
pub type Poisson = PoissonSrProblem<f64>;
