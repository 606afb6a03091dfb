//! Benchmark harness for the `freefista` solvers: TOML run configurations,
//! CSV traces, sparse dataset and PGM loaders, reference values and
//! concurrent comparison runs. The `freefista` binary wraps it.
//!
//! ```no_run
//! use freefista_bench::{run, RunConfig};
//!
//! let mut cfg = RunConfig::default();
//! cfg.problem.name = "quadratic".into();
//! cfg.output.trace = Some("quadratic.csv".into());
//! let outcome = run(&cfg)?;
//! println!("{} steps", outcome.report.total_inner_iterations);
//! # Ok::<(), freefista_bench::HarnessError>(())
//! ```

pub mod config;
pub mod dataset;
pub mod error;
pub mod instance;
pub mod pgm;
pub mod reference;
pub mod run;
pub mod trace_csv;

pub use config::{parse_algorithm, OutputPaths, ProblemKind, ProblemSpec, RunConfig, SolverSettings};
pub use dataset::{load_sparse_dataset, write_sparse_dataset, Dataset};
pub use error::{HarnessError, Result, EXIT_BUDGET_EXHAUSTED};
pub use instance::{build_instance, Instance};
pub use pgm::{load_pgm, write_pgm, GrayImage};
pub use reference::{compute_reference, Reference};
pub use run::{compare, run, solve, RunOutcome, RunSummary};
pub use trace_csv::{read_trace, write_trace, CsvRow, HEADER};
