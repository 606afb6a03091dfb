use std::path::{Path, PathBuf};
use std::time::Instant;

use freefista::{
    fista_adabt_to_tolerance, free_fista, restart_fista_fixed_step, vanilla_fista, Algorithm, ExitReason,
    FreeFistaConfig, SolveReport,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::instance::{build_instance, Instance};
use crate::trace_csv::write_trace;

/// Runs one algorithm. The fixed-step methods use `instance.l_hat`.
pub fn solve(instance: &Instance, algo: Algorithm, cfg: &FreeFistaConfig<f64>) -> Result<SolveReport<f64>> {
    let p = instance.problem.as_ref();
    let x0 = &instance.x0;
    Ok(match algo {
        Algorithm::FreeFista => free_fista(p, x0, cfg)?,
        Algorithm::FistaAdaBt => fista_adabt_to_tolerance(p, x0, cfg)?,
        Algorithm::FistaRestart => restart_fista_fixed_step(p, x0, instance.l_hat, cfg)?,
        Algorithm::Fista => vanilla_fista(p, x0, instance.l_hat, cfg.max_total_iterations, Some(cfg.epsilon))?,
    })
}

/// Summary written next to each trace; `config` holds the effective values.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub algo: String,
    pub problem: String,
    pub problem_hash: String,
    pub dim: usize,
    pub exit: String,
    pub restarts: usize,
    pub total_inner_iterations: usize,
    pub total_backtracks: usize,
    pub fb_backtracks: usize,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub final_g_norm: f64,
    pub l_hat: f64,
    pub wall_time_s: f64,
    pub trace: Option<PathBuf>,
    pub config: RunConfig,
}

impl RunSummary {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summaries always serialize")
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: SolveReport<f64>,
    pub summary: RunSummary,
}

impl RunOutcome {
    pub fn exhausted(&self) -> bool {
        self.report.exit == ExitReason::BudgetExhausted
    }
}

fn execute(instance: &Instance, cfg: &RunConfig, algo: Algorithm, trace: Option<&Path>) -> Result<RunOutcome> {
    let solver_cfg = cfg.solver.to_config()?;
    let start = Instant::now();
    let report = solve(instance, algo, &solver_cfg)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    if let Some(path) = trace {
        write_trace(path, &report.trace)?;
    }
    let mut effective = cfg.clone();
    effective.algo = algo.name().into();
    effective.output.trace = trace.map(Path::to_path_buf);
    let summary = RunSummary {
        algo: algo.name().into(),
        problem: instance.spec.name.clone(),
        problem_hash: instance.hash.clone(),
        dim: instance.problem.dim(),
        exit: report.exit.name().into(),
        restarts: report.restarts,
        total_inner_iterations: report.total_inner_iterations,
        total_backtracks: report.total_backtracks,
        fb_backtracks: report.fb_backtracks,
        initial_objective: report.initial_objective,
        final_objective: report.final_objective,
        final_g_norm: report.final_g_norm,
        l_hat: instance.l_hat,
        wall_time_s,
        trace: trace.map(Path::to_path_buf),
        config: effective,
    };
    Ok(RunOutcome { report, summary })
}

/// Builds the problem, runs the configured algorithm, writes the trace CSV
/// and the TOML report when paths are set.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let cfg = cfg.resolved()?;
    let instance = build_instance(&cfg.problem, cfg.seed)?;
    let outcome = execute(&instance, &cfg, cfg.algorithm()?, cfg.output.trace.as_deref())?;
    if let Some(path) = &cfg.output.report {
        std::fs::write(path, outcome.summary.to_toml()).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(outcome)
}

/// Runs several algorithms on one instance concurrently, each writing
/// `<out_dir>/<algo>.csv`, plus `<out_dir>/summary.toml` with all reports.
pub fn compare(cfg: &RunConfig, algos: &[Algorithm], out_dir: &Path) -> Result<Vec<RunOutcome>> {
    let cfg = cfg.resolved()?;
    if algos.is_empty() {
        return Err(HarnessError::Config("no algorithms to compare".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let instance = build_instance(&cfg.problem, cfg.seed)?;
    let outcomes: Vec<RunOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = algos
            .iter()
            .map(|&algo| {
                let (instance, cfg) = (&instance, &cfg);
                let trace = out_dir.join(format!("{}.csv", algo.name()));
                scope.spawn(move || execute(instance, cfg, algo, Some(&trace)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect::<Result<_>>()
    })?;

    #[derive(Serialize)]
    struct Summaries<'a> {
        runs: Vec<&'a RunSummary>,
    }
    let text = toml::to_string(&Summaries {
        runs: outcomes.iter().map(|o| &o.summary).collect(),
    })
    .expect("summaries always serialize");
    let path = out_dir.join("summary.toml");
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    Ok(outcomes)
}
