use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freefista::Algorithm;
use freefista_bench::{
    build_instance, compare, parse_algorithm, run, HarnessError, ProblemKind, Reference, Result, RunConfig, RunOutcome,
    EXIT_BUDGET_EXHAUSTED,
};

/// Free-FISTA benchmark runner.
///
/// Exit status: 0 success, 2 configuration error, 3 iteration budget
/// exhausted, 4 unreadable input file.
#[derive(Parser)]
#[command(name = "freefista", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and write its trace.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Reference file to validate the run against.
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        /// Report file (TOML); printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several algorithms concurrently on the same instance.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Comma-separated algorithms (default: all four).
        #[arg(long, value_delimiter = ',')]
        algos: Vec<String>,
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        /// Directory receiving `<algo>.csv` and `summary.toml`.
        #[arg(long, default_value = "compare")]
        out: PathBuf,
    },
    /// Precompute F̂ with a long Free-FISTA run.
    Reference {
        #[command(flatten)]
        common: Common,
        /// Steps of the reference run.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        #[arg(long, default_value = "reference.toml")]
        out: PathBuf,
    },
    /// List problems and algorithms.
    List,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    lmin: Option<f64>,
    #[arg(long)]
    l0: Option<f64>,
    /// Doubling constant C.
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// CSV trace output.
    #[arg(long)]
    trace: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.problem {
            cfg.problem.name = p.clone();
        }
        if let Some(a) = &self.algo {
            cfg.algo = a.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        let s = &mut cfg.solver;
        s.rho = self.rho.or(s.rho);
        s.delta = self.delta.or(s.delta);
        s.eps = self.eps.or(s.eps);
        s.l_min = self.lmin.or(s.l_min);
        s.l0 = self.l0.or(s.l0);
        s.c = self.c.or(s.c);
        s.max_iters = self.max_iters.or(s.max_iters);
        if self.trace.is_some() {
            cfg.output.trace = self.trace.clone();
        }
        Ok(cfg)
    }
}

fn check_reference(path: &Path, outcome: &RunOutcome) -> Result<()> {
    let reference = Reference::load(path)?;
    reference.check_applies(&outcome.summary.problem_hash, outcome.report.total_inner_iterations)?;
    reference.check_trace(&outcome.report.trace)
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve { common, reference, out } => {
            let mut cfg = common.config()?;
            if out.is_some() {
                cfg.output.report = out;
            }
            let outcome = run(&cfg)?;
            if cfg.output.report.is_none() {
                print!("{}", outcome.summary.to_toml());
            }
            if let Some(path) = reference {
                check_reference(&path, &outcome)?;
            }
            Ok(if outcome.exhausted() { EXIT_BUDGET_EXHAUSTED } else { 0 })
        }
        Command::Compare {
            common,
            algos,
            reference,
            out,
        } => {
            let cfg = common.config()?;
            let algos: Vec<Algorithm> = if algos.is_empty() {
                Algorithm::ALL.to_vec()
            } else {
                algos.iter().map(|a| parse_algorithm(a)).collect::<Result<_>>()?
            };
            let outcomes = compare(&cfg, &algos, &out)?;
            println!("{:<14} {:>10} {:>10} {:>22} {:>12}  exit", "algo", "steps", "backtracks", "F", "g_norm");
            for o in &outcomes {
                let s = &o.summary;
                println!(
                    "{:<14} {:>10} {:>10} {:>22.15e} {:>12.3e}  {}",
                    s.algo, s.total_inner_iterations, s.total_backtracks, s.final_objective, s.final_g_norm, s.exit
                );
            }
            println!("traces in {}", out.display());
            if let Some(path) = reference {
                for o in &outcomes {
                    check_reference(&path, o)?;
                }
            }
            Ok(if outcomes.iter().any(RunOutcome::exhausted) { EXIT_BUDGET_EXHAUSTED } else { 0 })
        }
        Command::Reference { common, budget, out } => {
            let cfg = common.config()?.resolved()?;
            if let Some(bench) = cfg.solver.max_iters.filter(|_| common.max_iters.is_some()) {
                if budget < freefista_bench::reference::BUDGET_FACTOR * bench {
                    return Err(HarnessError::Config(format!(
                        "reference budget {budget} must be at least {} x --max-iters {bench}",
                        freefista_bench::reference::BUDGET_FACTOR
                    )));
                }
            }
            let instance = build_instance(&cfg.problem, cfg.seed)?;
            let reference = Reference::compute(&instance, budget)?;
            reference.save(&out)?;
            println!("F_hat = {:.17e} ({}, hash {})", reference.f_hat, instance.spec.name, instance.hash);
            Ok(0)
        }
        Command::List => {
            println!("problems:");
            for k in ProblemKind::ALL {
                println!("  {:<12} {}", k.name(), k.describe());
            }
            println!("algorithms:");
            for a in Algorithm::ALL {
                println!("  {}", a.name());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
