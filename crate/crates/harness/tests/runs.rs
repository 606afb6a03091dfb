use std::path::Path;

use freefista::Algorithm;
use freefista_bench::{compare, read_trace, run, HarnessError, RunConfig, HEADER};

fn config(dir: &Path, problem: &str, algo: &str, seed: u64) -> RunConfig {
    let mut cfg = RunConfig {
        algo: algo.into(),
        seed,
        ..RunConfig::default()
    };
    cfg.problem.name = problem.into();
    cfg.output.trace = Some(dir.join(format!("{problem}-{algo}-{seed}.csv")));
    cfg
}

fn without_time(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn default_lasso_trace_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "lasso", "free-fista", 0);
    let out = run(&cfg).unwrap();
    let text = std::fs::read_to_string(cfg.output.trace.as_ref().unwrap()).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 11));
    assert_eq!(out.summary.exit, "epsilon_reached");
    assert_eq!(out.summary.config.solver.rho, Some(0.8));
}

#[test]
fn same_seed_same_trace() {
    let dir = tempfile::tempdir().unwrap();
    for algo in ["free-fista", "fista"] {
        let a = config(dir.path(), "quadratic", algo, 3);
        let mut b = a.clone();
        b.output.trace = Some(dir.path().join("again.csv"));
        run(&a).unwrap();
        run(&b).unwrap();
        let (ta, tb) = (without_time(a.output.trace.as_ref().unwrap()), without_time(b.output.trace.as_ref().unwrap()));
        assert!(ta.len() > 10);
        assert_eq!(ta, tb, "{algo}");
    }
}

#[test]
fn trace_accounting_matches_report() {
    let dir = tempfile::tempdir().unwrap();
    for algo in Algorithm::ALL {
        let cfg = config(dir.path(), "logistic", algo.name(), 1);
        let mut cfg = cfg;
        cfg.problem.samples = Some(30);
        cfg.problem.features = Some(60);
        let out = run(&cfg).unwrap();
        let rows = read_trace(cfg.output.trace.as_ref().unwrap()).unwrap();
        assert_eq!(rows.len(), out.summary.total_inner_iterations, "{algo}");
        assert_eq!(rows.iter().map(|r| r.backtracks).sum::<usize>(), out.summary.total_backtracks, "{algo}");
        assert!(rows.windows(2).all(|w| w[1].global_iter == w[0].global_iter + 1));
        assert!(rows.windows(2).all(|w| w[1].time_s >= w[0].time_s));
        assert!(rows.iter().all(|r| r.algo == algo.name()));
    }
}

#[test]
fn unknown_names_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let err = run(&config(dir.path(), "ridge", "free-fista", 0)).unwrap_err();
    assert!(matches!(err, HarnessError::Config(_)));
    assert!(err.to_string().contains("logistic"), "{err}");
    let err = run(&config(dir.path(), "lasso", "nesterov", 0)).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("free-fista"), "{err}");
}

#[test]
fn compare_writes_one_trace_per_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "logistic", "free-fista", 2);
    cfg.problem.samples = Some(50);
    cfg.problem.features = Some(400);
    let out = compare(&cfg, &Algorithm::ALL, dir.path()).unwrap();
    let steps = |a: Algorithm| {
        out.iter()
            .find(|o| o.report.algo == a)
            .map(|o| o.report.total_inner_iterations)
            .unwrap()
    };
    for a in Algorithm::ALL {
        let rows = read_trace(&dir.path().join(format!("{}.csv", a.name()))).unwrap();
        assert_eq!(rows.len(), steps(a));
    }
    assert!(steps(Algorithm::FreeFista) <= steps(Algorithm::FistaRestart));
    assert!(steps(Algorithm::FistaRestart) <= steps(Algorithm::Fista));
    assert!(dir.path().join("summary.toml").is_file());
}
