//! Parameter-free restarted FISTA.
//!
//! Blocks of adaptive-backtracking FISTA are separated by one backtracked
//! forward-backward step. After block `j` the driver estimates the
//! conditioning from the objective values at the block ends,
//!
//! ```text
//! kappa_j = min_{1 <= i < j} 4 / (rho (n_{i-1} + 1)^2) * (F(r_{i-1}) - F(r_j)) / (F(r_i) - F(r_j)),
//! ```
//!
//! and doubles the block length whenever `n_{j-1} <= C / sqrt(kappa_j)`.
//! The recorded estimate is clamped to the smallest earlier one, which the
//! formula guarantees in exact arithmetic.
//! The run stops once the gradient mapping at the block end drops below
//! `epsilon`.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::fista_adabt::{AdaBt, StepRule};
use crate::problem::CompositeProblem;
use crate::proximal::{fb_bt, forward_backward_map, BacktrackConfig, FbStep};
use crate::scalar::{dist, Scalar};
use crate::trace::{Algorithm, RunClock, TraceRecord};

/// Parameters of the restart driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeFistaConfig<S> {
    pub backtrack: BacktrackConfig<S>,
    /// Doubling constant; must exceed `4 / sqrt(rho)`.
    pub c: S,
    /// Target norm of the composite gradient mapping.
    pub epsilon: S,
    /// Budget on accepted FISTA steps.
    pub max_total_iterations: usize,
    /// Keep every block's starting point in the restart log.
    pub record_block_starts: bool,
}

/// `C = 6.38 / sqrt(rho)`, the maximizer of the guaranteed linear rate.
pub fn optimal_c<S: Scalar>(rho: S) -> S {
    S::of(6.38) / rho.sqrt()
}

impl<S: Scalar> Default for FreeFistaConfig<S> {
    fn default() -> Self {
        let backtrack = BacktrackConfig::default();
        Self {
            backtrack,
            c: optimal_c(backtrack.rho),
            epsilon: S::of(1e-6),
            max_total_iterations: 1_000_000,
            record_block_starts: false,
        }
    }
}

impl<S: Scalar> FreeFistaConfig<S> {
    /// Default configuration with `rho` and the matching optimal `C`.
    pub fn with_rho(rho: S) -> Self {
        let mut cfg = Self::default();
        cfg.backtrack.rho = rho;
        cfg.c = optimal_c(rho);
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        self.backtrack.validate()?;
        self.validate_restart(self.backtrack.rho)
    }

    fn validate_restart(&self, rho: S) -> Result<()> {
        let c_min = S::of(4.0) / rho.sqrt();
        if !(self.c > c_min) {
            return Err(Error::InvalidParameter(format!(
                "C must exceed 4/sqrt(rho) = {c_min}, got {}",
                self.c
            )));
        }
        if !(self.epsilon > S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_total_iterations == 0 {
            return Err(Error::InvalidParameter("iteration budget must be positive".into()));
        }
        Ok(())
    }

    /// First two block lengths, `floor(2C)`.
    pub fn initial_block_len(&self) -> usize {
        ((S::of(2.0) * self.c).floor().as_f64() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitReason {
    EpsilonReached,
    BudgetExhausted,
}

impl ExitReason {
    pub fn name(self) -> &'static str {
        match self {
            ExitReason::EpsilonReached => "epsilon_reached",
            ExitReason::BudgetExhausted => "budget_exhausted",
        }
    }
}

/// Bookkeeping of one restart block `j` (1-based).
#[derive(Debug, Clone)]
pub struct RestartRecord<S> {
    pub j: usize,
    /// `n_{j-1}`, the number of steps run in this block.
    pub block_len: usize,
    /// `F` at the block's starting point `r_{j-1}^+` (`r_0` for `j = 1`).
    pub start_objective: S,
    /// `F(r_j)`
    pub f_r: S,
    /// `F(r_j^+)`
    pub f_r_plus: S,
    /// `L_j`, the estimate at the end of the block.
    pub l_block: S,
    /// `L_j^+`, after the extra forward-backward step.
    pub l_plus: S,
    /// `kappa_j`; `None` for `j = 1` or when every term was skipped.
    pub kappa: Option<S>,
    /// `n_j`
    pub next_len: usize,
    /// `|g_{1/L_j^+}(r_j)|`
    pub g_norm: S,
    pub fb_backtracks: usize,
    pub block_start: Option<Array1<S>>,
}

/// Terminal output of a solver run.
#[derive(Debug, Clone)]
pub struct SolveReport<S> {
    pub algo: Algorithm,
    pub x_out: Array1<S>,
    pub exit: ExitReason,
    /// Completed restart blocks (0 for non-restarted solvers).
    pub restarts: usize,
    /// Accepted FISTA steps.
    pub total_inner_iterations: usize,
    /// Rejected step-size trials inside FISTA steps (sum of the trace column).
    pub total_backtracks: usize,
    /// Rejected trials inside the extra forward-backward steps.
    pub fb_backtracks: usize,
    pub initial_objective: S,
    pub final_objective: S,
    /// Last computed gradient-mapping norm (NaN if none).
    pub final_g_norm: S,
    pub trace: Vec<TraceRecord<S>>,
    pub restart_log: Vec<RestartRecord<S>>,
}

impl<S: Scalar> SolveReport<S> {
    /// The sequence `n_0, n_1, ...` of block lengths decided so far.
    pub fn block_lengths(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.restart_log.iter().map(|r| r.block_len).collect();
        if let Some(last) = self.restart_log.last() {
            out.push(last.next_len);
        }
        out
    }
}

/// Conditioning estimate after block `j >= 2`.
///
/// `objectives` holds `F(r_0), ..., F(r_j)` and `block_lens` at least
/// `n_0, ..., n_{j-2}`. Terms whose denominator `F(r_i) - F(r_j)` is below
/// `1e-14 max(1, |F(r_i)|)` are skipped; `None` means every term was.
pub fn kappa_estimate<S: Scalar>(
    objectives: &[S],
    block_lens: &[usize],
    rho: S,
    j: usize,
) -> Result<Option<S>> {
    if j < 2 {
        return Err(Error::InvalidParameter(format!(
            "conditioning estimate needs j >= 2, got {j}"
        )));
    }
    if objectives.len() <= j || block_lens.len() + 1 < j {
        return Err(Error::InvalidParameter(format!(
            "conditioning estimate at j = {j} needs {} objective values and {} block lengths",
            j + 1,
            j - 1
        )));
    }
    let guard = S::of(1e-14) * S::precision_ratio();
    let f_j = objectives[j];
    let four = S::of(4.0);
    let mut best: Option<S> = None;
    for i in 1..j {
        let den = objectives[i] - f_j;
        if den <= guard * objectives[i].abs().max(S::one()) {
            continue;
        }
        let n = S::of((block_lens[i - 1] + 1) as f64);
        let term = four / (rho * n * n) * (objectives[i - 1] - f_j) / den;
        best = Some(best.map_or(term, |b| b.min(term)));
    }
    Ok(best)
}

/// Doubles `n_prev` when `n_prev <= C sqrt(1 / kappa)`.
pub fn doubling_rule<S: Scalar>(n_prev: usize, kappa: S, c: S) -> usize {
    if S::of(n_prev as f64) <= c * kappa.recip().sqrt() {
        2 * n_prev
    } else {
        n_prev
    }
}

#[derive(Debug, Clone, Copy)]
enum Mode<S> {
    Adaptive,
    /// Step pinned at `1 / l_hat`.
    Fixed(S),
}

/// Free-FISTA: restarted FISTA with adaptive backtracking and automatic
/// block lengths.
pub fn free_fista<S, P>(prob: &P, r0: &Array1<S>, cfg: &FreeFistaConfig<S>) -> Result<SolveReport<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    cfg.validate()?;
    run_restarts(prob, r0, cfg, Mode::Adaptive)
}

/// The restart schedule of [`free_fista`] with the step fixed to `1 / l_hat`:
/// no backtracking anywhere and `rho = 1` in the conditioning estimate.
pub fn restart_fista_fixed_step<S, P>(
    prob: &P,
    x0: &Array1<S>,
    l_hat: S,
    cfg: &FreeFistaConfig<S>,
) -> Result<SolveReport<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    if !(l_hat > S::zero()) || !l_hat.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fixed-step Lipschitz estimate must be positive, got {l_hat}"
        )));
    }
    cfg.validate_restart(S::one())?;
    run_restarts(prob, x0, cfg, Mode::Fixed(l_hat))
}

fn run_restarts<S, P>(prob: &P, r0: &Array1<S>, cfg: &FreeFistaConfig<S>, mode: Mode<S>) -> Result<SolveReport<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let clock = RunClock::start();
    let (algo, rule, rho_est, mut l_start) = match mode {
        Mode::Adaptive => (
            Algorithm::FreeFista,
            StepRule::Adaptive(cfg.backtrack),
            cfg.backtrack.rho,
            cfg.backtrack.l0,
        ),
        Mode::Fixed(l_hat) => (Algorithm::FistaRestart, StepRule::Fixed(l_hat.recip()), S::one(), l_hat),
    };

    let n0 = cfg.initial_block_len();
    let initial_objective = prob.objective(r0)?;
    let mut objectives = vec![initial_objective];
    let mut block_lens = vec![n0];
    let mut start = r0.clone();
    let mut start_objective = initial_objective;
    let mut trace: Vec<TraceRecord<S>> = Vec::new();
    let mut log: Vec<RestartRecord<S>> = Vec::new();
    let mut total_backtracks = 0;
    let mut fb_backtracks = 0;
    let mut final_g_norm = S::nan();
    let mut kappa_min: Option<S> = None;
    let mut j = 0;

    let exit = loop {
        j += 1;
        let n_block = block_lens[j - 1];
        if trace.len() + n_block > cfg.max_total_iterations {
            break ExitReason::BudgetExhausted;
        }

        let mut solver = AdaBt::new(prob, start.clone(), l_start, rule);
        let mut f_r = start_objective;
        for _ in 0..n_block {
            let info = solver.step()?;
            total_backtracks += info.backtracks;
            f_r = info.objective;
            trace.push(TraceRecord {
                algo,
                restart: j,
                global_iter: trace.len() + 1,
                backtracks: info.backtracks,
                tau: info.tau,
                l_est: info.tau.recip(),
                kappa_est: S::nan(),
                n_j: n_block,
                f_value: info.objective,
                g_norm: S::nan(),
                time_s: clock.seconds(),
                step_norm: info.step_norm,
            });
        }
        let l_block = solver.lipschitz();
        let r_j = solver.into_state().x_cur;
        objectives.push(f_r);

        // In exact arithmetic kappa_j <= kappa_{j-1}; near F* rounding in the
        // value differences can break that, so carry the running minimum.
        let kappa = if j >= 2 {
            kappa_estimate(&objectives, &block_lens, rho_est, j)?.map(|k| match kappa_min {
                Some(prev) if prev < k => prev,
                _ => k,
            })
        } else {
            None
        };
        if kappa.is_some() {
            kappa_min = kappa;
        }
        let next_len = match (j, kappa) {
            (1, _) => n0,
            (_, Some(k)) => doubling_rule(n_block, k, cfg.c),
            (_, None) => 2 * n_block,
        };
        block_lens.push(next_len);

        let fb = match mode {
            Mode::Adaptive => fb_bt(prob, &r_j, l_block, &cfg.backtrack)?,
            Mode::Fixed(l_hat) => fixed_fb_step(prob, &r_j, l_hat)?,
        };
        fb_backtracks += fb.backtracks;
        final_g_norm = fb.g_norm;
        let f_r_plus = fb.smooth_value + prob.penalty_value(&fb.point);
        if let Some(last) = trace.last_mut() {
            last.kappa_est = kappa.unwrap_or(S::nan());
            last.g_norm = fb.g_norm;
        }
        log.push(RestartRecord {
            j,
            block_len: n_block,
            start_objective,
            f_r,
            f_r_plus,
            l_block,
            l_plus: fb.l_plus,
            kappa,
            next_len,
            g_norm: fb.g_norm,
            fb_backtracks: fb.backtracks,
            block_start: cfg.record_block_starts.then(|| start.clone()),
        });

        start = fb.point;
        start_objective = f_r_plus;
        l_start = fb.l_plus;
        if j >= 2 && fb.g_norm <= cfg.epsilon {
            break ExitReason::EpsilonReached;
        }
    };

    Ok(SolveReport {
        algo,
        exit,
        restarts: log.len(),
        total_inner_iterations: trace.len(),
        total_backtracks,
        fb_backtracks,
        initial_objective,
        final_objective: start_objective,
        final_g_norm,
        x_out: start,
        trace,
        restart_log: log,
    })
}

fn fixed_fb_step<S, P>(prob: &P, r: &Array1<S>, l_hat: S) -> Result<FbStep<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let point = forward_backward_map(prob, r, l_hat.recip())?;
    Ok(FbStep {
        g_norm: l_hat * dist(r, &point),
        smooth_value: prob.smooth_value(&point)?,
        point,
        l_plus: l_hat,
        backtracks: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_single_term() {
        let k = kappa_estimate(&[10.0f64, 2.0, 1.0], &[4, 4], 1.0, 2).unwrap().unwrap();
        assert!((k - 1.44).abs() < 1e-14);
    }

    #[test]
    fn kappa_takes_minimum_with_newest_value() {
        // j = 3: i = 1 gives 4/25 * (10 - 0.5)/(2 - 0.5); i = 2 gives 4/81 * (2 - 0.5)/(1 - 0.5)
        let k = kappa_estimate(&[10.0f64, 2.0, 1.0, 0.5], &[4, 8, 8], 1.0, 3).unwrap().unwrap();
        let t1: f64 = 4.0 / 25.0 * 9.5 / 1.5;
        let t2 = 4.0 / 81.0 * 1.5 / 0.5;
        assert!((k - t1.min(t2)).abs() < 1e-14);
    }

    #[test]
    fn kappa_undefined_when_flat() {
        assert_eq!(kappa_estimate(&[1.0, 1.0, 1.0], &[4, 4], 0.8, 2).unwrap(), None);
        assert!(kappa_estimate(&[1.0, 1.0], &[4], 0.8, 1).is_err());
        assert!(kappa_estimate(&[1.0, 1.0], &[4], 0.8, 2).is_err());
    }

    #[test]
    fn doubling_boundary_is_inclusive() {
        assert_eq!(doubling_rule(10, 1.0, 10.0), 20);
        assert_eq!(doubling_rule(11, 1.0, 10.0), 11);
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = FreeFistaConfig::<f64>::default();
        assert!((cfg.c - 6.38 / 0.8f64.sqrt()).abs() < 1e-15);
        assert_eq!(cfg.initial_block_len(), 14);
        assert!(cfg.validate().is_ok());
        assert!(FreeFistaConfig { c: 4.0, ..cfg }.validate().is_err());
        assert!(FreeFistaConfig { epsilon: 0.0, ..cfg }.validate().is_err());
    }
}
