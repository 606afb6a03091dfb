//! Non-restarted comparators run to a gradient-mapping tolerance.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::fista_adabt::{t_update, AdaBt, StepRule};
use crate::free_fista::{ExitReason, FreeFistaConfig, SolveReport};
use crate::problem::CompositeProblem;
use crate::proximal::{fb_bt, forward_backward_map, prox_step};
use crate::scalar::{dist, Scalar};
use crate::trace::{Algorithm, RunClock, TraceRecord};

/// Classical FISTA with constant step `1 / l_hat`.
///
/// After each step the gradient mapping `l_hat |x_k - T_{1/l_hat}(x_k)|` is
/// evaluated; the run stops once it is at most `epsilon` (if given) or after
/// `max_iter` steps.
pub fn vanilla_fista<S, P>(
    prob: &P,
    x0: &Array1<S>,
    l_hat: S,
    max_iter: usize,
    epsilon: Option<S>,
) -> Result<SolveReport<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    if !(l_hat > S::zero()) || !l_hat.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Lipschitz estimate must be positive, got {l_hat}"
        )));
    }
    let clock = RunClock::start();
    let tau = l_hat.recip();
    let initial_objective = prob.objective(x0)?;
    let mut x_prev = x0.clone();
    let mut x = x0.clone();
    let mut t = S::one();
    let mut f_x = initial_objective;
    let mut g_norm = S::nan();
    let mut trace = Vec::new();
    let mut exit = ExitReason::BudgetExhausted;

    for k in 1..=max_iter {
        let t_next = t_update(t, tau, tau);
        let beta = (t - S::one()) / t_next;
        let mut y = x.clone();
        y.scaled_add(beta, &(&x - &x_prev));
        let grad = prob.smooth_gradient(&y)?;
        let x_new = prox_step(prob, &y, &grad, tau);
        let step_norm = dist(&x_new, &x);
        f_x = prob.objective(&x_new)?;
        x_prev = std::mem::replace(&mut x, x_new);
        t = t_next;

        if epsilon.is_some() {
            g_norm = l_hat * dist(&x, &forward_backward_map(prob, &x, tau)?);
        }
        trace.push(TraceRecord {
            algo: Algorithm::Fista,
            restart: 0,
            global_iter: k,
            backtracks: 0,
            tau,
            l_est: l_hat,
            kappa_est: S::nan(),
            n_j: 0,
            f_value: f_x,
            g_norm,
            time_s: clock.seconds(),
            step_norm,
        });
        if epsilon.is_some_and(|eps| g_norm <= eps) {
            exit = ExitReason::EpsilonReached;
            break;
        }
    }

    Ok(SolveReport {
        algo: Algorithm::Fista,
        exit,
        restarts: 0,
        total_inner_iterations: trace.len(),
        total_backtracks: 0,
        fb_backtracks: 0,
        initial_objective,
        final_objective: f_x,
        final_g_norm: g_norm,
        x_out: x,
        trace,
        restart_log: Vec::new(),
    })
}

/// Adaptive-backtracking FISTA without restarts.
///
/// After each step a backtracked forward-backward step from `(x_k, L_k)`
/// certifies the gradient mapping; its point is not fed back into the
/// iteration. Stops at `cfg.epsilon` or after `cfg.max_total_iterations`
/// steps.
pub fn fista_adabt_to_tolerance<S, P>(prob: &P, x0: &Array1<S>, cfg: &FreeFistaConfig<S>) -> Result<SolveReport<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    cfg.validate()?;
    let clock = RunClock::start();
    let bt = cfg.backtrack;
    let initial_objective = prob.objective(x0)?;
    let mut solver = AdaBt::new(prob, x0.clone(), bt.l0, StepRule::Adaptive(bt));
    let mut trace = Vec::new();
    let mut total_backtracks = 0;
    let mut fb_backtracks = 0;
    let mut f_x = initial_objective;
    let mut g_norm = S::nan();
    let mut exit = ExitReason::BudgetExhausted;

    for k in 1..=cfg.max_total_iterations {
        let info = solver.step()?;
        total_backtracks += info.backtracks;
        f_x = info.objective;
        let fb = fb_bt(prob, &solver.state().x_cur, solver.lipschitz(), &bt)?;
        fb_backtracks += fb.backtracks;
        g_norm = fb.g_norm;
        trace.push(TraceRecord {
            algo: Algorithm::FistaAdaBt,
            restart: 0,
            global_iter: k,
            backtracks: info.backtracks,
            tau: info.tau,
            l_est: info.tau.recip(),
            kappa_est: S::nan(),
            n_j: 0,
            f_value: info.objective,
            g_norm,
            time_s: clock.seconds(),
            step_norm: info.step_norm,
        });
        if g_norm <= cfg.epsilon {
            exit = ExitReason::EpsilonReached;
            break;
        }
    }

    Ok(SolveReport {
        algo: Algorithm::FistaAdaBt,
        exit,
        restarts: 0,
        total_inner_iterations: trace.len(),
        total_backtracks,
        fb_backtracks,
        initial_objective,
        final_objective: f_x,
        final_g_norm: g_norm,
        x_out: solver.into_state().x_cur,
        trace,
        restart_log: Vec::new(),
    })
}
