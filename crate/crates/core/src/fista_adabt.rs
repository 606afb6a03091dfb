//! FISTA with adaptive, non-monotone backtracking.
//!
//! Every step first tries to enlarge the step size (`tau / delta`, capped by
//! `1 / l_min`) and then shrinks it by `rho` until the Bregman test accepts.
//! The inertial parameter couples consecutive step sizes,
//!
//! ```text
//! t_{k+1} = (1 + sqrt(1 + 4 (tau_k / tau_{k+1}) t_k^2)) / 2,
//! ```
//!
//! so `t`, the extrapolated point and its gradient are recomputed on every
//! trial.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::problem::CompositeProblem;
use crate::proximal::{bregman_accepts, prox_step, BacktrackConfig};
use crate::scalar::{dist, Scalar};
use crate::trace::{Algorithm, RunClock, TraceRecord};

/// Inertial update coupled to the step-size ratio.
///
/// Satisfies `tau_next t+ (t+ - 1) = tau_prev t^2`.
pub fn t_update<S: Scalar>(t: S, tau_prev: S, tau_next: S) -> S {
    let four = S::of(4.0);
    (S::one() + (S::one() + four * (tau_prev / tau_next) * t * t).sqrt()) / S::of(2.0)
}

/// Squared harmonic mean of `sqrt(L_i)`: `(mean(1 / sqrt(L_i)))^-2`.
pub fn harmonic_l_bar<S: Scalar>(estimates: &[S]) -> Result<S> {
    if estimates.is_empty() {
        return Err(Error::Empty("Lipschitz estimate list"));
    }
    let mean = estimates.iter().map(|l| l.sqrt().recip()).sum::<S>()
        / S::of(estimates.len() as f64);
    Ok(mean.powi(-2))
}

/// How a step picks its size.
#[derive(Debug, Clone, Copy)]
pub enum StepRule<S> {
    Adaptive(BacktrackConfig<S>),
    /// Constant step, no acceptance test.
    Fixed(S),
}

/// Iteration state of a FISTA run.
#[derive(Debug, Clone)]
pub struct AdaBtState<S> {
    pub x_prev: Array1<S>,
    pub x_cur: Array1<S>,
    pub t: S,
    pub tau: S,
    /// Completed steps.
    pub k: usize,
    pub cum_backtracks: usize,
}

/// Summary of one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo<S> {
    pub tau: S,
    pub backtracks: usize,
    /// `F(x_{k+1})`
    pub objective: S,
    /// `|x_{k+1} - x_k|`
    pub step_norm: S,
}

/// Stepper shared by the adaptive solver, the restart drivers and the
/// fixed-step baselines.
pub struct AdaBt<'p, S: Scalar, P: ?Sized> {
    prob: &'p P,
    rule: StepRule<S>,
    state: AdaBtState<S>,
}

impl<'p, S, P> AdaBt<'p, S, P>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    /// Starts at `x0` with `x_{-1} = x0`, `t = 1` and `tau = 1 / l0`
    /// (ignored for a fixed rule).
    pub fn new(prob: &'p P, x0: Array1<S>, l0: S, rule: StepRule<S>) -> Self {
        let tau = match rule {
            StepRule::Adaptive(_) => S::one() / l0,
            StepRule::Fixed(tau) => tau,
        };
        Self {
            prob,
            rule,
            state: AdaBtState {
                x_prev: x0.clone(),
                x_cur: x0,
                t: S::one(),
                tau,
                k: 0,
                cum_backtracks: 0,
            },
        }
    }

    pub fn state(&self) -> &AdaBtState<S> {
        &self.state
    }

    pub fn into_state(self) -> AdaBtState<S> {
        self.state
    }

    /// Current Lipschitz estimate `1 / tau`.
    pub fn lipschitz(&self) -> S {
        self.state.tau.recip()
    }

    pub fn step(&mut self) -> Result<StepInfo<S>> {
        let st = &self.state;
        let momentum = &st.x_cur - &st.x_prev;
        let (tau_first, max_backtracks) = match self.rule {
            StepRule::Adaptive(cfg) => ((st.tau / cfg.delta).min(cfg.l_min.recip()), cfg.max_backtracks),
            StepRule::Fixed(tau) => (tau, 0),
        };

        for i in 0..=max_backtracks {
            let tau = match self.rule {
                StepRule::Adaptive(cfg) => tau_first * cfg.rho.powi(i as i32),
                StepRule::Fixed(tau) => tau,
            };
            let t_next = t_update(st.t, st.tau, tau);
            let beta = (st.t - S::one()) / t_next;
            let mut y = st.x_cur.clone();
            y.scaled_add(beta, &momentum);

            let (accepted, x_new, f_new) = match self.rule {
                StepRule::Adaptive(cfg) => {
                    let (fy, gy) = self.prob.smooth_value_gradient(&y)?;
                    let x_new = prox_step(self.prob, &y, &gy, tau);
                    let f_new = self.prob.smooth_value(&x_new)?;
                    let ok = bregman_accepts(self.prob, f_new, fy, &gy, &x_new, &y, tau, cfg.slack)?;
                    (ok, x_new, f_new)
                }
                StepRule::Fixed(_) => {
                    let gy = self.prob.smooth_gradient(&y)?;
                    let x_new = prox_step(self.prob, &y, &gy, tau);
                    let f_new = self.prob.smooth_value(&x_new)?;
                    (true, x_new, f_new)
                }
            };
            if !accepted {
                continue;
            }

            let objective = f_new + self.prob.penalty_value(&x_new);
            let step_norm = dist(&x_new, &st.x_cur);
            let st = &mut self.state;
            st.x_prev = std::mem::replace(&mut st.x_cur, x_new);
            st.t = t_next;
            st.tau = tau;
            st.k += 1;
            st.cum_backtracks += i;
            return Ok(StepInfo {
                tau,
                backtracks: i,
                objective,
                step_norm,
            });
        }
        Err(Error::BacktrackDivergence {
            passes: max_backtracks,
        })
    }
}

/// Result of [`fista_adabt`].
#[derive(Debug, Clone)]
pub struct AdaBtOutput<S> {
    pub x_final: Array1<S>,
    /// `1 / tau_n`
    pub l_est: S,
    pub trace: Vec<TraceRecord<S>>,
}

/// Runs exactly `n` adaptive-backtracking FISTA steps from `x0`, starting
/// from the estimate `cfg.l0`.
pub fn fista_adabt<S, P>(prob: &P, x0: &Array1<S>, n: usize, cfg: &BacktrackConfig<S>) -> Result<AdaBtOutput<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    cfg.validate()?;
    let clock = RunClock::start();
    let mut solver = AdaBt::new(prob, x0.clone(), cfg.l0, StepRule::Adaptive(*cfg));
    let mut trace = Vec::with_capacity(n);
    for k in 0..n {
        let info = solver.step()?;
        trace.push(TraceRecord {
            algo: Algorithm::FistaAdaBt,
            restart: 0,
            global_iter: k + 1,
            backtracks: info.backtracks,
            tau: info.tau,
            l_est: info.tau.recip(),
            kappa_est: S::nan(),
            n_j: n,
            f_value: info.objective,
            g_norm: S::nan(),
            time_s: clock.seconds(),
            step_norm: info.step_norm,
        });
    }
    let l_est = solver.lipschitz();
    Ok(AdaBtOutput {
        x_final: solver.into_state().x_cur,
        l_est,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Penalty;
    use crate::problems::QuadraticProblem;
    use ndarray::array;

    #[test]
    fn t_update_values() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((t_update(1.0, 1.0, 1.0) - golden).abs() < 1e-15);
        assert!((t_update(1.0f64, 0.8, 1.0) - 1.524_695_076_6).abs() < 1e-10);
    }

    #[test]
    fn harmonic_examples() {
        assert!((harmonic_l_bar(&[3.0f64, 3.0, 3.0]).unwrap() - 3.0).abs() < 1e-15);
        assert!((harmonic_l_bar(&[1.0f64, 4.0]).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        assert_eq!(harmonic_l_bar::<f64>(&[]).unwrap_err(), Error::Empty("Lipschitz estimate list"));
    }

    #[test]
    fn minimizer_is_a_fixed_point() {
        let q = QuadraticProblem::new(array![1.0, 3.0], array![1.0, -3.0], Penalty::L1(0.5)).unwrap();
        let x_star: Array1<f64> = array![0.5, -2.5 / 3.0];
        let out = fista_adabt(&q, &x_star, 10, &BacktrackConfig::default()).unwrap();
        for (a, b) in out.x_final.iter().zip(x_star.iter()) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn exact_step_count_and_bounds() {
        let q = QuadraticProblem::new(array![1.0, 50.0], array![1.0, 1.0], Penalty::Zero).unwrap();
        let cfg = BacktrackConfig { l0: 1.0, ..Default::default() };
        let out = fista_adabt(&q, &array![3.0, -2.0], 25, &cfg).unwrap();
        assert_eq!(out.trace.len(), 25);
        assert!(out.l_est >= cfg.l_min);
        assert!(out.l_est <= 50.0 / cfg.rho * (1.0 + 1e-12));
        let iters: Vec<_> = out.trace.iter().map(|r| r.global_iter).collect();
        assert_eq!(iters, (1..=25).collect::<Vec<_>>());
    }
}
