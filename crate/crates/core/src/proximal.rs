//! First-order kernel shared by every solver: the forward-backward map, the
//! composite gradient mapping, the Bregman acceptance test and a single
//! forward-backward step with Armijo backtracking.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::problem::CompositeProblem;
use crate::scalar::{dist, dot, norm_sq, Scalar};

/// Step-size search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BacktrackConfig<S> {
    /// Shrink factor applied to a rejected step, in `(0, 1)`.
    pub rho: S,
    /// Per-iteration growth attempt `tau / delta`, in `(0, 1]`.
    pub delta: S,
    /// Lower bound on every Lipschitz estimate (caps the step at `1 / l_min`).
    pub l_min: S,
    /// Initial Lipschitz estimate.
    pub l0: S,
    /// Rejected passes allowed in a single step before giving up.
    pub max_backtracks: usize,
    /// Relative rounding level of the function values in the acceptance test.
    pub slack: S,
}

impl<S: Scalar> Default for BacktrackConfig<S> {
    fn default() -> Self {
        Self {
            rho: S::of(0.8),
            delta: S::of(0.95),
            l_min: S::of(1e-12),
            l0: S::one(),
            max_backtracks: 60,
            slack: default_slack(),
        }
    }
}

/// A few units of roundoff of the scalar type.
pub fn default_slack<S: Scalar>() -> S {
    S::of(8.0) * S::epsilon()
}

impl<S: Scalar> BacktrackConfig<S> {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if !(self.rho > S::zero() && self.rho < S::one()) {
            return bad(format!("rho must lie in (0, 1), got {}", self.rho));
        }
        if !(self.delta > S::zero() && self.delta <= S::one()) {
            return bad(format!("delta must lie in (0, 1], got {}", self.delta));
        }
        if !(self.l_min > S::zero()) {
            return bad(format!("l_min must be positive, got {}", self.l_min));
        }
        if !(self.l0 >= self.l_min) || !self.l0.is_finite() {
            return bad(format!(
                "l0 must be finite and at least l_min = {}, got {}",
                self.l_min, self.l0
            ));
        }
        if self.max_backtracks == 0 {
            return bad("max_backtracks must be positive".into());
        }
        if !(self.slack >= S::zero()) {
            return bad(format!("slack must be non-negative, got {}", self.slack));
        }
        Ok(())
    }
}

/// `T_tau(y) = prox_{tau h}(y - tau grad f(y))`
pub fn forward_backward_map<S, P>(prob: &P, y: &Array1<S>, tau: S) -> Result<Array1<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let grad = prob.smooth_gradient(y)?;
    Ok(prox_step(prob, y, &grad, tau))
}

pub(crate) fn prox_step<S, P>(prob: &P, y: &Array1<S>, grad: &Array1<S>, tau: S) -> Array1<S>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let mut z = y.clone();
    z.scaled_add(-tau, grad);
    prob.prox(&z, tau)
}

/// `g_tau(y) = (y - T_tau(y)) / tau`, which vanishes exactly at minimizers.
pub fn composite_gradient_mapping<S, P>(prob: &P, y: &Array1<S>, tau: S) -> Result<Array1<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let t = forward_backward_map(prob, y, tau)?;
    Ok((y - &t) / tau)
}

/// `D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>`
pub fn bregman_divergence<S, P>(prob: &P, x: &Array1<S>, y: &Array1<S>) -> Result<S>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let (fy, gy) = prob.smooth_value_gradient(y)?;
    let fx = prob.smooth_value(x)?;
    Ok(fx - fy - dot(&gy, &(x - y)))
}

/// `D_f(x_new, y) <= |x_new - y|^2 / (2 tau)` up to the default roundoff slack.
pub fn acceptance_test<S, P>(prob: &P, x_new: &Array1<S>, y: &Array1<S>, tau: S) -> Result<bool>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let (fy, gy) = prob.smooth_value_gradient(y)?;
    let fx = prob.smooth_value(x_new)?;
    bregman_accepts(prob, fx, fy, &gy, x_new, y, tau, default_slack())
}

/// Bregman test with roundoff handling.
///
/// When `|x_new - y|^2 / (2 tau)` is above the rounding noise of the
/// function-value difference, `D_f` is evaluated directly. Below it that
/// difference is pure cancellation, so the curvature form
/// `<grad f(x_new) - grad f(y), x_new - y> / 2` (exact for quadratics) is
/// tested instead.
#[allow(clippy::too_many_arguments)]
pub(crate) fn bregman_accepts<S, P>(
    prob: &P,
    f_new: S,
    f_y: S,
    grad_y: &Array1<S>,
    x_new: &Array1<S>,
    y: &Array1<S>,
    tau: S,
    slack: S,
) -> Result<bool>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let delta = x_new - y;
    let quad = norm_sq(&delta) / (S::of(2.0) * tau);
    let linear = dot(grad_y, &delta);
    let noise = slack * (f_new.abs() + f_y.abs() + linear.abs());
    if quad > noise {
        return Ok(f_new - f_y - linear <= quad + noise);
    }
    let grad_new = prob.smooth_gradient(x_new)?;
    let curvature = dot(&(&grad_new - grad_y), &delta) / S::of(2.0);
    Ok(curvature <= quad)
}

/// Output of [`fb_bt`].
#[derive(Debug, Clone)]
pub struct FbStep<S> {
    /// `r+ = T_{1/l_plus}(r)`
    pub point: Array1<S>,
    /// Accepted Lipschitz estimate, `1 / tau_accepted >= l0`.
    pub l_plus: S,
    /// `|g_{1/l_plus}(r)| = l_plus |r - r+|`
    pub g_norm: S,
    /// Rejected passes before acceptance.
    pub backtracks: usize,
    /// `f(r+)`
    pub smooth_value: S,
}

/// One forward-backward step from `r` with Armijo backtracking: try
/// `tau = rho^i / l0` for `i = 0, 1, ...` until the Bregman test accepts.
///
/// Uses `cfg.rho`, `cfg.max_backtracks` and `cfg.slack`; the starting
/// estimate is the explicit `l0`.
pub fn fb_bt<S, P>(prob: &P, r: &Array1<S>, l0: S, cfg: &BacktrackConfig<S>) -> Result<FbStep<S>>
where
    S: Scalar,
    P: CompositeProblem<S> + ?Sized,
{
    let (fr, gr) = prob.smooth_value_gradient(r)?;
    for i in 0..=cfg.max_backtracks {
        let tau = cfg.rho.powi(i as i32) / l0;
        let point = prox_step(prob, r, &gr, tau);
        let f_new = prob.smooth_value(&point)?;
        if bregman_accepts(prob, f_new, fr, &gr, &point, r, tau, cfg.slack)? {
            let l_plus = S::one() / tau;
            let g_norm = l_plus * dist(r, &point);
            return Ok(FbStep {
                point,
                l_plus,
                g_norm,
                backtracks: i,
                smooth_value: f_new,
            });
        }
    }
    Err(Error::BacktrackDivergence {
        passes: cfg.max_backtracks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Penalty;
    use crate::problems::QuadraticProblem;
    use ndarray::array;

    fn half_square() -> QuadraticProblem<f64> {
        QuadraticProblem::new(array![1.0], array![0.0], Penalty::Zero).unwrap()
    }

    // f(x) = x^2
    fn square() -> QuadraticProblem<f64> {
        QuadraticProblem::new(array![2.0], array![0.0], Penalty::Zero).unwrap()
    }

    /// f = 0, h = |.|_1
    struct PureL1(usize);

    impl CompositeProblem<f64> for PureL1 {
        fn dim(&self) -> usize {
            self.0
        }
        fn smooth_value(&self, _: &Array1<f64>) -> Result<f64> {
            Ok(0.0)
        }
        fn smooth_gradient(&self, x: &Array1<f64>) -> Result<Array1<f64>> {
            Ok(Array1::zeros(x.len()))
        }
        fn penalty_value(&self, x: &Array1<f64>) -> f64 {
            Penalty::L1(1.0).value(x)
        }
        fn prox(&self, z: &Array1<f64>, tau: f64) -> Array1<f64> {
            Penalty::L1(1.0).prox(z, tau)
        }
    }

    fn pure_l1() -> PureL1 {
        PureL1(2)
    }

    #[test]
    fn forward_backward_examples() {
        assert_eq!(forward_backward_map(&half_square(), &array![2.0], 1.0).unwrap(), array![0.0]);
        let t = forward_backward_map(&pure_l1(), &array![3.0, -0.5], 1.0).unwrap();
        assert_eq!(t, array![2.0, 0.0]);
    }

    #[test]
    fn gradient_mapping_examples() {
        assert_eq!(
            composite_gradient_mapping(&half_square(), &array![2.0], 1.0).unwrap(),
            array![2.0]
        );
        let g = composite_gradient_mapping(&pure_l1(), &array![0.5, 0.0], 1.0).unwrap();
        assert_eq!(g, array![0.5, 0.0]);
        let q = half_square();
        assert_eq!(composite_gradient_mapping(&q, &array![0.0], 0.3).unwrap(), array![0.0]);
    }

    #[test]
    fn bregman_examples() {
        let q = half_square();
        assert_eq!(bregman_divergence(&q, &array![1.5], &array![1.5]).unwrap(), 0.0);
        let q2 = QuadraticProblem::new(array![1.0, 1.0], array![0.0, 0.0], Penalty::Zero).unwrap();
        assert_eq!(bregman_divergence(&q2, &array![1.0, 0.0], &array![0.0, 0.0]).unwrap(), 0.5);
        // x^2 between -1 and 1: 1 - 1 - 2 * (-2) = 4
        assert_eq!(bregman_divergence(&square(), &array![-1.0], &array![1.0]).unwrap(), 4.0);
    }

    #[test]
    fn acceptance_examples() {
        let s = square();
        assert!(acceptance_test(&s, &array![1.0], &array![1.0], 1.0).unwrap());
        assert!(!acceptance_test(&s, &array![-1.0], &array![1.0], 1.0).unwrap());
    }

    #[test]
    fn acceptance_threshold_is_one_over_l_for_quadratics() {
        let l = 7.0;
        let q = QuadraticProblem::new(array![l], array![0.0], Penalty::Zero).unwrap();
        let y = array![1.0];
        for (tau, expect) in [(1.0 / l - 1e-12, true), (1.0 / l + 1e-12, false)] {
            let x_new = array![1.0 + 1e6];
            assert_eq!(acceptance_test(&q, &x_new, &y, tau).unwrap(), expect, "tau = {tau}");
        }
    }

    #[test]
    fn tiny_steps_still_see_the_curvature() {
        let q = QuadraticProblem::new(array![3.0], array![1.0], Penalty::Zero).unwrap();
        let y = array![1.0 / 3.0];
        let x_new = array![1.0 / 3.0 + 1e-12];
        assert!(acceptance_test(&q, &x_new, &y, 0.3).unwrap());
        assert!(!acceptance_test(&q, &x_new, &y, 0.4).unwrap());
    }

    #[test]
    fn fb_bt_hand_trace() {
        let cfg = BacktrackConfig {
            rho: 0.5,
            ..Default::default()
        };
        let step = fb_bt(&square(), &array![1.0], 1.0, &cfg).unwrap();
        assert_eq!(step.point, array![0.0]);
        assert_eq!(step.l_plus, 2.0);
        assert_eq!(step.backtracks, 1);
        assert_eq!(step.g_norm, 2.0);
    }

    #[test]
    fn fb_bt_at_minimizer() {
        let step = fb_bt(&square(), &array![0.0], 3.0, &BacktrackConfig::default()).unwrap();
        assert_eq!(step.point, array![0.0]);
        assert_eq!(step.l_plus, 3.0);
        assert_eq!(step.backtracks, 0);
        assert_eq!(step.g_norm, 0.0);
    }

    #[test]
    fn fb_bt_divergence_error() {
        let cfg = BacktrackConfig {
            rho: 0.5,
            max_backtracks: 3,
            ..Default::default()
        };
        // L = 1e6 from l0 = 1 needs ~20 halvings
        let q = QuadraticProblem::new(array![1e6], array![0.0], Penalty::Zero).unwrap();
        assert_eq!(
            fb_bt(&q, &array![1.0], 1.0, &cfg).unwrap_err(),
            Error::BacktrackDivergence { passes: 3 }
        );
    }

    #[test]
    fn config_validation() {
        let ok = BacktrackConfig::<f64>::default();
        assert!(ok.validate().is_ok());
        for bad in [
            BacktrackConfig { rho: 1.0, ..ok },
            BacktrackConfig { delta: 0.0, ..ok },
            BacktrackConfig { delta: 1.5, ..ok },
            BacktrackConfig { l_min: 0.0, ..ok },
            BacktrackConfig { l0: 1e-13, ..ok },
            BacktrackConfig { max_backtracks: 0, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
