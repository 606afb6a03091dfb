//! Closed-form worst-case guarantees, used to check solver runs.
//!
//! All functions work in `f64`; `l` is the Lipschitz constant of the smooth
//! part, `mu` the quadratic growth constant and `gap0 = F(r_0) - F*`.

/// `a = C^2 rho / 4 - 1`, the per-period contraction of the restart scheme.
pub fn restart_contraction(rho: f64, c: f64) -> f64 {
    c * c * rho / 4.0 - 1.0
}

fn log_term(l: f64, rho: f64, c: f64, gap0: f64, epsilon: f64) -> f64 {
    let a = 16.0 / (c * c * rho - 16.0);
    (1.0 + a * 2.0 * l * gap0 / (rho * epsilon * epsilon)).ln()
}

/// Worst-case number of FISTA steps before the restart scheme reaches
/// `|g| <= epsilon`.
pub fn restart_complexity_bound(l: f64, mu: f64, rho: f64, c: f64, gap0: f64, epsilon: f64) -> f64 {
    let log_a = restart_contraction(rho, c).ln();
    4.0 * c / log_a * (l / mu).sqrt() * (2.0 * log_a + log_term(l, rho, c, gap0, epsilon))
}

/// Upper bound on the number of restarts between two doublings.
pub fn doubling_period(l: f64, rho: f64, c: f64, gap0: f64, epsilon: f64) -> usize {
    let log_a = restart_contraction(rho, c).ln();
    1 + (log_term(l, rho, c, gap0, epsilon) / log_a).ceil().max(0.0) as usize
}

/// Largest block length the doubling rule can reach: `2 C sqrt(L / mu)`.
pub fn block_length_bound(l: f64, mu: f64, c: f64) -> f64 {
    2.0 * c * (l / mu).sqrt()
}

/// Bound on `F(r_j^+) - F*` after `total_steps` FISTA steps, or infinity
/// while the bound is vacuous.
pub fn restart_value_envelope(
    l: f64,
    mu: f64,
    rho: f64,
    c: f64,
    l_min: f64,
    gap0: f64,
    total_steps: usize,
) -> f64 {
    let log_a = restart_contraction(rho, c).ln();
    let exponent = -2.0 * log_a + log_a / (4.0 * c) * (mu / l).sqrt() * total_steps as f64;
    if exponent <= 0.0 {
        return f64::INFINITY;
    }
    let lead = 4.0 * l * (1.0 + l / l_min).powi(2) / (rho * mu);
    lead * 16.0 / (c * c * rho - 16.0) * gap0 / exponent.exp_m1()
}

/// `F(T_tau(x)) - F* <= 2 (1 + L tau)^2 |g_tau(x)|^2 / mu`
pub fn gradient_mapping_value_bound(l: f64, mu: f64, tau: f64, g_norm: f64) -> f64 {
    2.0 * (1.0 + l * tau).powi(2) * g_norm * g_norm / mu
}

/// Value guarantee at an exit with `|g| <= epsilon`, using `tau <= 1 / l_min`.
pub fn exit_value_bound(l: f64, mu: f64, l_min: f64, epsilon: f64) -> f64 {
    2.0 * (1.0 + l / l_min).powi(2) * epsilon * epsilon / mu
}

/// Adaptive FISTA after `m >= 1` steps: `F(x_m) - F* <= 2 L_bar_m |x_0 - x*|^2 / m^2`,
/// with `L_bar_m` the harmonic average of the first `m` estimates.
pub fn fista_rate_bound(l_bar: f64, dist0_sq: f64, steps: usize) -> f64 {
    let m = steps as f64;
    2.0 * l_bar * dist0_sq / (m * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_positive_for_default_c() {
        let rho: f64 = 0.8;
        let c = 6.38 / rho.sqrt();
        assert!((restart_contraction(rho, c) - (6.38f64 * 6.38 / 4.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn envelope_vacuous_until_warmup() {
        let c = 6.38 / 0.8f64.sqrt();
        let cutoff = 8.0 * c * 100.0;
        assert!(restart_value_envelope(1e4, 1.0, 0.8, c, 1e-12, 1.0, cutoff as usize - 1).is_infinite());
        assert!(restart_value_envelope(1e4, 1.0, 0.8, c, 1e-12, 1.0, cutoff as usize + 10).is_finite());
    }
}
