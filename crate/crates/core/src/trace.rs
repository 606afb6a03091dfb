use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::Error;

/// Solver variants that produce traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Classical FISTA with a fixed step.
    Fista,
    /// Restarted FISTA with a fixed step.
    FistaRestart,
    /// FISTA with adaptive (non-monotone) backtracking.
    FistaAdaBt,
    FreeFista,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Fista,
        Algorithm::FistaRestart,
        Algorithm::FistaAdaBt,
        Algorithm::FreeFista,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fista => "fista",
            Algorithm::FistaRestart => "fista-restart",
            Algorithm::FistaAdaBt => "fista-adabt",
            Algorithm::FreeFista => "free-fista",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown algorithm '{s}', expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

/// One accepted FISTA step.
///
/// `kappa_est` and `g_norm` are NaN except on the last step of a restart
/// block, where they hold the conditioning estimate and the gradient-mapping
/// norm computed after that block.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<S> {
    pub algo: Algorithm,
    pub restart: usize,
    /// Cumulative accepted FISTA steps, starting at 1.
    pub global_iter: usize,
    /// Rejected step-size trials inside this step.
    pub backtracks: usize,
    pub tau: S,
    pub l_est: S,
    pub kappa_est: S,
    /// Length of the block this step belongs to.
    pub n_j: usize,
    /// Objective at the new iterate.
    pub f_value: S,
    pub g_norm: S,
    pub time_s: f64,
    /// `|x_{k+1} - x_k|`; kept for energy checks, not part of the CSV schema.
    pub step_norm: S,
}

/// Monotonic wall clock started at the beginning of a run.
#[derive(Debug, Clone, Copy)]
pub struct RunClock(Instant);

impl RunClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }

    pub fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

impl Default for RunClock {
    fn default() -> Self {
        Self::start()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        let err = "ista".parse::<Algorithm>().unwrap_err().to_string();
        assert!(err.contains("free-fista"), "{err}");
    }
}
