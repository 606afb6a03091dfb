use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid conditioning: need 0 < mu <= L, got mu = {mu}, L = {lipschitz}")]
    InvalidConditioning { mu: f64, lipschitz: f64 },

    #[error("shape mismatch in {context}: expected {expected}, got {got}")]
    Shape {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),

    #[error("point outside the domain of f: component {index} has value {value}")]
    Domain { index: usize, value: f64 },

    #[error("backtracking did not terminate after {passes} step reductions")]
    BacktrackDivergence { passes: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} must not be empty")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape {
            context,
            expected,
            got,
        })
    }
}
