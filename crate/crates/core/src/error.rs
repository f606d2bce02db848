use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Gompertz parameters: {0}")]
    InvalidParams(String),

    #[error("{name} = {value} is outside the domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge after {evaluations} evaluations (estimate {estimate:e}, requested {tol:e}): {reason}")]
    QuadratureNotConverged {
        evaluations: usize,
        estimate: f64,
        tol: f64,
        reason: &'static str,
    },

    #[error(
        "finite-difference oracle error estimate {estimate:e} exceeds relative bound {bound:e}"
    )]
    OracleInaccurate { estimate: f64, bound: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
