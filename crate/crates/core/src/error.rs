//! Error type shared by all modules of the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside a function's real domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Complex log-gamma evaluated at a non-positive integer.
    #[error("log_gamma pole at non-positive integer {0}")]
    GammaPole(Complex64),

    /// A parameter constraint (e.g. max(b) < min(beta), alpha_k - a_l > 0) is violated.
    #[error("constraint violation: {0}")]
    Constraint(String),

    /// Contour construction produced intersecting or otherwise invalid geometry.
    #[error("contour geometry error: {0}")]
    Geometry(String),

    /// A quadrature node fell within the guard distance of an integrand pole.
    #[error("quadrature node within {dist:.3e} of integrand pole at {pole}")]
    PoleProximity { pole: Complex64, dist: f64 },

    /// sigma*(z - w) landed within the guard distance of a nonzero integer.
    #[error("sine factor pole: sigma*(z-w) = {0} near nonzero integer")]
    SinePole(Complex64),

    /// Self-convergence check failed (order doubling moved the value too much).
    #[error("quadrature did not converge: order-doubling gap {gap:.3e} exceeds {tol:.3e}")]
    NonConvergence { gap: f64, tol: f64 },

    /// Dense factorization failed or produced non-finite values.
    #[error("linear algebra failure: {0}")]
    Factorization(String),

    /// Overflow, NaN or other floating-point breakdown.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
