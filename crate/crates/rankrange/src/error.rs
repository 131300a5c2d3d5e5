//! Error type shared by all library operations.

use thiserror::Error;

/// Failure modes surfaced by range computations and constructions.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The ambient dimension is too small for the requested construction.
    #[error("dimension too small: {0}")]
    Dimension(String),

    /// A matrix expected to be Hermitian deviates beyond tolerance.
    #[error("not Hermitian: max deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Columns expected to be orthonormal deviate beyond tolerance.
    #[error("not an isometry: ||U*U - I||_F = {residual:.3e} exceeds {tol:.3e}")]
    NotIsometry { residual: f64, tol: f64 },

    /// An iterative method failed to reach its tolerance.
    #[error("no convergence: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    /// A numerical rank decision left the construction without enough room.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    /// An input value lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested instance exceeds a hard enumeration guard.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// A finite-entry check failed.
    #[error("non-finite entry: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
