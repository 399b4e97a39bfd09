//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by quaternion linear algebra, manifold geometry and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes do not conform.
    #[error("shape error: {0}")]
    Shape(String),

    /// A matrix required to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    /// A matrix required to be Hermitian positive definite has a non-positive eigenvalue.
    #[error("matrix is not positive definite: offending eigenvalue {min_eigenvalue:.6e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    /// The Jacobi iteration did not reach the off-diagonal target.
    #[error("eigensolver did not converge after {sweeps} sweeps: off-diagonal mass {off_diagonal:.3e}")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    /// Numerical rank deficiency detected during QR; the input must have
    /// full right column rank.
    #[error(
        "rank deficient input: column {column} pivot norm {pivot:.3e} at or below {tol:.3e}; \
         full right column rank is required"
    )]
    RankDeficient { column: usize, pivot: f64, tol: f64 },

    /// A point handed to a manifold operation does not satisfy X^H G X = I.
    #[error("point is not on the manifold: feasibility residual {residual:.3e} exceeds {tol:.3e}")]
    Infeasible { residual: f64, tol: f64 },

    /// A tangent vector was presented at a base point other than the one it
    /// was constructed at.
    #[error("tangent vector presented at the wrong base point")]
    WrongBasePoint,

    /// The line search was given a direction with non-negative slope.
    #[error("not a descent direction: directional derivative {slope:.3e} is not negative")]
    NotDescentDirection { slope: f64 },

    /// Backtracking exhausted its budget without satisfying the decrease condition.
    #[error("line search failed: no acceptable step after {backtracks} backtracks (last step {step:.3e})")]
    LineSearchFailed { backtracks: usize, step: f64 },

    /// The doubled spectrum of the complex embedding did not split into pairs.
    #[error(
        "eigenvalue pairing failed at index {index}: gap {gap:.3e} exceeds pairing tolerance {tol:.3e}"
    )]
    PairingFailed { index: usize, gap: f64, tol: f64 },

    /// A caller-supplied parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed text input (QMAT1, bundle metadata, trace files, tolerance overrides).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
