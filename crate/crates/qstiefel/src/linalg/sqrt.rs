//! Principal square root of Hermitian positive definite matrices.

use crate::error::{Error, Result};
use crate::linalg::eigh::eigh;
use crate::qmat::QuatMatrix;

/// Relative floor under the largest |eigenvalue| below which a matrix is
/// treated as not positive definite.
pub const PD_REL_TOL: f64 = 1e-10;

/// Both the unique Hermitian positive definite square root of `g` and its
/// inverse, computed from one eigendecomposition as `U Λ^{±1/2} U^H`.
///
/// Fails when `g` is not Hermitian or its smallest eigenvalue does not clear
/// the positive definiteness floor.
pub fn sqrt_pd(g: &QuatMatrix) -> Result<(QuatMatrix, QuatMatrix)> {
    let eig = eigh(g)?;
    let pd_floor = PD_REL_TOL * eig.max_abs_eigenvalue();
    let min = eig.min_eigenvalue();
    if g.rows() > 0 && min <= pd_floor {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let sqrt_vals: Vec<f64> = eig.lambda.iter().map(|l| l.sqrt()).collect();
    let inv_sqrt_vals: Vec<f64> = sqrt_vals.iter().map(|s| 1.0 / s).collect();
    let uh = eig.u.adjoint();
    let sqrt = eig.u.scale_columns(&sqrt_vals)?.matmul(&uh)?.her_part()?;
    let inv_sqrt = eig
        .u
        .scale_columns(&inv_sqrt_vals)?
        .matmul(&uh)?
        .her_part()?;
    Ok((sqrt, inv_sqrt))
}
