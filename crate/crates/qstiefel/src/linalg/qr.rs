//! Q-factor of the thin QR decomposition.
//!
//! Modified Gram–Schmidt with one unconditional re-orthogonalization pass.
//! Column norms are real and positive, so the Q-factor produced here is the
//! one whose R-factor has strictly positive real diagonal entries; under
//! that normalization the decomposition of a full-right-column-rank matrix
//! is unique.

use crate::error::{Error, Result};
use crate::qmat::QuatMatrix;
use crate::quat::Quaternion;

/// Relative pivot floor for declaring numerical rank deficiency.
pub const RANK_REL_TOL: f64 = 1e-12;

/// The Q-factor of `A = QR` with `Q^H Q = I_p` and upper triangular `R`
/// having positive real diagonal.
///
/// Requires `p ≤ n` and full right column rank; a pivot norm at or below
/// `RANK_REL_TOL · ‖A‖_F` aborts with a rank error.
pub fn qf(a: &QuatMatrix) -> Result<QuatMatrix> {
    let (n, p) = a.shape();
    if p > n {
        return Err(Error::Shape(format!(
            "qf: {n}x{p} input has more columns than rows"
        )));
    }
    let rank_floor = RANK_REL_TOL * a.norm();
    let mut q = a.clone();
    for j in 0..p {
        // "Twice is enough": a second MGS pass restores orthogonality lost
        // to cancellation in the first.
        for _ in 0..2 {
            for i in 0..j {
                let r = col_dot(&q, i, j);
                col_sub_scaled(&mut q, j, i, r);
            }
        }
        let norm = col_norm(&q, j);
        if norm <= rank_floor {
            return Err(Error::RankDeficient {
                column: j,
                pivot: norm,
                tol: rank_floor,
            });
        }
        col_scale(&mut q, j, 1.0 / norm);
    }
    Ok(q)
}

/// `⟨col_i, col_j⟩ = Σ_r conj(Q_{ri}) Q_{rj}`.
pub(crate) fn col_dot(q: &QuatMatrix, i: usize, j: usize) -> Quaternion {
    let mut acc = Quaternion::ZERO;
    for r in 0..q.rows() {
        acc += q.get(r, i).conj() * q.get(r, j);
    }
    acc
}

/// `col_j -= col_i · r` (coefficient multiplies from the right).
pub(crate) fn col_sub_scaled(q: &mut QuatMatrix, j: usize, i: usize, r: Quaternion) {
    for row in 0..q.rows() {
        let v = q.get(row, j) - q.get(row, i) * r;
        q.set(row, j, v);
    }
}

pub(crate) fn col_norm(q: &QuatMatrix, j: usize) -> f64 {
    let mut acc = 0.0;
    for r in 0..q.rows() {
        acc += q.get(r, j).abs_sq();
    }
    acc.sqrt()
}

pub(crate) fn col_scale(q: &mut QuatMatrix, j: usize, s: f64) {
    for r in 0..q.rows() {
        let v = q.get(r, j) * s;
        q.set(r, j, v);
    }
}
