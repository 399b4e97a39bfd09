//! Eigendecomposition of Hermitian quaternionic matrices.
//!
//! Cyclic Jacobi iteration in pure quaternion arithmetic. Each sweep visits
//! every off-diagonal position (p, q) and annihilates it with a 2×2 unitary
//! built from a quaternionic phase times a real Givens rotation: the phase
//! rotates the pivot entry onto the real axis, after which the classical
//! real Jacobi angle applies.
//!
//! The complex-adjoint embedding in [`super::adjoint`] is kept as an
//! independent spectral oracle; this routine never calls it.

use crate::error::{Error, Result};
use crate::qmat::QuatMatrix;
use crate::quat::Quaternion;
use crate::tol::Tolerance;

/// Result of a Hermitian eigendecomposition `A = U · diag(λ) · U^H`.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    /// Unitary matrix of eigenvectors, one per column, ordered like `lambda`.
    pub u: QuatMatrix,
    /// Real eigenvalues, ascending.
    pub lambda: Vec<f64>,
}

impl EigDecomposition {
    /// Rebuilds `U · diag(λ) · U^H`.
    pub fn reconstruct(&self) -> QuatMatrix {
        let scaled = self
            .u
            .scale_columns(&self.lambda)
            .expect("lambda length matches u columns");
        scaled
            .matmul(&self.u.adjoint())
            .expect("square shapes conform")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.lambda.first().copied().unwrap_or(0.0)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.lambda.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

const MAX_SWEEPS: usize = 60;
const OFFDIAG_REL_TOL: f64 = 1e-13;

/// Eigendecomposition with the default Hermitian-check tolerance.
pub fn eigh(a: &QuatMatrix) -> Result<EigDecomposition> {
    eigh_with(a, Tolerance::default())
}

/// Eigendecomposition of a Hermitian matrix, with an explicit tolerance for
/// the Hermitian precondition check.
pub fn eigh_with(a: &QuatMatrix, tol: Tolerance) -> Result<EigDecomposition> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "eigh: matrix is {}x{}, expected square",
            a.rows(),
            a.cols()
        )));
    }
    let norm_a = a.norm();
    let her = a.her_part()?;
    let residual = (a - &her).norm();
    if residual > tol.bound(norm_a) {
        return Err(Error::NotHermitian {
            residual,
            tol: tol.bound(norm_a),
        });
    }

    let n = a.rows();
    // Work on the Hermitized copy so asymmetric round-off in the input
    // cannot leak into the iteration.
    let mut w = her;
    let mut u = QuatMatrix::identity(n);

    if n <= 1 || norm_a == 0.0 {
        let lambda = (0..n).map(|r| w.get(r, r).re()).collect();
        return Ok(EigDecomposition { u, lambda });
    }

    let target = OFFDIAG_REL_TOL * norm_a;
    // Rotations on entries below this floor cannot keep the off-diagonal
    // mass above the target, so they are skipped.
    let floor = 1e-15 * norm_a / n as f64;

    let mut converged = false;
    let mut off = w.offdiag_norm()?;
    for sweep in 0..MAX_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        // Threshold strategy: early sweeps skip entries that are small
        // relative to the current off-diagonal mass.
        let thr = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate_pair(&mut w, &mut u, p, q, thr.max(floor));
            }
        }
        off = w.offdiag_norm()?;
    }
    if !converged && off > target {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_diagonal: off,
        });
    }

    // Sort ascending and permute the eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|r| w.get(r, r).re()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let lambda: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut u_sorted = QuatMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            u_sorted.set(r, dst, u.get(r, src));
        }
    }

    Ok(EigDecomposition {
        u: u_sorted,
        lambda,
    })
}

/// Annihilates entry (p, q) of `w` with a unitary similarity and accumulates
/// the rotation into `u`. Entries with |w_pq| at or below `skip` are zeroed
/// without a rotation when they are exactly zero, or left for a later sweep.
fn rotate_pair(w: &mut QuatMatrix, u: &mut QuatMatrix, p: usize, q: usize, skip: f64) {
    let apq = w.get(p, q);
    let b = apq.abs();
    if b <= skip {
        return;
    }
    // Unit phase that maps the pivot onto the positive real axis:
    // w_pq · conj(phase) = |w_pq|.
    let phase = apq * (1.0 / b);
    let app = w.get(p, p).re();
    let aqq = w.get(q, q).re();

    // Classical real Jacobi angle for [[app, b], [b, aqq]].
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = w.rows();
    let cu = phase.conj();

    // Column update: W <- W · J with J columns
    //   J[:,p] = e_p·c − e_q·conj(phase)·s,  J[:,q] = e_p·s + e_q·conj(phase)·c.
    for r in 0..n {
        let wp = w.get(r, p);
        let wq_cu = w.get(r, q) * cu;
        w.set(r, p, wp * c - wq_cu * s);
        w.set(r, q, wp * s + wq_cu * c);
    }
    // Row update: W <- J^H · W.
    for col in 0..n {
        let wp = w.get(p, col);
        let ph_wq = phase * w.get(q, col);
        w.set(p, col, wp * c - ph_wq * s);
        w.set(q, col, wp * s + ph_wq * c);
    }
    // The 2x2 pivot block is known in closed form; writing it directly keeps
    // the diagonal exactly real and the pivot exactly zero.
    w.set(p, p, Quaternion::from_real(app - t * b));
    w.set(q, q, Quaternion::from_real(aqq + t * b));
    w.set(p, q, Quaternion::ZERO);
    w.set(q, p, Quaternion::ZERO);

    // Accumulate U <- U · J.
    for r in 0..n {
        let up = u.get(r, p);
        let uq_cu = u.get(r, q) * cu;
        u.set(r, p, up * c - uq_cu * s);
        u.set(r, q, up * s + uq_cu * c);
    }
}
