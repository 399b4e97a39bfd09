//! Complex-adjoint embedding of quaternionic matrices.
//!
//! Writing `A = A_c + B_c·j` with complex `A_c = A₀ + A₁i` and
//! `B_c = A₂ + A₃i`, the embedding
//!
//! ```text
//! χ(A) = [  A_c       B_c    ]
//!        [ −conj(B_c) conj(A_c) ]
//! ```
//!
//! is an ℝ-algebra homomorphism into 2m×2n complex matrices that commutes
//! with Hermitian conjugation. Eigenvalues of Hermitian quaternionic
//! matrices show up in χ with doubled multiplicity, which is what makes the
//! embedding a useful independent oracle for the quaternionic eigensolver.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::qmat::QuatMatrix;

/// Complex dense matrix used by the embedding and its spectral oracle.
pub type ComplexMatrix = DMatrix<Complex<f64>>;

/// The embedding χ described in the module docs.
pub fn complex_adjoint(a: &QuatMatrix) -> ComplexMatrix {
    let (m, n) = a.shape();
    let (a0, a1, a2, a3) = (
        a.component(0),
        a.component(1),
        a.component(2),
        a.component(3),
    );
    DMatrix::from_fn(2 * m, 2 * n, |r, c| {
        let (rr, cc) = (r % m, c % n);
        match (r < m, c < n) {
            (true, true) => Complex::new(a0[(rr, cc)], a1[(rr, cc)]),
            (true, false) => Complex::new(a2[(rr, cc)], a3[(rr, cc)]),
            (false, true) => Complex::new(-a2[(rr, cc)], a3[(rr, cc)]),
            (false, false) => Complex::new(a0[(rr, cc)], -a1[(rr, cc)]),
        }
    })
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
///
/// Backed by a dense Hermitian eigensolver; this path is deliberately
/// disjoint from the quaternionic Jacobi iteration so the two can check
/// each other.
pub fn hermitian_complex_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Collapses an ascending doubled spectrum into its `n` distinct-by-pairing
/// values, averaging each adjacent pair.
///
/// Fails when an adjacent pair differs by more than `pair_tol`, which means
/// the input was not a doubled spectrum at the stated accuracy.
pub fn collapse_paired_eigenvalues(vals: &[f64], pair_tol: f64) -> Result<Vec<f64>> {
    if vals.len() % 2 != 0 {
        return Err(Error::Shape(format!(
            "paired spectrum must have even length, got {}",
            vals.len()
        )));
    }
    let mut out = Vec::with_capacity(vals.len() / 2);
    for (idx, pair) in vals.chunks_exact(2).enumerate() {
        let gap = (pair[1] - pair[0]).abs();
        if gap > pair_tol {
            return Err(Error::PairingFailed {
                index: idx,
                gap,
                tol: pair_tol,
            });
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}
