//! Dense quaternionic factorizations.

pub mod adjoint;
pub mod eigh;
pub mod qr;
pub mod sqrt;
pub mod sylvester;

pub use adjoint::{
    collapse_paired_eigenvalues, complex_adjoint, hermitian_complex_eigenvalues, ComplexMatrix,
};
pub use eigh::{eigh, eigh_with, EigDecomposition};
pub use qr::qf;
pub use sqrt::sqrt_pd;
pub use sylvester::solve_sylvester;

use crate::error::Result;
use crate::qmat::QuatMatrix;
use crate::tol::Tolerance;

/// Outcome of a positive definiteness probe.
#[derive(Debug, Clone)]
pub struct PdReport {
    /// Hermitian residual `‖G − her(G)‖_F`.
    pub hermitian_residual: f64,
    /// True when the Hermitian residual is within tolerance.
    pub hermitian: bool,
    /// Smallest eigenvalue of the Hermitian part, when the eigensolve ran.
    pub min_eigenvalue: Option<f64>,
    /// Largest |eigenvalue| of the Hermitian part, when the eigensolve ran.
    pub max_abs_eigenvalue: Option<f64>,
    /// Combined verdict.
    pub positive_definite: bool,
}

/// Probes whether a square matrix is Hermitian positive definite.
///
/// Report-style: numerical defects (non-Hermitian input, eigensolver
/// breakdown) yield a negative verdict instead of an error. Only a
/// non-square input is rejected.
pub fn is_positive_definite(g: &QuatMatrix) -> Result<PdReport> {
    if !g.is_square() {
        return Err(crate::error::Error::Shape(format!(
            "is_positive_definite: matrix is {}x{}, expected square",
            g.rows(),
            g.cols()
        )));
    }
    let tol = Tolerance::default();
    let her = g.her_part()?;
    let hermitian_residual = (g - &her).norm();
    let hermitian = hermitian_residual <= tol.bound(g.norm());
    match eigh(&her) {
        Ok(eig) => {
            let min = eig.min_eigenvalue();
            let max_abs = eig.max_abs_eigenvalue();
            let positive = g.rows() == 0 || min > sqrt::PD_REL_TOL * max_abs;
            Ok(PdReport {
                hermitian_residual,
                hermitian,
                min_eigenvalue: Some(min),
                max_abs_eigenvalue: Some(max_abs),
                positive_definite: hermitian && positive,
            })
        }
        Err(_) => Ok(PdReport {
            hermitian_residual,
            hermitian,
            min_eigenvalue: None,
            max_abs_eigenvalue: None,
            positive_definite: false,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_pd;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn identity_is_pd_negated_is_not() {
        let report = is_positive_definite(&QuatMatrix::identity(4)).unwrap();
        assert!(report.positive_definite);
        assert_eq!(report.min_eigenvalue, Some(1.0));

        let neg = &QuatMatrix::identity(4) * -1.0;
        let report = is_positive_definite(&neg).unwrap();
        assert!(!report.positive_definite);
    }

    #[test]
    fn gram_plus_identity_is_pd() {
        let mut rng = StdRng::seed_from_u64(71);
        let g = random_pd(&mut rng, 8);
        let report = is_positive_definite(&g).unwrap();
        assert!(report.positive_definite);
        // V^H V is positive semidefinite, so the shift keeps min ≥ 1.
        assert!(report.min_eigenvalue.unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(is_positive_definite(&QuatMatrix::zeros(2, 3)).is_err());
    }
}
