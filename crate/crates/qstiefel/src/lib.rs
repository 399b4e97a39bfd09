//! Riemannian optimization on the generalized quaternionic Stiefel manifold.
//!
//! The manifold is the set of G-orthonormal quaternionic frames
//! `{X ∈ ℍ^{n×p} : X^H G X = I_p}` for a Hermitian positive definite `G`.
//! The crate provides the quaternion matrix substrate, the dense
//! factorizations the geometry needs (Jacobi eigendecomposition, principal
//! square root, QR Q-factor, Sylvester solver), the manifold primitives
//! (projection, metric, retraction, transport), first-order solvers
//! (steepest descent and conjugate gradient with Armijo backtracking), and
//! the right generalized eigenvalue application with its own brute-force
//! cross-check.

pub mod eig;
pub mod error;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod quat;
pub mod qmat;
pub mod solver;
pub mod tol;

pub use error::{Error, Result};
pub use qmat::QuatMatrix;
pub use quat::Quaternion;
pub use tol::Tolerance;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::qmat::QuatMatrix;
    use crate::quat::Quaternion;
    use rand::rngs::StdRng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub fn random_quat(rng: &mut StdRng) -> Quaternion {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }

    pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> QuatMatrix {
        QuatMatrix::standard_normal(rows, cols, rng)
    }

    pub fn random_hermitian(rng: &mut StdRng, n: usize) -> QuatMatrix {
        random_matrix(rng, n, n).her_part().unwrap()
    }

    /// Random Hermitian positive definite matrix `V^H V + I`.
    pub fn random_pd(rng: &mut StdRng, n: usize) -> QuatMatrix {
        let v = random_matrix(rng, n, n);
        &v.adjoint().matmul(&v).unwrap() + &QuatMatrix::identity(n)
    }

    pub fn assert_matrix_close(a: &QuatMatrix, b: &QuatMatrix, rtol: f64) {
        assert_eq!(a.shape(), b.shape(), "shape mismatch in comparison");
        let scale = a.norm().max(b.norm()).max(1.0);
        let diff = (a - b).norm();
        assert!(
            diff <= rtol * scale,
            "matrices differ by {diff:e} at scale {scale:e} (rtol {rtol:e})"
        );
    }
}
