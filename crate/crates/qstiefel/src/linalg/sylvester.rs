//! Sylvester equations `KS + SK = L` with Hermitian data.
//!
//! For Hermitian positive definite `K` and Hermitian `L` the solution is
//! unique and Hermitian: with `K = U Λ U^H`, the transformed unknown
//! `T = U^H S U` has entries `t_rs = (U^H L U)_rs / (λ_r + λ_s)`, and the
//! denominators are positive because `K` is positive definite.

use crate::error::{Error, Result};
use crate::linalg::eigh::eigh;
use crate::linalg::sqrt::PD_REL_TOL;
use crate::qmat::QuatMatrix;
use crate::tol::Tolerance;

/// Solves `KS + SK = L` for Hermitian positive definite `K` and Hermitian
/// `L`, returning the unique (Hermitian) solution.
pub fn solve_sylvester(k: &QuatMatrix, l: &QuatMatrix) -> Result<QuatMatrix> {
    if k.shape() != l.shape() {
        return Err(Error::Shape(format!(
            "solve_sylvester: K is {:?} but L is {:?}",
            k.shape(),
            l.shape()
        )));
    }
    let tol = Tolerance::default();
    let l_res = (l - &l.her_part()?).norm();
    if l_res > tol.bound(l.norm()) {
        return Err(Error::NotHermitian {
            residual: l_res,
            tol: tol.bound(l.norm()),
        });
    }

    let eig = eigh(k)?;
    let min = eig.min_eigenvalue();
    if k.rows() > 0 && min <= PD_REL_TOL * eig.max_abs_eigenvalue() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }

    let uh = eig.u.adjoint();
    let mut t = uh.matmul(l)?.matmul(&eig.u)?;
    let p = k.rows();
    for r in 0..p {
        for c in 0..p {
            let denom = eig.lambda[r] + eig.lambda[c];
            t.set(r, c, t.get(r, c) * (1.0 / denom));
        }
    }
    // S = U T U^H; the Hermitian part cleans the asymmetric round-off.
    eig.u.matmul(&t)?.matmul(&uh)?.her_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use crate::testutil::{assert_matrix_close, random_hermitian, random_pd};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn residual(k: &QuatMatrix, s: &QuatMatrix, l: &QuatMatrix) -> f64 {
        let ks = k.matmul(s).unwrap();
        let sk = s.matmul(k).unwrap();
        (&(&ks + &sk) - l).norm()
    }

    #[test]
    fn identity_k_halves_the_rhs() {
        let mut rng = StdRng::seed_from_u64(61);
        let l = random_hermitian(&mut rng, 4);
        let s = solve_sylvester(&QuatMatrix::identity(4), &l).unwrap();
        assert_matrix_close(&s, &(&l * 0.5), 1e-12);
    }

    #[test]
    fn closed_form_two_by_two() {
        let k = QuatMatrix::diagonal_real(&[1.0, 2.0]);
        let l = QuatMatrix::from_fn(2, 2, |_, _| Quaternion::ONE);
        let s = solve_sylvester(&k, &l).unwrap();
        // t_rs = 1 / (λ_r + λ_s) with λ = (1, 2).
        let expected = QuatMatrix::from_fn(2, 2, |r, c| {
            Quaternion::from_real(1.0 / ((r + c + 2) as f64))
        });
        assert!((&s - &expected).norm() <= 1e-14);
    }

    #[test]
    fn random_instances_solve_and_stay_hermitian() {
        let mut rng = StdRng::seed_from_u64(62);
        for _ in 0..10 {
            let k = random_pd(&mut rng, 6);
            let l = random_hermitian(&mut rng, 6);
            let s = solve_sylvester(&k, &l).unwrap();
            assert!(residual(&k, &s, &l) <= 1e-10 * l.norm());
            assert!(s.skew_part().unwrap().norm() <= 1e-13 * s.norm());
        }
    }

    #[test]
    fn agrees_with_permuted_eigendecomposition_route() {
        // Independent solve path: apply the same closed form to a permuted
        // eigendecomposition of K.
        let mut rng = StdRng::seed_from_u64(63);
        let k = random_pd(&mut rng, 5);
        let l = random_hermitian(&mut rng, 5);
        let s = solve_sylvester(&k, &l).unwrap();

        let eig = eigh(&k).unwrap();
        let n = 5;
        let perm: Vec<usize> = (0..n).rev().collect();
        let mut u = QuatMatrix::zeros(n, n);
        let mut lambda = vec![0.0; n];
        for (dst, &src) in perm.iter().enumerate() {
            lambda[dst] = eig.lambda[src];
            for r in 0..n {
                u.set(r, dst, eig.u.get(r, src));
            }
        }
        let uh = u.adjoint();
        let mut t = uh.matmul(&l).unwrap().matmul(&u).unwrap();
        for r in 0..n {
            for c in 0..n {
                let v = t.get(r, c) * (1.0 / (lambda[r] + lambda[c]));
                t.set(r, c, v);
            }
        }
        let s2 = u.matmul(&t).unwrap().matmul(&uh).unwrap();
        assert!((&s - &s2).norm() <= 1e-10 * s.norm().max(1.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = StdRng::seed_from_u64(64);
        let l = random_hermitian(&mut rng, 3);
        let neg = &QuatMatrix::identity(3) * -1.0;
        assert!(matches!(
            solve_sylvester(&neg, &l),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let non_her = crate::testutil::random_matrix(&mut rng, 3, 3);
        assert!(matches!(
            solve_sylvester(&QuatMatrix::identity(3), &non_her),
            Err(Error::NotHermitian { .. })
        ));
        assert!(solve_sylvester(&QuatMatrix::identity(2), &l).is_err());
    }
}
