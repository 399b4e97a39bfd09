//! The right generalized eigenvalue problem as manifold optimization.
//!
//! For Hermitian `A` and Hermitian positive definite `G`, minimizing
//! `re(tr(X^H A X N))` over the G-orthonormal frames with strictly
//! decreasing positive weights `N = diag(μ₁ > … > μ_p > 0)` yields, column
//! by column, generalized eigenvectors `A x = G x λ` for the p smallest
//! eigenvalues, ordered ascending. Eigenvalues of such pencils are real.
//!
//! `oracle_eigs` cross-checks: it reduces the pencil to the single
//! Hermitian matrix `√G⁻¹ A √G⁻¹` (which has the same spectrum), embeds it
//! as a complex matrix, and collapses the doubled spectrum produced by a
//! trusted dense eigensolver. Apart from `√G`, the oracle shares nothing
//! with the manifold or solver code paths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    collapse_paired_eigenvalues, complex_adjoint, hermitian_complex_eigenvalues, sqrt_pd,
};
use crate::manifold::ManifoldContext;
use crate::qmat::QuatMatrix;
use crate::solver::Objective;
use crate::tol::Tolerance;

/// Relative pairing tolerance for collapsing the doubled oracle spectrum.
pub const PAIR_REL_TOL: f64 = 1e-8;

/// Problem data: the pencil `(A, G)`, the weight diagonal, and the seed the
/// instance was generated from (kept for reproducibility bookkeeping).
#[derive(Debug, Clone)]
pub struct EigProblem {
    n: usize,
    p: usize,
    a: QuatMatrix,
    g: QuatMatrix,
    weights: Vec<f64>,
    seed: u64,
}

/// The three convergence diagnostics for an approximate solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTriple {
    /// `‖X^H G X − I_p‖_F`
    pub feasibility: f64,
    /// `‖Λ̃ − diag(Λ̃)‖_F` with `Λ̃ = X^H A X`
    pub offdiag: f64,
    /// `‖A X − G X Λ̃‖_F`
    pub eigres: f64,
}

/// Per-column eigenpair diagnostics extracted from a converged iterate.
#[derive(Debug, Clone)]
pub struct EigenpairExtract {
    /// Real parts of the diagonal of `X^H A X`, in column order.
    pub lambdas: Vec<f64>,
    /// `‖A x_r − G x_r λ_r‖₂` per column.
    pub eigres_per_column: Vec<f64>,
    /// Magnitudes of the imaginary parts of the diagonal of `X^H A X`;
    /// should be round-off at a converged point.
    pub diag_imag: Vec<f64>,
}

impl EigProblem {
    /// Validates and assembles a problem instance.
    pub fn new(
        a: QuatMatrix,
        g: QuatMatrix,
        weights: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() || !g.is_square() || g.rows() != n {
            return Err(Error::Shape(format!(
                "A is {}x{}, G is {}x{}; both must be n x n",
                a.rows(),
                a.cols(),
                g.rows(),
                g.cols()
            )));
        }
        let p = weights.len();
        if p == 0 || p > n {
            return Err(Error::InvalidParameter(format!(
                "weight count must satisfy 1 <= p <= n, got p = {p}, n = {n}"
            )));
        }
        if !weights.windows(2).all(|w| w[0] > w[1]) || weights[p - 1] <= 0.0 {
            return Err(Error::InvalidParameter(
                "weights must be strictly decreasing and positive".into(),
            ));
        }
        let tol = Tolerance::default();
        let a_res = (&a - &a.her_part()?).norm();
        if a_res > tol.bound(a.norm()) {
            return Err(Error::NotHermitian {
                residual: a_res,
                tol: tol.bound(a.norm()),
            });
        }
        let g_res = (&g - &g.her_part()?).norm();
        if g_res > tol.bound(g.norm()) {
            return Err(Error::NotHermitian {
                residual: g_res,
                tol: tol.bound(g.norm()),
            });
        }
        Ok(EigProblem {
            n,
            p,
            a,
            g,
            weights,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn a(&self) -> &QuatMatrix {
        &self.a
    }

    pub fn g(&self) -> &QuatMatrix {
        &self.g
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Manifold context for this problem with the metric `M_X ≡ G`.
    pub fn context(&self) -> Result<ManifoldContext> {
        ManifoldContext::new(self.g.clone(), self.p)
    }

    /// `A · X · N` — the shared core of the cost and its gradient.
    fn axn(&self, x: &QuatMatrix) -> Result<QuatMatrix> {
        self.a.matmul(x)?.scale_columns(&self.weights)
    }

    /// Cost `re(tr(X^H A X N))` and Euclidean gradient `2 A X N`.
    pub fn cost_and_egrad(&self, x: &QuatMatrix) -> Result<(f64, QuatMatrix)> {
        if x.shape() != (self.n, self.p) {
            return Err(Error::Shape(format!(
                "expected {}x{} iterate, got {}x{}",
                self.n,
                self.p,
                x.rows(),
                x.cols()
            )));
        }
        let axn = self.axn(x)?;
        Ok((x.re_trace_inner(&axn)?, &axn * 2.0))
    }

    /// Feasibility, off-diagonal, and eigenvalue residuals at `x`.
    pub fn residuals(&self, x: &QuatMatrix) -> Result<ResidualTriple> {
        if x.shape() != (self.n, self.p) {
            return Err(Error::Shape(format!(
                "expected {}x{} iterate, got {}x{}",
                self.n,
                self.p,
                x.rows(),
                x.cols()
            )));
        }
        let gx = self.g.matmul(x)?;
        let feasibility =
            (&x.adjoint().matmul(&gx)? - &QuatMatrix::identity(self.p)).norm();
        let ax = self.a.matmul(x)?;
        let lam = x.adjoint().matmul(&ax)?;
        let offdiag = lam.offdiag_norm()?;
        let eigres = (&ax - &gx.matmul(&lam)?).norm();
        Ok(ResidualTriple {
            feasibility,
            offdiag,
            eigres,
        })
    }

    /// All n generalized eigenvalues by the independent brute-force route,
    /// ascending.
    pub fn oracle_eigs(&self) -> Result<Vec<f64>> {
        let (_, inv_sqrt_g) = sqrt_pd(&self.g)?;
        let l = inv_sqrt_g
            .matmul(&self.a)?
            .matmul(&inv_sqrt_g)?
            .her_part()?;
        let doubled = hermitian_complex_eigenvalues(&complex_adjoint(&l));
        collapse_paired_eigenvalues(&doubled, PAIR_REL_TOL * l.norm())
    }

    /// Eigenvalue and per-column residual diagnostics at a converged point.
    pub fn extract_eigenpairs(&self, x: &QuatMatrix) -> Result<EigenpairExtract> {
        if x.shape() != (self.n, self.p) {
            return Err(Error::Shape(format!(
                "expected {}x{} iterate, got {}x{}",
                self.n,
                self.p,
                x.rows(),
                x.cols()
            )));
        }
        let ax = self.a.matmul(x)?;
        let gx = self.g.matmul(x)?;
        let raw = x.adjoint().matmul(&ax)?;
        let mut lambdas = Vec::with_capacity(self.p);
        let mut diag_imag = Vec::with_capacity(self.p);
        for r in 0..self.p {
            let d = raw.get(r, r);
            lambdas.push(d.re());
            diag_imag.push((d - crate::quat::Quaternion::from_real(d.re())).abs());
        }
        let mut eigres_per_column = Vec::with_capacity(self.p);
        for r in 0..self.p {
            let residual = &ax.column(r) - &(&gx.column(r) * lambdas[r]);
            eigres_per_column.push(residual.norm());
        }
        Ok(EigenpairExtract {
            lambdas,
            eigres_per_column,
            diag_imag,
        })
    }
}

impl Objective for EigProblem {
    fn cost(&self, x: &QuatMatrix) -> f64 {
        self.cost_and_egrad(x).expect("iterate shape").0
    }

    fn egrad(&self, x: &QuatMatrix) -> QuatMatrix {
        self.cost_and_egrad(x).expect("iterate shape").1
    }

    fn cost_and_egrad(&self, x: &QuatMatrix) -> (f64, QuatMatrix) {
        EigProblem::cost_and_egrad(self, x).expect("iterate shape")
    }
}

/// Generates the randomized instance family: `A = (U + U^H)/2`,
/// `G = V^H V + I_n`, `N = diag(p, p−1, …, 1)`, with `U, V` drawn
/// entrywise standard normal in all four components from a ChaCha stream
/// seeded by `seed`. Identical seeds reproduce identical bytes.
pub fn generate_problem(n: usize, p: usize, seed: u64) -> Result<EigProblem> {
    if n == 0 || p == 0 || p > n {
        return Err(Error::InvalidParameter(format!(
            "p must satisfy 1 <= p <= n, got p = {p}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = QuatMatrix::standard_normal(n, n, &mut rng);
    let v = QuatMatrix::standard_normal(n, n, &mut rng);
    let a = (&u + &u.adjoint()) * 0.5;
    let g = &v.adjoint().matmul(&v)? + &QuatMatrix::identity(n);
    let weights: Vec<f64> = (1..=p).rev().map(|k| k as f64).collect();
    EigProblem::new(a, g, weights, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_positive_definite;
    use crate::qmat::QuatMatrix;
    use crate::testutil::random_matrix;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_instances_have_the_stated_structure() {
        let prob = generate_problem(12, 3, 7).unwrap();
        // A is exactly Hermitian by construction.
        assert_eq!(prob.a(), &prob.a().her_part().unwrap());
        let report = is_positive_definite(prob.g()).unwrap();
        assert!(report.positive_definite);
        assert!(report.min_eigenvalue.unwrap() >= 1.0 - 1e-9);
        assert_eq!(prob.weights(), &[3.0, 2.0, 1.0]);

        // Identical seed, identical bytes.
        let again = generate_problem(12, 3, 7).unwrap();
        assert_eq!(prob.a(), again.a());
        assert_eq!(prob.g(), again.g());
        let other = generate_problem(12, 3, 8).unwrap();
        assert_ne!(prob.a(), other.a());
    }

    #[test]
    fn rejects_invalid_construction() {
        assert!(generate_problem(2, 3, 0).is_err());
        assert!(generate_problem(0, 0, 0).is_err());
        let a = QuatMatrix::identity(3);
        let g = QuatMatrix::identity(3);
        assert!(EigProblem::new(a.clone(), g.clone(), vec![1.0, 2.0], 0).is_err());
        assert!(EigProblem::new(a.clone(), g.clone(), vec![2.0, -1.0], 0).is_err());
        let mut rng = StdRng::seed_from_u64(141);
        let bad = random_matrix(&mut rng, 3, 3);
        assert!(matches!(
            EigProblem::new(bad, g, vec![1.0], 0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn zero_matrix_costs_nothing() {
        let prob = EigProblem::new(
            QuatMatrix::zeros(4, 4),
            QuatMatrix::identity(4),
            vec![2.0, 1.0],
            0,
        )
        .unwrap();
        let x = random_matrix(&mut StdRng::seed_from_u64(142), 4, 2);
        let (cost, egrad) = prob.cost_and_egrad(&x).unwrap();
        assert_eq!(cost, 0.0);
        assert!(egrad.is_zero());
    }

    #[test]
    fn diagonal_cost_is_weighted_eigenvalue_sum() {
        // A = diag(λ), G = I, X = basis columns: cost = Σ λ_r μ_r.
        let prob = EigProblem::new(
            QuatMatrix::diagonal_real(&[2.0, 5.0, 11.0, 17.0]),
            QuatMatrix::identity(4),
            vec![2.0, 1.0],
            0,
        )
        .unwrap();
        let x = crate::solver::tests_support::basis_point(4, 2);
        let (cost, _) = prob.cost_and_egrad(&x).unwrap();
        assert_eq!(cost, 2.0 * 2.0 + 5.0 * 1.0);
    }

    #[test]
    fn euclidean_gradient_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(143);
        let prob = generate_problem(8, 2, 9).unwrap();
        let x = random_matrix(&mut rng, 8, 2);
        let (_, egrad) = prob.cost_and_egrad(&x).unwrap();
        for _ in 0..5 {
            let z = random_matrix(&mut rng, 8, 2);
            let analytic = egrad.re_trace_inner(&z).unwrap();
            let h = 1e-4 * x.norm().max(1.0);
            let plus = prob.cost_and_egrad(&(&x + &(&z * h))).unwrap().0;
            let minus = prob.cost_and_egrad(&(&x - &(&z * h))).unwrap().0;
            let fd = (plus - minus) / (2.0 * h);
            assert!(
                (analytic - fd).abs() <= 1e-6 * analytic.abs().max(1.0),
                "directional derivative mismatch: {analytic} vs {fd}"
            );
        }
    }

    #[test]
    fn residuals_vanish_at_an_exact_eigenbasis() {
        let prob = EigProblem::new(
            QuatMatrix::diagonal_real(&[1.0, 2.0, 3.0, 4.0]),
            QuatMatrix::identity(4),
            vec![2.0, 1.0],
            0,
        )
        .unwrap();
        let x = crate::solver::tests_support::basis_point(4, 2);
        let r = prob.residuals(&x).unwrap();
        assert_eq!(r.feasibility, 0.0);
        assert_eq!(r.offdiag, 0.0);
        assert_eq!(r.eigres, 0.0);

        let ex = prob.extract_eigenpairs(&x).unwrap();
        assert_eq!(ex.lambdas, vec![1.0, 2.0]);
        assert!(ex.eigres_per_column.iter().all(|&v| v <= 1e-12));
        assert!(ex.diag_imag.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn oracle_handles_diagonal_pencils() {
        let prob = EigProblem::new(
            QuatMatrix::diagonal_real(&[1.0, 2.0, 3.0]),
            QuatMatrix::identity(3),
            vec![1.0],
            0,
        )
        .unwrap();
        let eigs = prob.oracle_eigs().unwrap();
        for (got, want) in eigs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        // Diagonal ratios: A = diag(4, 3), G = diag(4, 1) has eigenvalues 1, 3.
        let prob = EigProblem::new(
            QuatMatrix::diagonal_real(&[4.0, 3.0]),
            QuatMatrix::diagonal_real(&[4.0, 1.0]),
            vec![1.0],
            0,
        )
        .unwrap();
        let eigs = prob.oracle_eigs().unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_spectrum_is_kramers_doubled() {
        let prob = generate_problem(20, 2, 17).unwrap();
        let (_, inv_sqrt_g) = sqrt_pd(prob.g()).unwrap();
        let l = inv_sqrt_g
            .matmul(prob.a())
            .unwrap()
            .matmul(&inv_sqrt_g)
            .unwrap()
            .her_part()
            .unwrap();
        let doubled = hermitian_complex_eigenvalues(&complex_adjoint(&l));
        for pair in doubled.chunks_exact(2) {
            assert!((pair[1] - pair[0]).abs() <= 1e-9 * l.norm());
        }
        // And the collapse path accepts it.
        assert_eq!(prob.oracle_eigs().unwrap().len(), 20);
    }

    #[test]
    fn gauge_rotation_preserves_residuals() {
        // Right-multiplying by a diagonal of unit quaternions must not move
        // any of the three residuals.
        let mut rng = StdRng::seed_from_u64(144);
        let prob = generate_problem(10, 3, 23).unwrap();
        let ctx = prob.context().unwrap();
        let x = ctx.random_point(&mut rng).unwrap();
        let r0 = prob.residuals(&x).unwrap();

        let phase = QuatMatrix::from_fn(3, 3, |r, c| {
            if r == c {
                crate::testutil::random_quat(&mut rng).normalized().unwrap()
            } else {
                crate::quat::Quaternion::ZERO
            }
        });
        let x_rot = x.matmul(&phase).unwrap();
        let r1 = prob.residuals(&x_rot).unwrap();
        assert!((r0.feasibility - r1.feasibility).abs() <= 1e-10);
        assert!((r0.offdiag - r1.offdiag).abs() <= 1e-10 * prob.a().norm());
        assert!((r0.eigres - r1.eigres).abs() <= 1e-10 * prob.a().norm());
    }
}
