//! The generalized quaternionic Stiefel manifold.
//!
//! For a Hermitian positive definite `G ∈ ℍ^{n×n}` and `p ≤ n`, the manifold
//! is the set of G-orthonormal frames `{X ∈ ℍ^{n×p} : X^H G X = I_p}`,
//! treated as a real Riemannian submanifold of ℍ^{n×p} of dimension
//! `p(4n − 2p + 1)`. The tangent space at `X` is
//! `{ξ : ξ^H G X + X^H G ξ = 0}`, equivalently `{XB + X⊥C}` with
//! skew-Hermitian `B`; the normal space under the metric `M_X` is
//! `{M_X⁻¹ G X S : S Hermitian}`.
//!
//! Projection onto the tangent space subtracts the normal component whose
//! Hermitian coefficient solves a Sylvester equation; for the constant
//! metric `M_X ≡ G` that equation collapses to the closed form
//! `P(Y) = Y − X·her(X^H G Y)`. The retraction is QR-based through the
//! square-root coordinates, `R_X(η) = √G⁻¹ · qf(√G (X + η))`, and vector
//! transport is projection at the retracted point.

pub mod metric;
pub mod tangent;

pub use metric::{ConstantGMetric, ConstantMetric, MetricProvider};
pub use tangent::{fingerprint, TangentVector};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{qf, solve_sylvester, sqrt_pd};
use crate::qmat::QuatMatrix;

/// Default membership tolerance on `‖X^H G X − I_p‖_F`.
pub const DEFAULT_FEAS_TOL: f64 = 1e-8;
/// Default tolerance on the tangent condition `‖her(X^H G ξ)‖_F`.
pub const DEFAULT_TANGENT_TOL: f64 = 1e-8;

/// Immutable description of one manifold instance: the frame matrix, its
/// cached square root and inverse square root, and the metric provider.
///
/// Safe to share across threads; all operations are pure given `(ctx,
/// inputs)` and caller-owned RNG state.
pub struct ManifoldContext {
    n: usize,
    p: usize,
    g: QuatMatrix,
    sqrt_g: QuatMatrix,
    inv_sqrt_g: QuatMatrix,
    metric: Box<dyn MetricProvider>,
    feas_tol: f64,
    tangent_tol: f64,
}

impl ManifoldContext {
    /// Context with the default metric `M_X ≡ G`.
    pub fn new(g: QuatMatrix, p: usize) -> Result<Self> {
        let (sqrt_g, inv_sqrt_g) = Self::validate(&g, p)?;
        let metric = ConstantGMetric::from_parts(g.clone(), &inv_sqrt_g)?;
        Ok(ManifoldContext {
            n: g.rows(),
            p,
            g,
            sqrt_g,
            inv_sqrt_g,
            metric: Box::new(metric),
            feas_tol: DEFAULT_FEAS_TOL,
            tangent_tol: DEFAULT_TANGENT_TOL,
        })
    }

    /// Context with a caller-supplied metric provider.
    pub fn with_metric(
        g: QuatMatrix,
        p: usize,
        metric: Box<dyn MetricProvider>,
    ) -> Result<Self> {
        let (sqrt_g, inv_sqrt_g) = Self::validate(&g, p)?;
        Ok(ManifoldContext {
            n: g.rows(),
            p,
            g,
            sqrt_g,
            inv_sqrt_g,
            metric,
            feas_tol: DEFAULT_FEAS_TOL,
            tangent_tol: DEFAULT_TANGENT_TOL,
        })
    }

    /// Overrides the feasibility and tangent tolerances.
    pub fn with_tolerances(mut self, feas_tol: f64, tangent_tol: f64) -> Self {
        self.feas_tol = feas_tol;
        self.tangent_tol = tangent_tol;
        self
    }

    fn validate(g: &QuatMatrix, p: usize) -> Result<(QuatMatrix, QuatMatrix)> {
        if !g.is_square() {
            return Err(Error::Shape(format!(
                "frame matrix must be square, got {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        if p == 0 || p > g.rows() {
            return Err(Error::InvalidParameter(format!(
                "p must satisfy 1 <= p <= n, got p = {p}, n = {}",
                g.rows()
            )));
        }
        sqrt_pd(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn g(&self) -> &QuatMatrix {
        &self.g
    }

    pub fn sqrt_g(&self) -> &QuatMatrix {
        &self.sqrt_g
    }

    pub fn inv_sqrt_g(&self) -> &QuatMatrix {
        &self.inv_sqrt_g
    }

    pub fn metric(&self) -> &dyn MetricProvider {
        self.metric.as_ref()
    }

    pub fn feas_tol(&self) -> f64 {
        self.feas_tol
    }

    pub fn tangent_tol(&self) -> f64 {
        self.tangent_tol
    }

    /// Real dimension `p(4n − 2p + 1)`.
    pub fn dimension(&self) -> usize {
        self.p * (4 * self.n - 2 * self.p + 1)
    }

    fn check_shape(&self, m: &QuatMatrix, what: &str) -> Result<()> {
        if m.shape() != (self.n, self.p) {
            return Err(Error::Shape(format!(
                "{what}: expected {}x{}, got {}x{}",
                self.n,
                self.p,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }

    /// Membership defect `‖X^H G X − I_p‖_F`.
    pub fn feasibility_residual(&self, x: &QuatMatrix) -> Result<f64> {
        self.check_shape(x, "feasibility_residual")?;
        let xhgx = x.adjoint().matmul(&self.g.matmul(x)?)?;
        Ok((&xhgx - &QuatMatrix::identity(self.p)).norm())
    }

    /// Errors unless `x` is on the manifold within `feas_tol`.
    pub fn check_point(&self, x: &QuatMatrix) -> Result<()> {
        let residual = self.feasibility_residual(x)?;
        if residual > self.feas_tol {
            return Err(Error::Infeasible {
                residual,
                tol: self.feas_tol,
            });
        }
        Ok(())
    }

    /// Defect of the tangent condition, `‖her(X^H G v)‖_F`.
    pub fn tangent_residual(&self, x: &QuatMatrix, v: &QuatMatrix) -> Result<f64> {
        self.check_shape(v, "tangent_residual")?;
        let xhgv = x.adjoint().matmul(&self.g.matmul(v)?)?;
        Ok(xhgv.her_part()?.norm())
    }

    /// Orthogonal projection of an ambient matrix onto the tangent space at
    /// `x`, under the context metric.
    ///
    /// With the constant-G metric the closed form `Y − X·her(X^H G Y)` is
    /// used; otherwise the Hermitian coefficient of the normal component is
    /// obtained from the Sylvester equation
    /// `K S + S K = 2·her(X^H G Y)` with `K = X^H G M_X⁻¹ G X`.
    pub fn project_tangent(&self, x: &QuatMatrix, y: &QuatMatrix) -> Result<TangentVector> {
        self.check_point(x)?;
        self.check_shape(y, "project_tangent")?;
        let value = if self.metric.is_constant_g() {
            self.project_value_constant_g(x, y)?
        } else {
            self.project_value_general(x, y)?
        };
        #[cfg(debug_assertions)]
        {
            let res = self.tangent_residual(x, &value)?;
            debug_assert!(
                res <= self.tangent_tol * value.norm().max(1.0),
                "projection violated the tangent condition: {res:e}"
            );
        }
        Ok(TangentVector::new_unchecked(fingerprint(x), value))
    }

    /// Projection through the general Sylvester path regardless of the
    /// metric flag. With the constant-G metric this must agree with
    /// [`ManifoldContext::project_tangent`] to solver accuracy.
    pub fn project_tangent_general(
        &self,
        x: &QuatMatrix,
        y: &QuatMatrix,
    ) -> Result<TangentVector> {
        self.check_point(x)?;
        self.check_shape(y, "project_tangent_general")?;
        let value = self.project_value_general(x, y)?;
        Ok(TangentVector::new_unchecked(fingerprint(x), value))
    }

    fn project_value_constant_g(&self, x: &QuatMatrix, y: &QuatMatrix) -> Result<QuatMatrix> {
        let gx = self.g.matmul(x)?;
        let s = gx.adjoint().matmul(y)?.her_part()?;
        Ok(y - &x.matmul(&s)?)
    }

    fn project_value_general(&self, x: &QuatMatrix, y: &QuatMatrix) -> Result<QuatMatrix> {
        let gx = self.g.matmul(x)?;
        let minv_gx = self.metric.apply_inv(x, &gx)?;
        let k = gx.adjoint().matmul(&minv_gx)?.her_part()?;
        let l = gx.adjoint().matmul(y)?.her_part()? * 2.0;
        let s = solve_sylvester(&k, &l)?;
        Ok(y - &minv_gx.matmul(&s)?)
    }

    /// The Riemannian inner product `re(tr(ξ^H M_X η))` of two tangent
    /// vectors based at `x`.
    pub fn inner(&self, x: &QuatMatrix, xi: &TangentVector, eta: &TangentVector) -> Result<f64> {
        xi.check_base(x)?;
        eta.check_base(x)?;
        self.inner_ambient(x, xi.value(), eta.value())
    }

    /// The same bilinear form evaluated on arbitrary ambient matrices.
    pub fn inner_ambient(
        &self,
        x: &QuatMatrix,
        xi: &QuatMatrix,
        eta: &QuatMatrix,
    ) -> Result<f64> {
        self.check_shape(xi, "inner")?;
        self.check_shape(eta, "inner")?;
        xi.re_trace_inner(&self.metric.apply(x, eta)?)
    }

    /// Metric norm of a tangent vector.
    pub fn norm(&self, x: &QuatMatrix, xi: &TangentVector) -> Result<f64> {
        Ok(self.inner(x, xi, xi)?.sqrt())
    }

    /// Converts a Euclidean gradient into the Riemannian gradient
    /// `P_X(M_X⁻¹ ∇f̄(X))`.
    pub fn egrad_to_rgrad(&self, x: &QuatMatrix, egrad: &QuatMatrix) -> Result<TangentVector> {
        self.check_shape(egrad, "egrad_to_rgrad")?;
        let ambient_grad = self.metric.apply_inv(x, egrad)?;
        self.project_tangent(x, &ambient_grad)
    }

    /// QR retraction `R_X(η) = √G⁻¹ · qf(√G (X + η))`.
    ///
    /// `R_X(0) = X` holds exactly. For a genuine tangent vector the
    /// factored matrix has full column rank (its Gram matrix is
    /// `I_p + η^H G η`), so a rank failure means `η` violated its contract.
    pub fn retract(&self, x: &QuatMatrix, eta: &TangentVector) -> Result<QuatMatrix> {
        eta.check_base(x)?;
        self.check_point(x)?;
        if eta.value().is_zero() {
            return Ok(x.clone());
        }
        let shifted = self.sqrt_g.matmul(&(x + eta.value()))?;
        let q = match qf(&shifted) {
            Ok(q) => q,
            Err(Error::RankDeficient { column, pivot, .. }) => {
                return Err(Error::InvalidParameter(format!(
                    "retract: rank failure at column {column} (pivot {pivot:.3e}); \
                     the direction violates the tangent contract"
                )))
            }
            Err(e) => return Err(e),
        };
        self.inv_sqrt_g.matmul(&q)
    }

    /// Vector transport: project `xi` onto the tangent space at
    /// `X₊ = R_X(η)`.
    pub fn transport(
        &self,
        x: &QuatMatrix,
        eta: &TangentVector,
        xi: &TangentVector,
    ) -> Result<TangentVector> {
        eta.check_base(x)?;
        xi.check_base(x)?;
        let x_plus = self.retract(x, eta)?;
        self.project_tangent(&x_plus, xi.value())
    }

    /// Random point: `√G⁻¹ · qf(Z)` for `Z` with i.i.d. standard normal
    /// component planes.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<QuatMatrix> {
        for _attempt in 0..2 {
            let z = QuatMatrix::standard_normal(self.n, self.p, rng);
            match qf(&z) {
                Ok(q) => return self.inv_sqrt_g.matmul(&q),
                Err(Error::RankDeficient { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::InvalidParameter(
            "random_point: repeated rank failure in qf of a random Gaussian matrix".into(),
        ))
    }

    /// Random unit-norm tangent vector at `x`: a Gaussian ambient matrix
    /// projected onto the tangent space and normalized in the metric.
    pub fn random_tangent<R: Rng + ?Sized>(
        &self,
        x: &QuatMatrix,
        rng: &mut R,
    ) -> Result<TangentVector> {
        for _attempt in 0..2 {
            let z = QuatMatrix::standard_normal(self.n, self.p, rng);
            let v = self.project_tangent(x, &z)?;
            let norm = self.norm(x, &v)?;
            if norm > 1e-12 {
                return Ok(v.scale(1.0 / norm));
            }
        }
        Err(Error::InvalidParameter(
            "random_tangent: projected Gaussian direction vanished twice".into(),
        ))
    }

    /// A G-orthonormal completion `X⊥ ∈ ℍ^{n×(n−p)}` with
    /// `X⊥^H G X⊥ = I_{n−p}` and `X^H G X⊥ = 0`.
    ///
    /// Built by pivoted Gram–Schmidt on the standard basis in the
    /// square-root coordinates, so the result is deterministic.
    pub fn complete_basis(&self, x: &QuatMatrix) -> Result<QuatMatrix> {
        use crate::linalg::qr::{col_dot, col_norm, col_scale, col_sub_scaled};

        self.check_point(x)?;
        let (n, p) = (self.n, self.p);
        let y = self.sqrt_g.matmul(x)?;

        // Work matrix [Y | I_n]: the first p columns are fixed, the identity
        // columns are candidates.
        let mut work = QuatMatrix::zeros(n, p + n);
        for c in 0..p {
            for r in 0..n {
                work.set(r, c, y.get(r, c));
            }
        }
        for c in 0..n {
            work.set(c, p + c, crate::quat::Quaternion::ONE);
        }

        // Orthogonalize every candidate against Y.
        for j in p..(p + n) {
            for _ in 0..2 {
                for i in 0..p {
                    let r = col_dot(&work, i, j);
                    col_sub_scaled(&mut work, j, i, r);
                }
            }
        }

        let mut used = vec![false; n];
        let mut accepted = Vec::with_capacity(n - p);
        for slot in 0..(n - p) {
            // Pivot on the candidate with the largest residual norm.
            let (best, best_norm) = (0..n)
                .filter(|&c| !used[c])
                .map(|c| (c, col_norm(&work, p + c)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("candidates remain");
            if best_norm <= 1e-8 {
                return Err(Error::RankDeficient {
                    column: slot,
                    pivot: best_norm,
                    tol: 1e-8,
                });
            }
            used[best] = true;
            col_scale(&mut work, p + best, 1.0 / best_norm);
            // Deflate the remaining candidates.
            for c in 0..n {
                if !used[c] {
                    let r = col_dot(&work, p + best, p + c);
                    col_sub_scaled(&mut work, p + c, p + best, r);
                }
            }
            accepted.push(best);
        }

        let mut basis = QuatMatrix::zeros(n, n - p);
        for (slot, &c) in accepted.iter().enumerate() {
            for r in 0..n {
                basis.set(r, slot, work.get(r, p + c));
            }
        }
        // A final MGS pass tightens pairwise orthogonality; its column
        // combinations stay orthogonal to Y.
        let q = qf(&basis)?;
        self.inv_sqrt_g.matmul(&q)
    }
}
