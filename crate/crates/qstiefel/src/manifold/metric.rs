//! Riemannian metric providers.
//!
//! The ambient metric is `⟨ξ, η⟩_X = re(tr(ξ^H M_X η))` for a Hermitian
//! positive definite `M_X` that may vary with the base point. A provider
//! supplies the action of `M_X` and `M_X⁻¹`; the manifold never forms
//! `M_X⁻¹` densely itself, so structured metrics stay structured.

use crate::error::Result;
use crate::linalg::eigh::eigh;
use crate::linalg::sqrt::PD_REL_TOL;
use crate::qmat::QuatMatrix;

/// The two capabilities a metric must offer at a base point, plus a flag
/// that unlocks the closed-form projection for the metric `M_X ≡ G`.
pub trait MetricProvider: Send + Sync {
    /// `M_X · v`.
    fn apply(&self, x: &QuatMatrix, v: &QuatMatrix) -> Result<QuatMatrix>;

    /// `M_X⁻¹ · v`.
    fn apply_inv(&self, x: &QuatMatrix, v: &QuatMatrix) -> Result<QuatMatrix>;

    /// True only for the provider that is identically the frame matrix `G`
    /// of the manifold it is used with.
    fn is_constant_g(&self) -> bool {
        false
    }
}

/// The metric `M_X ≡ G`. Caches `G⁻¹`.
pub struct ConstantGMetric {
    g: QuatMatrix,
    inv_g: QuatMatrix,
}

impl ConstantGMetric {
    /// Builds from the frame matrix and its inverse square root (both
    /// typically already cached by the manifold context).
    pub fn from_parts(g: QuatMatrix, inv_sqrt_g: &QuatMatrix) -> Result<Self> {
        let inv_g = inv_sqrt_g.matmul(inv_sqrt_g)?.her_part()?;
        Ok(ConstantGMetric { g, inv_g })
    }
}

impl MetricProvider for ConstantGMetric {
    fn apply(&self, _x: &QuatMatrix, v: &QuatMatrix) -> Result<QuatMatrix> {
        self.g.matmul(v)
    }

    fn apply_inv(&self, _x: &QuatMatrix, v: &QuatMatrix) -> Result<QuatMatrix> {
        self.inv_g.matmul(v)
    }

    fn is_constant_g(&self) -> bool {
        true
    }
}

/// An arbitrary constant Hermitian positive definite metric `M_X ≡ M`.
///
/// Exercises the general (Sylvester) projection path even when `M = G`.
pub struct ConstantMetric {
    m: QuatMatrix,
    inv_m: QuatMatrix,
}

impl ConstantMetric {
    pub fn new(m: QuatMatrix) -> Result<Self> {
        let eig = eigh(&m)?;
        let min = eig.min_eigenvalue();
        if m.rows() > 0 && min <= PD_REL_TOL * eig.max_abs_eigenvalue() {
            return Err(crate::error::Error::NotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        let inv_vals: Vec<f64> = eig.lambda.iter().map(|l| 1.0 / l).collect();
        let inv_m = eig
            .u
            .scale_columns(&inv_vals)?
            .matmul(&eig.u.adjoint())?
            .her_part()?;
        Ok(ConstantMetric { m, inv_m })
    }

    /// The identity metric (the plain Frobenius inner product).
    pub fn euclidean(n: usize) -> Self {
        ConstantMetric {
            m: QuatMatrix::identity(n),
            inv_m: QuatMatrix::identity(n),
        }
    }
}

impl MetricProvider for ConstantMetric {
    fn apply(&self, _x: &QuatMatrix, v: &QuatMatrix) -> Result<QuatMatrix> {
        self.m.matmul(v)
    }

    fn apply_inv(&self, _x: &QuatMatrix, v: &QuatMatrix) -> Result<QuatMatrix> {
        self.inv_m.matmul(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sqrt_pd;
    use crate::testutil::{random_matrix, random_pd};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn check_provider_laws(metric: &dyn MetricProvider, n: usize, rng: &mut StdRng) {
        let x = random_matrix(rng, n, 2);
        for _ in 0..5 {
            let y = random_matrix(rng, n, 2);
            let z = random_matrix(rng, n, 2);
            let my = metric.apply(&x, &y).unwrap();
            let mz = metric.apply(&x, &z).unwrap();
            // Positive definite ...
            assert!(y.re_trace_inner(&my).unwrap() > 0.0);
            // ... and self-adjoint: ⟨z, M y⟩ = ⟨M z, y⟩.
            let lhs = z.re_trace_inner(&my).unwrap();
            let rhs = mz.re_trace_inner(&y).unwrap();
            assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
            // apply_inv inverts apply.
            let back = metric.apply_inv(&x, &my).unwrap();
            assert!((&back - &y).norm() <= 1e-9 * y.norm());
        }
    }

    #[test]
    fn constant_g_metric_laws() {
        let mut rng = StdRng::seed_from_u64(81);
        let g = random_pd(&mut rng, 6);
        let (_, inv_sqrt) = sqrt_pd(&g).unwrap();
        let metric = ConstantGMetric::from_parts(g, &inv_sqrt).unwrap();
        assert!(metric.is_constant_g());
        check_provider_laws(&metric, 6, &mut rng);
    }

    #[test]
    fn constant_metric_laws() {
        let mut rng = StdRng::seed_from_u64(82);
        let m = random_pd(&mut rng, 5);
        let metric = ConstantMetric::new(m).unwrap();
        assert!(!metric.is_constant_g());
        check_provider_laws(&metric, 5, &mut rng);

        let eye = ConstantMetric::euclidean(4);
        check_provider_laws(&eye, 4, &mut rng);
    }

    #[test]
    fn constant_metric_rejects_indefinite() {
        let neg = &QuatMatrix::identity(3) * -1.0;
        assert!(ConstantMetric::new(neg).is_err());
    }
}
