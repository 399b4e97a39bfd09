//! First-order Riemannian solvers.
//!
//! Both solvers minimize an [`Objective`] over a
//! [`ManifoldContext`](crate::manifold::ManifoldContext) by
//! retracting along tangent directions chosen from the Riemannian gradient:
//! steepest descent, and conjugate gradient with PR+ momentum carried
//! through the projection vector transport. Step sizes come from Armijo
//! backtracking.

pub mod cg;
pub mod linesearch;
pub mod sd;

pub use cg::solve_cg;
pub use linesearch::{armijo_linesearch, LineSearchOutcome};
pub use sd::solve_sd;

use crate::error::{Error, Result};
use crate::qmat::QuatMatrix;

/// A smooth objective exposed through its cost and Euclidean gradient.
///
/// `egrad` is the gradient of the ambient extension with respect to the
/// flat `re(tr(·^H ·))` inner product; the solvers convert it to the
/// Riemannian gradient through the manifold context. Implementations must
/// be deterministic for a fixed input.
pub trait Objective {
    fn cost(&self, x: &QuatMatrix) -> f64;
    fn egrad(&self, x: &QuatMatrix) -> QuatMatrix;

    /// Override when cost and gradient share work.
    fn cost_and_egrad(&self, x: &QuatMatrix) -> (f64, QuatMatrix) {
        (self.cost(x), self.egrad(x))
    }
}

/// Armijo backtracking parameters.
#[derive(Debug, Clone, Copy)]
pub struct ArmijoParams {
    pub initial_step: f64,
    pub contraction: f64,
    pub sufficient_decrease: f64,
    pub max_backtracks: usize,
}

impl Default for ArmijoParams {
    fn default() -> Self {
        ArmijoParams {
            initial_step: 1.0,
            contraction: 0.5,
            sufficient_decrease: 1e-4,
            max_backtracks: 50,
        }
    }
}

/// Conjugate gradient knobs. The momentum rule is PR+ (non-negative
/// Polak–Ribière); directions that fail the descent test are replaced by
/// steepest descent when `restart_on_nondescent` is set.
#[derive(Debug, Clone, Copy)]
pub struct CgParams {
    pub restart_on_nondescent: bool,
}

impl Default for CgParams {
    fn default() -> Self {
        CgParams {
            restart_on_nondescent: true,
        }
    }
}

/// Stopping rule and line-search configuration shared by both solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub armijo: ArmijoParams,
    pub cg: CgParams,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 250,
            grad_tol: 1e-6,
            armijo: ArmijoParams::default(),
            cg: CgParams::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidParameter("grad_tol must be positive".into()));
        }
        let a = &self.armijo;
        if !(a.initial_step > 0.0) {
            return Err(Error::InvalidParameter(
                "armijo initial_step must be positive".into(),
            ));
        }
        if !(a.contraction > 0.0 && a.contraction < 1.0) {
            return Err(Error::InvalidParameter(
                "armijo contraction must lie in (0, 1)".into(),
            ));
        }
        if !(a.sufficient_decrease > 0.0 && a.sufficient_decrease <= 0.5) {
            return Err(Error::InvalidParameter(
                "armijo sufficient_decrease must lie in (0, 0.5]".into(),
            ));
        }
        Ok(())
    }
}

/// One trace record per iteration, starting with the initial point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub elapsed_s: f64,
    pub cost: f64,
    /// Metric norm `sqrt(⟨g, g⟩_X)` of the Riemannian gradient.
    pub grad_norm: f64,
    /// Accepted Armijo step; 0 for the initial row.
    pub step_size: f64,
}

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GradientTolerance,
    MaxIterations,
    LineSearchFailure,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::GradientTolerance => write!(f, "gradient tolerance reached"),
            StopReason::MaxIterations => write!(f, "iteration budget exhausted"),
            StopReason::LineSearchFailure => write!(f, "line search failed"),
        }
    }
}

/// Final iterate plus the per-iteration trace.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: QuatMatrix,
    pub converged: bool,
    pub reason: StopReason,
    pub trace: Vec<TraceRow>,
}

impl SolveReport {
    pub fn final_cost(&self) -> f64 {
        self.trace.last().map(|r| r.cost).unwrap_or(f64::NAN)
    }

    pub fn final_grad_norm(&self) -> f64 {
        self.trace.last().map(|r| r.grad_norm).unwrap_or(f64::NAN)
    }

    pub fn iterations(&self) -> usize {
        self.trace.last().map(|r| r.iter).unwrap_or(0)
    }
}

/// PR+ momentum coefficient: `max(0, ⟨g₊, g₊ − T(g)⟩ / ⟨g, g⟩)`.
pub(crate) fn pr_plus_beta(numerator: f64, gg_prev: f64) -> f64 {
    (numerator / gg_prev).max(0.0)
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::Objective;
    use crate::manifold::ManifoldContext;
    use crate::qmat::QuatMatrix;
    use crate::quat::Quaternion;
    use crate::testutil::{random_hermitian, random_pd};
    use rand::rngs::StdRng;

    /// Weighted Rayleigh-quotient objective `re(tr(X^H A X N))` with
    /// `N = diag(p, p−1, …, 1)`.
    pub struct RayleighObjective {
        a: QuatMatrix,
        g: QuatMatrix,
        weights: Vec<f64>,
    }

    impl RayleighObjective {
        pub fn diagonal(diag: &[f64], p: usize) -> Self {
            RayleighObjective {
                a: QuatMatrix::diagonal_real(diag),
                g: QuatMatrix::identity(diag.len()),
                weights: (1..=p).rev().map(|k| k as f64).collect(),
            }
        }

        pub fn random(rng: &mut StdRng, n: usize, p: usize) -> Self {
            RayleighObjective {
                a: random_hermitian(rng, n),
                g: random_pd(rng, n),
                weights: (1..=p).rev().map(|k| k as f64).collect(),
            }
        }

        pub fn context(&self) -> ManifoldContext {
            ManifoldContext::new(self.g.clone(), self.weights.len()).unwrap()
        }

        fn axn(&self, x: &QuatMatrix) -> QuatMatrix {
            self.a
                .matmul(x)
                .unwrap()
                .scale_columns(&self.weights)
                .unwrap()
        }
    }

    impl Objective for RayleighObjective {
        fn cost(&self, x: &QuatMatrix) -> f64 {
            x.re_trace_inner(&self.axn(x)).unwrap()
        }

        fn egrad(&self, x: &QuatMatrix) -> QuatMatrix {
            &self.axn(x) * 2.0
        }

        fn cost_and_egrad(&self, x: &QuatMatrix) -> (f64, QuatMatrix) {
            let axn = self.axn(x);
            (x.re_trace_inner(&axn).unwrap(), &axn * 2.0)
        }
    }

    /// First p identity columns; a point of St(p, ℍⁿ) when G = I.
    pub fn basis_point(n: usize, p: usize) -> QuatMatrix {
        QuatMatrix::from_fn(n, p, |r, c| {
            if r == c {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }
}
