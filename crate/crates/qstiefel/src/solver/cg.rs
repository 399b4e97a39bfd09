//! Riemannian conjugate gradient with PR+ momentum.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::manifold::ManifoldContext;
use crate::qmat::QuatMatrix;
use crate::solver::linesearch::armijo_linesearch;
use crate::solver::{pr_plus_beta, Objective, SolveReport, SolverConfig, StopReason, TraceRow};

/// Minimizes `obj` from the feasible point `x0` by Riemannian conjugate
/// gradient:
///
/// ```text
/// d₀ = −g₀,   d_{k+1} = −g_{k+1} + β_{k+1} · T(d_k),
/// β_{k+1} = max(0, ⟨g_{k+1}, g_{k+1} − T(g_k)⟩_{X_{k+1}} / ⟨g_k, g_k⟩_{X_k}),
/// ```
///
/// where `T` is the projection transport onto the tangent space at the
/// retracted point. Non-descent directions reset to steepest descent, and a
/// failed line search retries once along the gradient before giving up.
/// Stopping matches [`super::solve_sd`].
pub fn solve_cg<O: Objective + ?Sized>(
    ctx: &ManifoldContext,
    obj: &O,
    x0: &QuatMatrix,
    config: &SolverConfig,
) -> Result<SolveReport> {
    config.validate()?;
    ctx.check_point(x0)?;

    let clock = Instant::now();
    let mut x = x0.clone();
    let (mut cost, egrad0) = obj.cost_and_egrad(&x);
    let mut grad = ctx.egrad_to_rgrad(&x, &egrad0)?;
    let mut grad_norm = ctx.norm(&x, &grad)?;
    let mut direction = grad.scale(-1.0);
    let mut trace = vec![TraceRow {
        iter: 0,
        elapsed_s: 0.0,
        cost,
        grad_norm,
        step_size: 0.0,
    }];

    let mut reason = StopReason::MaxIterations;
    let mut next_initial_step = config.armijo.initial_step;
    'outer: for iter in 1..=config.max_iters {
        if grad_norm <= config.grad_tol {
            break;
        }

        let mut slope = ctx.inner(&x, &grad, &direction)?;
        let mut is_sd_step = false;
        if slope >= 0.0 && config.cg.restart_on_nondescent {
            direction = grad.scale(-1.0);
            slope = -(grad_norm * grad_norm);
            is_sd_step = true;
        }

        let outcome = loop {
            match armijo_linesearch(
                ctx,
                obj,
                &x,
                cost,
                &direction,
                slope,
                &config.armijo,
                next_initial_step,
            ) {
                Ok(out) => break out,
                Err(Error::LineSearchFailed { .. }) if !is_sd_step => {
                    // Momentum led nowhere; retry once along the gradient.
                    direction = grad.scale(-1.0);
                    slope = -(grad_norm * grad_norm);
                    is_sd_step = true;
                }
                Err(Error::LineSearchFailed { .. }) => {
                    reason = StopReason::LineSearchFailure;
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        };

        let x_next = outcome.x_next;
        let egrad_next = obj.egrad(&x_next);
        let grad_next = ctx.egrad_to_rgrad(&x_next, &egrad_next)?;
        let grad_norm_next = ctx.norm(&x_next, &grad_next)?;

        // Transport the old gradient and direction to the new point; the
        // transport is projection at X₊, which retract already produced.
        let grad_moved = ctx.project_tangent(&x_next, grad.value())?;
        let dir_moved = ctx.project_tangent(&x_next, direction.value())?;
        let steepness = grad_next.add_scaled(-1.0, &grad_moved)?;
        let numerator = ctx.inner(&x_next, &grad_next, &steepness)?;
        let beta = pr_plus_beta(numerator, grad_norm * grad_norm);
        direction = grad_next.scale(-1.0).add_scaled(beta, &dir_moved)?;

        x = x_next;
        cost = outcome.cost_next;
        grad = grad_next;
        grad_norm = grad_norm_next;
        trace.push(TraceRow {
            iter,
            elapsed_s: clock.elapsed().as_secs_f64(),
            cost,
            grad_norm,
            step_size: outcome.step,
        });
        next_initial_step = 2.0 * outcome.step;
    }

    if reason != StopReason::LineSearchFailure && grad_norm <= config.grad_tol {
        reason = StopReason::GradientTolerance;
    }
    Ok(SolveReport {
        x,
        converged: reason == StopReason::GradientTolerance,
        reason,
        trace,
    })
}
