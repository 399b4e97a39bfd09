//! Riemannian steepest descent.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::manifold::ManifoldContext;
use crate::qmat::QuatMatrix;
use crate::solver::linesearch::armijo_linesearch;
use crate::solver::{Objective, SolveReport, SolverConfig, StopReason, TraceRow};

/// Minimizes `obj` from the feasible point `x0` by backtracked steepest
/// descent: `X_{k+1} = R_{X_k}(t_k · (−grad f(X_k)))`.
///
/// Stops when the metric gradient norm reaches `grad_tol` or the iteration
/// budget runs out; a line-search breakdown terminates early with
/// `converged = false` and the partial trace. The cost column of the trace
/// is non-increasing by construction.
pub fn solve_sd<O: Objective + ?Sized>(
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
    let mut trace = vec![TraceRow {
        iter: 0,
        elapsed_s: 0.0,
        cost,
        grad_norm,
        step_size: 0.0,
    }];

    let mut reason = StopReason::MaxIterations;
    let mut next_initial_step = config.armijo.initial_step;
    for iter in 1..=config.max_iters {
        if grad_norm <= config.grad_tol {
            break;
        }
        let direction = grad.scale(-1.0);
        let slope = -(grad_norm * grad_norm);
        let outcome = match armijo_linesearch(
            ctx,
            obj,
            &x,
            cost,
            &direction,
            slope,
            &config.armijo,
            next_initial_step,
        ) {
            Ok(out) => out,
            Err(Error::LineSearchFailed { .. }) => {
                reason = StopReason::LineSearchFailure;
                break;
            }
            Err(e) => return Err(e),
        };

        x = outcome.x_next;
        cost = outcome.cost_next;
        let egrad = obj.egrad(&x);
        grad = ctx.egrad_to_rgrad(&x, &egrad)?;
        grad_norm = ctx.norm(&x, &grad)?;
        trace.push(TraceRow {
            iter,
            elapsed_s: clock.elapsed().as_secs_f64(),
            cost,
            grad_norm,
            step_size: outcome.step,
        });
        // Step doubling: start the next search from twice the last accepted
        // step instead of re-backtracking from scratch.
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
