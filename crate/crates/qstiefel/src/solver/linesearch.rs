//! Armijo backtracking along a retracted ray.

use crate::error::{Error, Result};
use crate::manifold::{ManifoldContext, TangentVector};
use crate::qmat::QuatMatrix;
use crate::solver::{ArmijoParams, Objective};

/// Accepted step and the already-evaluated point it leads to.
#[derive(Debug, Clone)]
pub struct LineSearchOutcome {
    pub step: f64,
    pub x_next: QuatMatrix,
    pub cost_next: f64,
    pub backtracks: usize,
}

/// Finds the largest step `t = initial_step · contractionᵏ` (smallest `k`)
/// with
///
/// ```text
/// cost(R_X(t·d)) ≤ cost(X) + sufficient_decrease · t · slope,
/// ```
///
/// where `slope = ⟨grad f(X), d⟩_X` must be negative. `cost_x` is the
/// caller's already-computed `cost(X)`; a NaN trial cost simply fails the
/// acceptance test and backtracks further.
#[allow(clippy::too_many_arguments)]
pub fn armijo_linesearch<O: Objective + ?Sized>(
    ctx: &ManifoldContext,
    obj: &O,
    x: &QuatMatrix,
    cost_x: f64,
    direction: &TangentVector,
    slope: f64,
    params: &ArmijoParams,
    initial_step: f64,
) -> Result<LineSearchOutcome> {
    if !(slope < 0.0) {
        return Err(Error::NotDescentDirection { slope });
    }
    let mut step = initial_step;
    for backtracks in 0..=params.max_backtracks {
        let x_next = ctx.retract(x, &direction.scale(step))?;
        let cost_next = obj.cost(&x_next);
        if cost_next <= cost_x + params.sufficient_decrease * step * slope {
            return Ok(LineSearchOutcome {
                step,
                x_next,
                cost_next,
                backtracks,
            });
        }
        step *= params.contraction;
    }
    Err(Error::LineSearchFailed {
        backtracks: params.max_backtracks,
        step,
    })
}
