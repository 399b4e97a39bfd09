//! Absolute-plus-relative tolerance used for scalar comparisons.

/// A comparison tolerance of the form `atol + rtol * scale`.
///
/// Every internal check (Hermitian residuals, convergence targets, ...)
/// goes through a `Tolerance` so call sites can override the defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            atol: 1e-12,
            rtol: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Self {
        Tolerance { atol, rtol }
    }

    /// The admissible magnitude at a given scale.
    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    /// True when `value` is within tolerance at `scale`.
    pub fn admits(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.bound(scale)
    }
}
