//! Tangent vectors tagged with their base point.
//!
//! Transports and projections silently corrupt results when a vector is
//! used at a point other than the one it was constructed at, so every
//! tangent vector carries a fingerprint of its base point and manifold
//! operations reject mismatches.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::qmat::QuatMatrix;

/// Fingerprint of a base point: a hash over the shape and the exact bit
/// patterns of all four component planes.
pub fn fingerprint(x: &QuatMatrix) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    x.shape().hash(&mut h);
    for l in 0..4 {
        for v in x.component(l).iter() {
            h.write_u64(v.to_bits());
        }
    }
    h.finish()
}

/// An ambient matrix known to satisfy the tangent condition
/// `her(X^H G ξ) = 0` at the base point it is tagged with.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: u64,
    value: QuatMatrix,
}

impl TangentVector {
    /// Construction is reserved for manifold operations, which guarantee
    /// the tangent condition before tagging.
    pub(crate) fn new_unchecked(base: u64, value: QuatMatrix) -> Self {
        TangentVector { base, value }
    }

    pub fn value(&self) -> &QuatMatrix {
        &self.value
    }

    pub fn into_value(self) -> QuatMatrix {
        self.value
    }

    pub fn base_fingerprint(&self) -> u64 {
        self.base
    }

    /// Verifies this vector is based at `x`.
    pub fn check_base(&self, x: &QuatMatrix) -> Result<()> {
        if self.base != fingerprint(x) {
            return Err(Error::WrongBasePoint);
        }
        Ok(())
    }

    /// Frobenius norm of the ambient representative (not the metric norm).
    pub fn ambient_norm(&self) -> f64 {
        self.value.norm()
    }

    /// Tangent spaces are real-linear: scaling stays tangent.
    pub fn scale(&self, a: f64) -> TangentVector {
        TangentVector {
            base: self.base,
            value: &self.value * a,
        }
    }

    /// `self + coeff · other`, requiring a common base point.
    pub fn add_scaled(&self, coeff: f64, other: &TangentVector) -> Result<TangentVector> {
        if self.base != other.base {
            return Err(Error::WrongBasePoint);
        }
        Ok(TangentVector {
            base: self.base,
            value: &self.value + &(&other.value * coeff),
        })
    }
}

impl std::ops::Neg for &TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_matrix;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn fingerprint_is_sensitive_to_single_bits() {
        let mut rng = StdRng::seed_from_u64(91);
        let x = random_matrix(&mut rng, 3, 2);
        let f = fingerprint(&x);
        assert_eq!(f, fingerprint(&x.clone()));

        let mut y = x.clone();
        let mut q = y.get(1, 1);
        q.w = f64::from_bits(q.w.to_bits() ^ 1);
        y.set(1, 1, q);
        assert_ne!(f, fingerprint(&y));
    }

    #[test]
    fn combination_requires_same_base() {
        let mut rng = StdRng::seed_from_u64(92);
        let a = TangentVector::new_unchecked(1, random_matrix(&mut rng, 3, 2));
        let b = TangentVector::new_unchecked(2, random_matrix(&mut rng, 3, 2));
        assert!(matches!(
            a.add_scaled(1.0, &b),
            Err(Error::WrongBasePoint)
        ));
        let c = TangentVector::new_unchecked(1, random_matrix(&mut rng, 3, 2));
        assert!(a.add_scaled(-0.5, &c).is_ok());
    }
}
