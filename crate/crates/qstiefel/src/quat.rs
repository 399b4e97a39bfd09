//! Quaternion scalars.
//!
//! A quaternion `q = w + x·i + y·j + z·k` over `f64` components, with the
//! Hamilton product generated by `i² = j² = k² = ijk = −1`. Multiplication is
//! noncommutative (`ij = k = −ji`), so the order of factors matters
//! everywhere in this crate.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// A quaternion with real components `(w, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// Embeds a real number.
    pub const fn from_real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// The conjugate `w − x·i − y·j − z·k`.
    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// The real part `w`.
    pub fn re(&self) -> f64 {
        self.w
    }

    /// Squared absolute value `w² + x² + y² + z²`.
    pub fn abs_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Absolute value `|q| = sqrt(q q̄)`.
    pub fn abs(&self) -> f64 {
        self.abs_sq().sqrt()
    }

    /// True when every component is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.w == 0.0 && self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    /// Multiplicative inverse `q̄ / |q|²`.
    ///
    /// Returns `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.abs_sq();
        if n == 0.0 {
            None
        } else {
            Some(self.conj() * (1.0 / n))
        }
    }

    /// `q / |q|`, or `None` for zero.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.abs();
        if n == 0.0 {
            None
        } else {
            Some(*self * (1.0 / n))
        }
    }

    /// Components in `(w, x, y, z)` order.
    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::from_real(w)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product. Noncommutative: `p * q != q * p` in general.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y + p.y * q.w + p.z * q.x - p.x * q.z,
            p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x,
        )
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, rhs: Quaternion) {
        *self = *self * rhs;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl std::fmt::Display for Quaternion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:+e}{:+e}i{:+e}j{:+e}k",
            self.w, self.x, self.y, self.z
        )
    }
}
