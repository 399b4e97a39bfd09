//! Dense quaternionic matrices.
//!
//! A matrix `A = A₀ + A₁·i + A₂·j + A₃·k` is stored as four real component
//! planes of identical shape. Component-plane storage keeps every kernel a
//! handful of real matrix operations and maps one-to-one onto the
//! identification ℍ^{m×n} ≅ (ℝ^{m×n})⁴.
//!
//! Beware the noncommutative traps: `(AB)^H = B^H A^H` holds, but
//! `(AB)ᵀ ≠ Bᵀ Aᵀ` and `tr(AB) ≠ tr(BA)` in general. Only the real part of
//! the trace is cyclic.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Dense m×n quaternionic matrix as four real component planes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    comp: [DMatrix<f64>; 4],
}

impl QuatMatrix {
    /// The all-zero matrix. Degenerate shapes (0 rows or columns) are allowed.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QuatMatrix {
            comp: std::array::from_fn(|_| DMatrix::zeros(rows, cols)),
        }
    }

    /// The n×n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.comp[0].fill_with_identity();
        m
    }

    /// Builds a matrix from its four real component planes.
    pub fn from_components(
        c0: DMatrix<f64>,
        c1: DMatrix<f64>,
        c2: DMatrix<f64>,
        c3: DMatrix<f64>,
    ) -> Result<Self> {
        let shape = c0.shape();
        for (l, c) in [&c1, &c2, &c3].iter().enumerate() {
            if c.shape() != shape {
                return Err(Error::Shape(format!(
                    "component {} has shape {:?}, expected {:?}",
                    l + 1,
                    c.shape(),
                    shape
                )));
            }
        }
        Ok(QuatMatrix {
            comp: [c0, c1, c2, c3],
        })
    }

    /// A purely real quaternionic matrix.
    pub fn from_real(m: DMatrix<f64>) -> Self {
        let (r, c) = m.shape();
        let mut out = Self::zeros(r, c);
        out.comp[0] = m;
        out
    }

    /// Entry-wise construction.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = Self::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn diagonal_real(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (r, &d) in diag.iter().enumerate() {
            m.comp[0][(r, r)] = d;
        }
        m
    }

    /// Matrix with all four component planes drawn i.i.d. standard normal.
    ///
    /// The fill order (component plane, then column-major within the plane)
    /// is part of the determinism contract for seeded generators.
    pub fn standard_normal<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for l in 0..4 {
            for v in m.comp[l].iter_mut() {
                *v = rng.sample(StandardNormal);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.comp[0].nrows()
    }

    pub fn cols(&self) -> usize {
        self.comp[0].ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.comp[0].shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Component plane `l` (0 = real, 1 = i, 2 = j, 3 = k).
    pub fn component(&self, l: usize) -> &DMatrix<f64> {
        &self.comp[l]
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        Quaternion::new(
            self.comp[0][(r, c)],
            self.comp[1][(r, c)],
            self.comp[2][(r, c)],
            self.comp[3][(r, c)],
        )
    }

    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.comp[0][(r, c)] = q.w;
        self.comp[1][(r, c)] = q.x;
        self.comp[2][(r, c)] = q.y;
        self.comp[3][(r, c)] = q.z;
    }

    /// Column `c` as an n×1 matrix.
    pub fn column(&self, c: usize) -> QuatMatrix {
        QuatMatrix {
            comp: std::array::from_fn(|l| {
                DMatrix::from_fn(self.rows(), 1, |r, _| self.comp[l][(r, c)])
            }),
        }
    }

    /// True when every component of every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.comp.iter().all(|c| c.iter().all(|&v| v == 0.0))
    }

    /// Matrix product with quaternion entry products taken in left-to-right
    /// order: `(AB)_{rs} = Σ_t A_{rt} B_{ts}`.
    pub fn matmul(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::Shape(format!(
                "matmul: inner dimensions do not match ({}x{} times {}x{})",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        let (a, b) = (&self.comp, &rhs.comp);
        let mut out = QuatMatrix::zeros(self.rows(), rhs.cols());
        // Sixteen real GEMMs with the Hamilton signs.
        let terms: [[(f64, usize, usize); 4]; 4] = [
            [(1.0, 0, 0), (-1.0, 1, 1), (-1.0, 2, 2), (-1.0, 3, 3)],
            [(1.0, 0, 1), (1.0, 1, 0), (1.0, 2, 3), (-1.0, 3, 2)],
            [(1.0, 0, 2), (1.0, 2, 0), (1.0, 3, 1), (-1.0, 1, 3)],
            [(1.0, 0, 3), (1.0, 3, 0), (1.0, 1, 2), (-1.0, 2, 1)],
        ];
        for (l, row) in terms.iter().enumerate() {
            for &(sign, la, lb) in row {
                out.comp[l].gemm(sign, &a[la], &b[lb], 1.0);
            }
        }
        Ok(out)
    }

    /// Hermitian conjugate `A^H = A₀ᵀ − A₁ᵀ i − A₂ᵀ j − A₃ᵀ k`.
    pub fn adjoint(&self) -> QuatMatrix {
        QuatMatrix {
            comp: [
                self.comp[0].transpose(),
                -self.comp[1].transpose(),
                -self.comp[2].transpose(),
                -self.comp[3].transpose(),
            ],
        }
    }

    /// Hermitian part `(A + A^H)/2` of a square matrix.
    pub fn her_part(&self) -> Result<QuatMatrix> {
        self.require_square("her_part")?;
        Ok((self + &self.adjoint()) * 0.5)
    }

    /// Skew-Hermitian part `(A − A^H)/2` of a square matrix.
    pub fn skew_part(&self) -> Result<QuatMatrix> {
        self.require_square("skew_part")?;
        Ok((self - &self.adjoint()) * 0.5)
    }

    /// The real inner product `⟨X, Y⟩ = re(tr(X^H Y)) = Σ_l tr(X_lᵀ Y_l)`.
    pub fn re_trace_inner(&self, rhs: &QuatMatrix) -> Result<f64> {
        if self.shape() != rhs.shape() {
            return Err(Error::Shape(format!(
                "re_trace_inner: shapes {:?} and {:?} differ",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok((0..4).map(|l| self.comp[l].dot(&rhs.comp[l])).sum())
    }

    /// Frobenius norm `sqrt(⟨A, A⟩)`.
    pub fn norm(&self) -> f64 {
        self.comp
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Trace of a square matrix (a quaternion; only its real part is cyclic).
    pub fn trace(&self) -> Result<Quaternion> {
        self.require_square("trace")?;
        let mut t = Quaternion::ZERO;
        for r in 0..self.rows() {
            t += self.get(r, r);
        }
        Ok(t)
    }

    /// Right-multiplication by a real diagonal: column `c` is scaled by
    /// `weights[c]`.
    pub fn scale_columns(&self, weights: &[f64]) -> Result<QuatMatrix> {
        if weights.len() != self.cols() {
            return Err(Error::Shape(format!(
                "scale_columns: {} weights for {} columns",
                weights.len(),
                self.cols()
            )));
        }
        let mut out = self.clone();
        for l in 0..4 {
            for (c, &w) in weights.iter().enumerate() {
                out.comp[l].column_mut(c).scale_mut(w);
            }
        }
        Ok(out)
    }

    /// Off-diagonal Frobenius mass of a square matrix.
    pub fn offdiag_norm(&self) -> Result<f64> {
        self.require_square("offdiag_norm")?;
        let mut sum = 0.0;
        for c in 0..self.cols() {
            for r in 0..self.rows() {
                if r != c {
                    sum += self.get(r, c).abs_sq();
                }
            }
        }
        Ok(sum.sqrt())
    }

    fn require_square(&self, op: &str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "{op}: matrix is {}x{}, expected square",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

impl std::ops::Add for &QuatMatrix {
    type Output = QuatMatrix;
    fn add(self, rhs: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.shape(), rhs.shape(), "QuatMatrix add: shape mismatch");
        QuatMatrix {
            comp: std::array::from_fn(|l| &self.comp[l] + &rhs.comp[l]),
        }
    }
}

impl std::ops::Sub for &QuatMatrix {
    type Output = QuatMatrix;
    fn sub(self, rhs: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.shape(), rhs.shape(), "QuatMatrix sub: shape mismatch");
        QuatMatrix {
            comp: std::array::from_fn(|l| &self.comp[l] - &rhs.comp[l]),
        }
    }
}

impl std::ops::Neg for &QuatMatrix {
    type Output = QuatMatrix;
    fn neg(self) -> QuatMatrix {
        QuatMatrix {
            comp: std::array::from_fn(|l| -&self.comp[l]),
        }
    }
}

impl std::ops::Mul<f64> for &QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, s: f64) -> QuatMatrix {
        QuatMatrix {
            comp: std::array::from_fn(|l| &self.comp[l] * s),
        }
    }
}

impl std::ops::Mul<f64> for QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, s: f64) -> QuatMatrix {
        &self * s
    }
}
