//! Dense square complex matrices.
//!
//! [`ComplexMatrix`] wraps an `nalgebra` matrix and enforces squareness and
//! finiteness on construction. Spectral work (Hermitian eigensystems, singular
//! values, Schatten norms and the real/imaginary-time exponentials) lives here
//! as well, so the rest of the crate never touches `nalgebra` directly.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max-entry tolerance on `|H - H^+|` accepted by the Hermitian routines.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let z = m[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "identity of dimension zero");
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero matrix of dimension zero");
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        Self::from_fn(diag.len(), |r, c| if r == c { diag[r] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let diag: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    // Results of arithmetic on valid matrices; squareness holds by construction.
    fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Rows as nested vectors, row-major.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::wrap(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok((0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)] * v[c]).sum())
            .collect())
    }

    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        kron(self, other)
    }

    /// Largest `|a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "max_abs_diff on different dimensions"
        );
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|A - A^+|`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.0[(r, c)] - self.0[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_asymmetry() <= tol
    }

    /// Largest `|(A^+ A - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim()))
    }

    /// Singular values, non-negative and sorted descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .0
            .clone()
            .singular_values()
            .iter()
            .map(|s| s.max(0.0))
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Schatten `p`-norm from the singular values.
    pub fn schatten_norm(&self, p: SchattenIndex) -> Result<f64> {
        let sv = self.singular_values();
        match p {
            SchattenIndex::Infinity => Ok(sv.first().copied().unwrap_or(0.0)),
            SchattenIndex::Finite(p) if !(p >= 1.0) => Err(Error::InvalidSchattenIndex(p)),
            SchattenIndex::Finite(2.0) => Ok(sv.iter().map(|s| s * s).sum::<f64>().sqrt()),
            SchattenIndex::Finite(1.0) => Ok(sv.iter().sum()),
            SchattenIndex::Finite(p) => {
                // scale by the largest value so large p cannot overflow
                let top = sv[0];
                if top == 0.0 {
                    return Ok(0.0);
                }
                Ok(top
                    * sv.iter()
                        .map(|s| (s / top).powf(p))
                        .sum::<f64>()
                        .powf(1.0 / p))
            }
        }
    }

    /// Hilbert-Schmidt norm `sqrt(Tr A^+ A)` computed from the entries.
    pub fn hilbert_schmidt_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_eig(&self) -> Result<EigenSystem> {
        hermitian_eig(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        ComplexMatrix::wrap(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix sum dimension mismatch");
        ComplexMatrix::wrap(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "matrix difference dimension mismatch"
        );
        ComplexMatrix::wrap(&self.0 - &rhs.0)
    }
}

/// Kronecker product `a ⊗ b`: entry `(i*db + k, j*db + l)` is `a[i,j] * b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = DMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a.0[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b.0[(k, l)];
                }
            }
        }
    }
    ComplexMatrix::wrap(out)
}

/// Index of a Schatten norm; `Infinity` selects the operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenIndex {
    Finite(f64),
    Infinity,
}

impl SchattenIndex {
    /// Hilbert-Schmidt (Frobenius).
    pub const TWO: SchattenIndex = SchattenIndex::Finite(2.0);
    /// Trace norm.
    pub const ONE: SchattenIndex = SchattenIndex::Finite(1.0);

    /// Validates `p >= 1`; `f64::INFINITY` maps to [`SchattenIndex::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(SchattenIndex::Infinity)
        } else if p >= 1.0 && p.is_finite() {
            Ok(SchattenIndex::Finite(p))
        } else {
            Err(Error::InvalidSchattenIndex(p))
        }
    }

    pub fn is_two(self) -> bool {
        self == Self::TWO
    }
}

impl Default for SchattenIndex {
    fn default() -> Self {
        Self::TWO
    }
}

impl fmt::Display for SchattenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchattenIndex::Finite(p) => write!(f, "{p}"),
            SchattenIndex::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for SchattenIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" | "∞" => Ok(SchattenIndex::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Domain(format!("invalid Schatten index {other:?}")))?;
                Self::new(p)
            }
        }
    }
}

/// Spectral decomposition `H = V diag(λ) V^+` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// `V diag(f(λ)) V^+`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        ComplexMatrix::wrap(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.spectral_map(|l| Complex64::new(l, 0.0))
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let asymmetry = h.max_asymmetry();
    if asymmetry > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// `(H + H^+)/2` after the tolerance check.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenSystem> {
    check_hermitian(h)?;
    let sym = (&h.0 + h.0.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(h.dim(), h.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors: ComplexMatrix::wrap(eigenvectors),
    })
}

/// `exp(-i h t)` for Hermitian `h`.
pub fn evolve_operator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(eig.spectral_map(|lambda| Complex64::from_polar(1.0, -lambda * t)))
}

/// `exp(-beta h)` for Hermitian `h`, i.e. the evolution operator at time `-i beta`.
pub fn imaginary_time_operator(h: &ComplexMatrix, beta: f64) -> Result<ComplexMatrix> {
    if !(beta >= 0.0) {
        return Err(Error::NegativeBeta(beta));
    }
    let eig = hermitian_eig(h)?;
    let out = eig.spectral_map(|lambda| Complex64::new((-beta * lambda).exp(), 0.0));
    // re-validate: exp can overflow for extreme beta * spread
    ComplexMatrix::from_dmatrix(out.0)
}
