//! Dense complex linear algebra primitives shared by every other module.
//!
//! [`ComplexMatrix`] is the universal operator carrier: a dense matrix of
//! `Complex<f64>` entries with construction-time finiteness checks.
//! [`SpaceDecomposition`] names the orthogonal blocks of an ambient space
//! (the original space `H` always comes first), and [`Tolerance`] carries
//! the comparison thresholds used throughout.

mod factor;

pub use factor::{
    defect, extend_isometry_to_unitary, general_eigenvalues, hermitian_eigen, matrix_exp,
    numerical_kernel, orthonormal_complement, principal_sqrt_psd, psd_check, span_orthonormalize,
    PsdReport,
};

use crate::error::{DilationError, Result};
use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Scalar = Complex<f64>;

/// Shorthand for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Scalar {
    Complex::new(re, im)
}

/// Shorthand for a real scalar promoted to complex.
#[inline]
pub fn re(x: f64) -> Scalar {
    Complex::new(x, 0.0)
}

/// Comparison threshold. Strictly positive by construction.
///
/// The default (1e-9) is the equality-residual tolerance; rank and kernel
/// decisions use the looser [`Tolerance::rank`] (1e-7).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const EQUALITY: f64 = 1e-9;
    pub const RANK: f64 = 1e-7;

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Tolerance(value))
        } else {
            Err(DilationError::InvalidParameter {
                context: format!("tolerance must be a positive finite real, got {value}"),
            })
        }
    }

    /// Default tolerance for rank / kernel decisions.
    pub fn rank() -> Self {
        Tolerance(Self::RANK)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Self::EQUALITY)
    }
}

/// Dense complex matrix with explicit row/column dimensions.
///
/// Entries are guaranteed finite past construction. Storage is delegated to
/// `nalgebra`; the public constructors speak row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Scalar>,
}

impl ComplexMatrix {
    /// Build from a row-major entry list. Fails on a count mismatch or any
    /// non-finite entry.
    pub fn from_rows_vec(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(DilationError::DimensionMismatch {
                context: "entry count must equal rows * cols",
                got: entries.len(),
                expected: rows * cols,
            });
        }
        let m = ComplexMatrix {
            inner: DMatrix::from_row_slice(rows, cols, &entries),
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Build from real row-major entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_rows_vec(rows, cols, entries.iter().map(|&x| re(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        ComplexMatrix { inner: m }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_diagonal(&diag.iter().map(|&x| re(x)).collect::<Vec<_>>())
    }

    /// Standard basis column e_i as an n-by-1 matrix.
    pub fn basis_column(dim: usize, i: usize) -> Self {
        let mut m = DMatrix::zeros(dim, 1);
        m[(i, 0)] = re(1.0);
        ComplexMatrix { inner: m }
    }

    pub(crate) fn from_inner(inner: DMatrix<Scalar>) -> Self {
        ComplexMatrix { inner }
    }

    pub(crate) fn inner(&self) -> &DMatrix<Scalar> {
        &self.inner
    }

    fn check_finite(&self) -> Result<()> {
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                let z = self.inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(DilationError::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.rows() == 0 || self.cols() == 0
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(DilationError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.inner[(i, j)] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix {
            inner: self.inner.adjoint(),
        }
    }

    pub fn scale(&self, factor: Scalar) -> Self {
        ComplexMatrix {
            inner: self.inner.map(|z| z * factor),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(re(factor))
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.inner.norm()
    }

    /// Spectral norm (largest singular value). Zero for empty matrices.
    pub fn norm_spectral(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.inner
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Copy of the (r0..r1, c0..c1) block.
    pub fn sub_matrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r1 >= r0 && c1 >= c0 && r1 <= self.rows() && c1 <= self.cols());
        ComplexMatrix {
            inner: self.inner.view((r0, c0), (r1 - r0, c1 - c0)).into_owned(),
        }
    }

    pub fn column(&self, j: usize) -> Self {
        self.sub_matrix(0, self.rows(), j, j + 1)
    }

    /// Overwrite the block with upper-left corner (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ComplexMatrix) {
        assert!(r0 + block.rows() <= self.rows() && c0 + block.cols() <= self.cols());
        for j in 0..block.cols() {
            for i in 0..block.rows() {
                self.inner[(r0 + i, c0 + j)] = block.inner[(i, j)];
            }
        }
    }

    /// Horizontal concatenation. All inputs must share a row count.
    pub fn hstack(parts: &[&ComplexMatrix]) -> Self {
        let rows = parts.first().map(|m| m.rows()).unwrap_or(0);
        let cols = parts.iter().map(|m| m.cols()).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows(), rows, "hstack row mismatch");
            out.set_block(0, c0, p);
            c0 += p.cols();
        }
        out
    }

    /// Vertical concatenation. All inputs must share a column count.
    pub fn vstack(parts: &[&ComplexMatrix]) -> Self {
        let cols = parts.first().map(|m| m.cols()).unwrap_or(0);
        let rows = parts.iter().map(|m| m.rows()).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols(), cols, "vstack column mismatch");
            out.set_block(r0, 0, p);
            r0 += p.rows();
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(parts: &[&ComplexMatrix]) -> Self {
        let rows = parts.iter().map(|m| m.rows()).sum();
        let cols = parts.iter().map(|m| m.cols()).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows();
            c0 += p.cols();
        }
        out
    }

    /// Kronecker (tensor) product.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix {
            inner: self.inner.kronecker(&other.inner),
        }
    }

    /// Matrix power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, n: usize) -> Self {
        assert!(self.is_square());
        let mut acc = ComplexMatrix::identity(self.rows());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse together with the 2-norm condition number of the input.
    ///
    /// Fails with the smallest singular value when the matrix is numerically
    /// singular (relative to the largest).
    pub fn inverse_with_condition(&self) -> Result<(Self, f64)> {
        self.require_square()?;
        if self.rows() == 0 {
            return Ok((self.clone(), 1.0));
        }
        let svals = self.inner.clone().singular_values();
        let smax = svals.iter().cloned().fold(0.0, f64::max);
        let smin = svals.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin <= 1e-14 * smax.max(1.0) {
            return Err(DilationError::SingularResolvent { sigma_min: smin });
        }
        let inv = self
            .inner
            .clone()
            .lu()
            .try_inverse()
            .ok_or(DilationError::SingularResolvent { sigma_min: smin })?;
        Ok((ComplexMatrix { inner: inv }, smax / smin))
    }

    /// Spectral-norm commutation residual ||AB - BA||.
    pub fn commutator_norm(&self, other: &ComplexMatrix) -> f64 {
        (&(self * other) - &(other * self)).norm_spectral()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            inner: -self.inner.clone(),
        }
    }
}

/// JSON wire format: `{"rows": R, "cols": C, "data": [[re, im], ...]}`,
/// row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut data = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let z = self.get(i, j);
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            data,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let entries: Vec<Scalar> = raw.data.iter().map(|&[r, i]| c(r, i)).collect();
        ComplexMatrix::from_rows_vec(raw.rows, raw.cols, entries).map_err(serde::de::Error::custom)
    }
}

/// Ordered orthogonal-block description of an ambient space.
///
/// The first block is always the original space `H`; projections onto `H`
/// are block selections against this layout. Zero-dimensional blocks are
/// allowed (degenerate subspaces).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDecomposition {
    names: Vec<String>,
    dims: Vec<usize>,
}

impl SpaceDecomposition {
    pub fn new(names: Vec<String>, dims: Vec<usize>) -> Result<Self> {
        if names.len() != dims.len() {
            return Err(DilationError::DimensionMismatch {
                context: "block names and dims must align",
                got: names.len(),
                expected: dims.len(),
            });
        }
        if names.first().map(|s| s.as_str()) != Some("H") {
            return Err(DilationError::InvalidParameter {
                context: "first block must be labeled \"H\"".into(),
            });
        }
        Ok(SpaceDecomposition { names, dims })
    }

    /// Convenience constructor: `H` of dimension `h` followed by `count`
    /// blocks named `prefix1..prefixcount`, each of dimension `block_dim`.
    pub fn h_with_blocks(h: usize, prefix: &str, count: usize, block_dim: usize) -> Self {
        let mut names = vec!["H".to_string()];
        let mut dims = vec![h];
        for k in 1..=count {
            names.push(format!("{prefix}{k}"));
            dims.push(block_dim);
        }
        SpaceDecomposition { names, dims }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn h_dim(&self) -> usize {
        self.dims[0]
    }

    /// Index range of the `k`-th block inside the ambient space.
    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.dims[..k].iter().sum();
        start..start + self.dims[k]
    }

    /// Isometric embedding of H into the ambient space (total x h).
    pub fn embed_h(&self) -> ComplexMatrix {
        let total = self.total_dim();
        let h = self.h_dim();
        let mut m = ComplexMatrix::zeros(total, h);
        m.set_block(0, 0, &ComplexMatrix::identity(h));
        m
    }

    /// Compression of an ambient operator to H (the top-left h x h block).
    pub fn compress_to_h(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let h = self.h_dim();
        op.sub_matrix(0, h, 0, h)
    }

    /// Orthogonal projector onto the union of blocks `keep` (by index).
    pub fn projector_onto(&self, keep: &[usize]) -> ComplexMatrix {
        let total = self.total_dim();
        let mut p = ComplexMatrix::zeros(total, total);
        for &k in keep {
            for i in self.block_range(k) {
                p.set(i, i, re(1.0));
            }
        }
        p
    }

    /// Projector onto everything except the last `sink_count` blocks.
    pub fn interior_projector(&self, sink_count: usize) -> ComplexMatrix {
        let keep: Vec<usize> = (0..self.block_count().saturating_sub(sink_count)).collect();
        self.projector_onto(&keep)
    }
}
