//! Dense square complex matrices with a dual numeric backend.
//!
//! A [`ComplexMatrix`] is either float-backed ([`Complex64`] entries) or
//! exact-backed ([`GaussianRational`] entries). The backend is chosen at
//! construction; mixing backends in any operation is an error, never a silent
//! promotion. Exact entries stay normalized after every operation.
//!
//! Vectorization uses column stacking throughout: the length-n² vector of an
//! n×n matrix holds entry (i, j) at index `j·n + i`. Every superoperator
//! built by this crate assumes that convention, via the identity
//! `vec(A·X·B) = (Bᵀ ⊗ A)·vec(X)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{ComplexScalar, GaussianRational};
use crate::Result;

/// Numeric backend tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Float,
    Exact,
}

/// Entry operations shared by the two backends.
#[doc(hidden)]
pub trait ScalarOps:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn conj(&self) -> Self;
    /// |z|² as f64; approximate on the exact backend, used only for norms.
    fn abs2(&self) -> f64;
}

impl ScalarOps for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn abs2(&self) -> f64 {
        self.norm_sqr()
    }
}

impl ScalarOps for GaussianRational {
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn abs2(&self) -> f64 {
        self.approx().norm_sqr()
    }
}

/// Row-major dense square storage, monomorphic per backend. Exposed only so
/// the [`ComplexMatrix`] variants can carry it; construct and mutate through
/// [`ComplexMatrix`] instead.
#[doc(hidden)]
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    pub(crate) n: usize,
    pub(crate) entries: Vec<T>,
}

impl<T: ScalarOps> Dense<T> {
    pub(crate) fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix order must be positive");
        Self {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = T::one();
        }
        m
    }

    pub(crate) fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRows {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    pub(crate) fn add(&self, rhs: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Self { n: self.n, entries }
    }

    pub(crate) fn sub(&self, rhs: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Self { n: self.n, entries }
    }

    pub(crate) fn matmul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        out
    }

    /// `self − λI`.
    pub(crate) fn shift(&self, lambda: &T) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            let cur = out.get(i, i).clone();
            out.set(i, i, cur - lambda.clone());
        }
        out
    }

    pub(crate) fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (self.n, rhs.n);
        let n = p * q;
        let mut out = Self::zeros(n);
        for i in 0..p {
            for j in 0..p {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        out.set(i * q + k, j * q + l, a.clone() * rhs.get(k, l).clone());
                    }
                }
            }
        }
        out
    }

    pub(crate) fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    pub(crate) fn conj(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| e.conj()).collect(),
        }
    }

    pub(crate) fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub(crate) fn scale(&self, c: &T) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| c.clone() * e.clone()).collect(),
        }
    }

    pub(crate) fn neg(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
        }
    }

    pub(crate) fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    /// Column-stacking vectorization: output index `j·n + i` holds entry (i, j).
    pub(crate) fn vectorize(&self) -> Vec<T> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub(crate) fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = T::zero();
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * v[j].clone();
            }
            out.push(acc);
        }
        out
    }

    pub(crate) fn fro_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.abs2()).sum::<f64>().sqrt()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

impl Dense<Complex64> {
    pub(crate) fn to_dmatrix(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| *self.get(i, j))
    }
}

/// Dense square complex matrix over one of the two backends.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexMatrix {
    Float(Dense<Complex64>),
    Exact(Dense<GaussianRational>),
}

use ComplexMatrix as M;

/// Applies one generic [`Dense`] expression to both backend variants of one
/// or two matrices, returning [`Error::BackendMismatch`] on mixed operands.
macro_rules! on_both {
    ($a:expr, |$m:ident| $body:expr) => {
        match $a {
            M::Float($m) => M::Float($body),
            M::Exact($m) => M::Exact($body),
        }
    };
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match ($a, $b) {
            (M::Float($x), M::Float($y)) => Ok(M::Float($body)),
            (M::Exact($x), M::Exact($y)) => Ok(M::Exact($body)),
            _ => Err(Error::BackendMismatch),
        }
    };
}

impl ComplexMatrix {
    pub fn order(&self) -> usize {
        match self {
            M::Float(m) => m.n,
            M::Exact(m) => m.n,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            M::Float(_) => Backend::Float,
            M::Exact(_) => Backend::Exact,
        }
    }

    pub fn zeros(n: usize, backend: Backend) -> Self {
        match backend {
            Backend::Float => M::Float(Dense::zeros(n)),
            Backend::Exact => M::Exact(Dense::zeros(n)),
        }
    }

    pub fn identity(n: usize, backend: Backend) -> Self {
        match backend {
            Backend::Float => M::Float(Dense::identity(n)),
            Backend::Exact => M::Exact(Dense::identity(n)),
        }
    }

    pub fn from_rows_float(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        Ok(M::Float(Dense::from_rows(rows)?))
    }

    pub fn from_rows_exact(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        Ok(M::Exact(Dense::from_rows(rows)?))
    }

    /// Real diagonal matrix on the float backend.
    pub fn diagonal_float(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Dense::<Complex64>::zeros(n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(*d, 0.0));
        }
        M::Float(m)
    }

    /// Diagonal matrix from backend-tagged scalars; all must share a backend.
    pub fn diagonal(diag: &[ComplexScalar]) -> Result<Self> {
        let first = diag.first().ok_or(Error::EmptyMatrix)?;
        let n = diag.len();
        match first.backend() {
            Backend::Float => {
                let mut m = Dense::<Complex64>::zeros(n);
                for (i, d) in diag.iter().enumerate() {
                    match d {
                        ComplexScalar::Float(z) => m.set(i, i, *z),
                        ComplexScalar::Exact(_) => return Err(Error::BackendMismatch),
                    }
                }
                Ok(M::Float(m))
            }
            Backend::Exact => {
                let mut m = Dense::<GaussianRational>::zeros(n);
                for (i, d) in diag.iter().enumerate() {
                    match d {
                        ComplexScalar::Exact(g) => m.set(i, i, g.clone()),
                        ComplexScalar::Float(_) => return Err(Error::BackendMismatch),
                    }
                }
                Ok(M::Exact(m))
            }
        }
    }

    /// Matrix unit: a single 1 at (row, col), zeros elsewhere.
    pub fn matrix_unit(n: usize, row: usize, col: usize, backend: Backend) -> Self {
        assert!(row < n && col < n, "matrix unit index out of range");
        let mut m = Self::zeros(n, backend);
        match &mut m {
            M::Float(d) => d.set(row, col, Complex64::new(1.0, 0.0)),
            M::Exact(d) => d.set(row, col, GaussianRational::one()),
        }
        m
    }

    /// Upper-bidiagonal Jordan block of the given size: `eigenvalue` on the
    /// diagonal, ones on the superdiagonal.
    pub fn jordan_block(size: usize, eigenvalue: &ComplexScalar) -> Self {
        assert!(size > 0, "jordan block size must be positive");
        match eigenvalue {
            ComplexScalar::Float(z) => {
                let mut m = Dense::<Complex64>::zeros(size);
                for i in 0..size {
                    m.set(i, i, *z);
                    if i + 1 < size {
                        m.set(i, i + 1, Complex64::new(1.0, 0.0));
                    }
                }
                M::Float(m)
            }
            ComplexScalar::Exact(g) => {
                let mut m = Dense::<GaussianRational>::zeros(size);
                for i in 0..size {
                    m.set(i, i, g.clone());
                    if i + 1 < size {
                        m.set(i, i + 1, GaussianRational::one());
                    }
                }
                M::Exact(m)
            }
        }
    }

    /// Block-diagonal direct sum. All blocks must share one backend.
    pub fn direct_sum(blocks: &[ComplexMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or(Error::EmptyMatrix)?;
        let n: usize = blocks.iter().map(|b| b.order()).sum();
        let mut out = Self::zeros(n, first.backend());
        let mut offset = 0;
        for b in blocks {
            if b.backend() != first.backend() {
                return Err(Error::BackendMismatch);
            }
            let k = b.order();
            for i in 0..k {
                for j in 0..k {
                    out.set(offset + i, offset + j, b.get(i, j))?;
                }
            }
            offset += k;
        }
        Ok(out)
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexScalar {
        match self {
            M::Float(m) => ComplexScalar::Float(*m.get(i, j)),
            M::Exact(m) => ComplexScalar::Exact(m.get(i, j).clone()),
        }
    }

    /// Overwrites one entry. Errors when the scalar's backend differs.
    pub fn set(&mut self, i: usize, j: usize, v: ComplexScalar) -> Result<()> {
        match (self, v) {
            (M::Float(m), ComplexScalar::Float(z)) => {
                m.set(i, j, z);
                Ok(())
            }
            (M::Exact(m), ComplexScalar::Exact(g)) => {
                m.set(i, j, g);
                Ok(())
            }
            _ => Err(Error::BackendMismatch),
        }
    }

    fn check_order(&self, rhs: &Self) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        Ok(())
    }

    /// Entrywise sum. Errors on order or backend mismatch.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        on_both!(self, rhs, |a, b| a.add(b))
    }

    /// Entrywise difference. Errors on order or backend mismatch.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        on_both!(self, rhs, |a, b| a.sub(b))
    }

    /// Matrix product. Errors on order or backend mismatch.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        on_both!(self, rhs, |a, b| a.matmul(b))
    }

    /// `self − λI`. Errors if the scalar's backend differs.
    pub fn shift(&self, lambda: &ComplexScalar) -> Result<Self> {
        match (self, lambda) {
            (M::Float(m), ComplexScalar::Float(z)) => Ok(M::Float(m.shift(z))),
            (M::Exact(m), ComplexScalar::Exact(g)) => Ok(M::Exact(m.shift(g))),
            _ => Err(Error::BackendMismatch),
        }
    }

    /// Kronecker product of order `self.order() · rhs.order()`.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        on_both!(self, rhs, |a, b| a.kron(b))
    }

    /// Scalar multiple. Errors if the scalar's backend differs.
    pub fn scale(&self, c: &ComplexScalar) -> Result<Self> {
        match (self, c) {
            (M::Float(m), ComplexScalar::Float(z)) => Ok(M::Float(m.scale(z))),
            (M::Exact(m), ComplexScalar::Exact(g)) => Ok(M::Exact(m.scale(g))),
            _ => Err(Error::BackendMismatch),
        }
    }

    pub fn neg(&self) -> Self {
        on_both!(self, |m| m.neg())
    }

    pub fn transpose(&self) -> Self {
        on_both!(self, |m| m.transpose())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        on_both!(self, |m| m.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        on_both!(self, |m| m.adjoint())
    }

    pub fn trace(&self) -> ComplexScalar {
        match self {
            M::Float(m) => ComplexScalar::Float(m.trace()),
            M::Exact(m) => ComplexScalar::Exact(m.trace()),
        }
    }

    /// Column-stacking vectorization into a length-n² vector.
    pub fn vectorize(&self) -> ComplexVector {
        match self {
            M::Float(m) => ComplexVector::Float(m.vectorize()),
            M::Exact(m) => ComplexVector::Exact(m.vectorize()),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vector(&self, v: &ComplexVector) -> Result<ComplexVector> {
        match (self, v) {
            (M::Float(m), ComplexVector::Float(v)) => {
                if v.len() != m.n {
                    return Err(Error::OrderMismatch {
                        left: m.n,
                        right: v.len(),
                    });
                }
                Ok(ComplexVector::Float(m.mul_vec(v)))
            }
            (M::Exact(m), ComplexVector::Exact(v)) => {
                if v.len() != m.n {
                    return Err(Error::OrderMismatch {
                        left: m.n,
                        right: v.len(),
                    });
                }
                Ok(ComplexVector::Exact(m.mul_vec(v)))
            }
            _ => Err(Error::BackendMismatch),
        }
    }

    /// Frobenius norm; approximate on the exact backend.
    pub fn fro_norm(&self) -> f64 {
        match self {
            M::Float(m) => m.fro_norm(),
            M::Exact(m) => m.fro_norm(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            M::Float(m) => m.is_zero(),
            M::Exact(m) => m.is_zero(),
        }
    }

    /// Largest entrywise absolute difference, as f64. Errors on mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        self.check_order(rhs)?;
        let d = self.sub(rhs)?;
        Ok(match &d {
            M::Float(m) => m.entries.iter().map(|e| e.abs2().sqrt()).fold(0.0, f64::max),
            M::Exact(m) => m.entries.iter().map(|e| e.abs2().sqrt()).fold(0.0, f64::max),
        })
    }

    pub(crate) fn as_float(&self) -> Option<&Dense<Complex64>> {
        match self {
            M::Float(m) => Some(m),
            M::Exact(_) => None,
        }
    }
}

/// Column vector over one of the two backends, produced by vectorization.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexVector {
    Float(Vec<Complex64>),
    Exact(Vec<GaussianRational>),
}

impl ComplexVector {
    pub fn len(&self) -> usize {
        match self {
            ComplexVector::Float(v) => v.len(),
            ComplexVector::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> ComplexScalar {
        match self {
            ComplexVector::Float(v) => ComplexScalar::Float(v[i]),
            ComplexVector::Exact(v) => ComplexScalar::Exact(v[i].clone()),
        }
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        match (self, rhs) {
            (ComplexVector::Float(a), ComplexVector::Float(b)) => {
                if a.len() != b.len() {
                    return Err(Error::OrderMismatch {
                        left: a.len(),
                        right: b.len(),
                    });
                }
                Ok(a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max))
            }
            (ComplexVector::Exact(a), ComplexVector::Exact(b)) => {
                if a.len() != b.len() {
                    return Err(Error::OrderMismatch {
                        left: a.len(),
                        right: b.len(),
                    });
                }
                Ok(a.iter()
                    .zip(b)
                    .map(|(x, y)| (x.clone() - y.clone()).approx().norm())
                    .fold(0.0, f64::max))
            }
            _ => Err(Error::BackendMismatch),
        }
    }
}
