//! Dense row-major matrices over a [`Ring`].
//!
//! Rows and columns of a `(2N₁+1)×(2N₂+1)` matrix are labelled by weights:
//! row `n₁` runs `−N₁..N₁` top to bottom, column `n₂` runs `−N₂..N₂` left to
//! right. The `*_at` accessors take those signed labels.

use alloc::vec::Vec;
use core::fmt;

use crate::radix::{Complex, Ring, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            f.write_str("  ")?;
            for c in 0..self.cols {
                write!(f, "{:?}, ", self.data[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        f.write_str("]")
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: (0..rows * cols).map(|_| T::zero()).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Self { rows: nr, cols: nc, data: rows.into_iter().flatten().collect() }
    }

    /// Column vector.
    pub fn column(v: Vec<T>) -> Self {
        Self { rows: v.len(), cols: 1, data: v }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    /// Row weight `N₁` for an odd row count.
    pub fn row_weight(&self) -> i64 {
        (self.rows as i64 - 1) / 2
    }

    pub fn col_weight(&self) -> i64 {
        (self.cols as i64 - 1) / 2
    }

    /// Entry at weight labels `(n₁, n₂)`.
    pub fn at(&self, n1: i64, n2: i64) -> &T {
        let r = (n1 + self.row_weight()) as usize;
        let c = (n2 + self.col_weight()) as usize;
        self.get(r, c)
    }

    pub fn set_at(&mut self, n1: i64, n2: i64, v: T) {
        let r = (n1 + self.row_weight()) as usize;
        let c = (n2 + self.col_weight()) as usize;
        self.set(r, c, v);
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Matrix product. Panics on a shape mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_structural_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_structural_zero() {
                        continue;
                    }
                    let prod = a.mul_ref(b);
                    let slot = out.get_mut(i, j);
                    *slot = slot.add_ref(&prod);
                }
            }
        }
        out
    }

    /// `self · v` for a vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_structural_zero() && !b.is_structural_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_structural_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|a| if a.is_structural_zero() { T::zero() } else { a.mul_ref(s) })
    }

    /// `self += s·rhs`.
    pub fn axpy(&mut self, s: &T, rhs: &Self) {
        assert_eq!(self.shape(), rhs.shape(), "axpy shape mismatch");
        if s.is_structural_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            if !b.is_structural_zero() {
                *a = a.add_ref(&s.mul_ref(b));
            }
        }
    }

    /// Frobenius pairing `tr(selfᵀ·rhs) = Σ aᵢⱼbᵢⱼ`.
    pub fn frobenius_dot(&self, rhs: &Self) -> T {
        assert_eq!(self.shape(), rhs.shape(), "frobenius shape mismatch");
        let mut acc = T::zero();
        for (a, b) in self.data.iter().zip(&rhs.data) {
            if !a.is_structural_zero() && !b.is_structural_zero() {
                acc = acc.add_ref(&a.mul_ref(b));
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add_ref(self.get(i, i));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn approx_eq(&self, rhs: &Self) -> bool {
        self.shape() == rhs.shape() && self.data.iter().zip(&rhs.data).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.get(r, c).approx_eq(self.get(c, r))))
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[Self]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        assert!(parts.iter().all(|m| m.cols == cols), "vstack column mismatch");
        Self {
            rows: parts.iter().map(|m| m.rows).sum(),
            cols,
            data: parts.iter().flat_map(|m| m.data.iter().cloned()).collect(),
        }
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn to_complex(&self) -> Matrix<Complex<S>> {
        self.map(|a| Complex::from_real(a.clone()))
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|a| a.approx())
    }

    /// Checks `selfᵀ·self = I`.
    pub fn is_orthogonal(&self) -> bool {
        self.is_square() && self.transpose().matmul(self).approx_eq(&Self::identity(self.rows))
    }
}

impl<S: Scalar> Matrix<Complex<S>> {
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn real_part(&self) -> Matrix<S> {
        self.map(|a| a.re.clone())
    }

    pub fn imag_part(&self) -> Matrix<S> {
        self.map(|a| a.im.clone())
    }

    pub fn scale_real(&self, s: &S) -> Self {
        self.map(|a| a.scale(s))
    }
}
