//! Small dense matrices over integers, rationals and floats.
//!
//! The matrices in this crate are tiny (Cartan matrices, weight-space Gram
//! blocks, representation matrices of dimension at most a few dozen), so a
//! plain row-major `Vec` is all that is needed.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{Num, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows.iter().take(self.rows)).finish()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a.clone() * other[(k, c)].clone();
                    let slot = &mut out[(r, c)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|x| x.clone() * s.clone())
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix<T>) -> Matrix<T> {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }
}

impl Matrix<i64> {
    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant_int(&self) -> i64 {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        (sign * m[n - 1][n - 1]) as i64
    }

    pub fn to_scalar<T: Scalar>(&self) -> Matrix<T> {
        self.map(|&x| T::from_i64(x))
    }
}

impl<T: Scalar> Matrix<T> {
    /// Gauss-Jordan inverse with largest-magnitude pivoting. Returns `None`
    /// for singular input (exact zero pivot).
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<T>::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .abs_val()
                        .partial_cmp(&a[(y, col)].abs_val())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })?;
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / p.clone();
                inv[(col, c)] = inv[(col, c)].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in 0..n {
                    let da = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - da;
                    let di = factor.clone() * inv[(col, c)].clone();
                    inv[(r, c)] = inv[(r, c)].clone() - di;
                }
            }
        }
        Some(inv)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        self.inverse().map(|inv| inv.mul_vec(rhs))
    }

    /// Determinant by elimination in the field `T`.
    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return T::zero();
            };
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / p.clone();
                for c in col..n {
                    let d = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - d;
                }
            }
        }
        det
    }

    /// Determinants of the leading principal submatrices, sizes `1..=n`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).determinant()
            })
            .collect()
    }

    /// Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(|m| *m > T::zero())
    }

    /// `u^T self v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        let mv = self.mul_vec(v);
        T::sum_all(u.iter().zip(mv).map(|(a, b)| a.clone() * b))
    }
}

/// Dot product of two equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    T::sum_all(a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()))
}
