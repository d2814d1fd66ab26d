//! Dense exact matrices over `Q` with fraction-free (Bareiss) elimination.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::polyring::binomial;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular matrix")]
    Singular,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), cols, |i, j| BigRational::from_integer(rows[i][j].into()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(BigRational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        }))
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::Shape(format!("{}x{} times vector of {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(BigRational::zero(), |acc, k| acc + self.get(i, k) * &v[k]))
            .collect())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// In-place Bareiss elimination on the leading `n` columns of `a`, carrying
/// any further columns along. Returns the sign of the row permutation, or
/// `None` if the leading block is singular.
fn bareiss(a: &mut Matrix, n: usize) -> Option<i32> {
    let width = a.cols;
    let mut sign = 1;
    let mut prev = BigRational::one();
    for k in 0..n {
        if a.get(k, k).is_zero() {
            let pivot = (k + 1..n).find(|&i| !a.get(i, k).is_zero())?;
            for j in 0..width {
                a.data.swap(k * width + j, pivot * width + j);
            }
            sign = -sign;
        }
        let akk = a.get(k, k).clone();
        for i in k + 1..n {
            let aik = a.get(i, k).clone();
            for j in k + 1..width {
                let v = (a.get(i, j) * &akk - &aik * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, k, BigRational::zero());
        }
        prev = akk;
    }
    Some(sign)
}

pub fn exact_det(a: &Matrix) -> Result<BigRational, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare(a.rows, a.cols));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut work = a.clone();
    Ok(match bareiss(&mut work, n) {
        None => BigRational::zero(),
        Some(sign) => work.get(n - 1, n - 1) * BigRational::from_integer(sign.into()),
    })
}

/// Unique solution of `a·X = b` for a square invertible `a` and matrix `b`.
pub fn solve_matrix(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare(a.rows, a.cols));
    }
    if b.rows != a.rows {
        return Err(LinalgError::Shape(format!("{} rows on the right, {} expected", b.rows, a.rows)));
    }
    let n = a.rows;
    let r = b.cols;
    let mut aug = Matrix::from_fn(n, n + r, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b.get(i, j - n).clone()
        }
    });
    bareiss(&mut aug, n).ok_or(LinalgError::Singular)?;
    if n > 0 && aug.get(n - 1, n - 1).is_zero() {
        return Err(LinalgError::Singular);
    }
    let mut x = Matrix::zeros(n, r);
    for c in 0..r {
        for i in (0..n).rev() {
            let mut acc = aug.get(i, n + c).clone();
            for j in i + 1..n {
                acc -= aug.get(i, j) * x.get(j, c);
            }
            x.set(i, c, acc / aug.get(i, i));
        }
    }
    Ok(x)
}

pub fn exact_solve(a: &Matrix, rhs: &[BigRational]) -> Result<Vec<BigRational>, LinalgError> {
    let b = Matrix::from_fn(rhs.len(), 1, |i, _| rhs[i].clone());
    Ok(solve_matrix(a, &b)?.column(0))
}

pub fn inverse(a: &Matrix) -> Result<Matrix, LinalgError> {
    solve_matrix(a, &Matrix::identity(a.rows))
}

/// The structured binomial matrices of the sequence recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// `(d+1)×(d+1)`, entries `C(2j, k)·2^(2j−k)`.
    Me,
    /// `(d+1)×(d+1)`, entries `C(2j+1, k)·2^(2j+1−k)`.
    Mo,
    /// `d×(d+1)`, entries as `Me`.
    M,
    /// `(d+1)×d`, entries as `Mo`.
    N,
    /// `(d+1)×(d+1)`, entries as `Me`.
    L,
}

/// `C(e, k)·2^(e−k)`, the coefficient of `s^(n−3k)·u^k` in `(−t1)^l·u1^e`.
pub fn basis_entry(e: u64, k: u64) -> BigRational {
    if k > e {
        return BigRational::zero();
    }
    BigRational::from_integer(binomial(e, k) * (BigInt::one() << (e - k)))
}

pub fn build_matrix(kind: MatrixKind, d: usize) -> Matrix {
    let even = |k: usize, j: usize| basis_entry(2 * j as u64, k as u64);
    let odd = |k: usize, j: usize| basis_entry(2 * j as u64 + 1, k as u64);
    match kind {
        MatrixKind::Me | MatrixKind::L => Matrix::from_fn(d + 1, d + 1, even),
        MatrixKind::Mo => Matrix::from_fn(d + 1, d + 1, odd),
        MatrixKind::M => Matrix::from_fn(d, d + 1, even),
        MatrixKind::N => Matrix::from_fn(d + 1, d, odd),
    }
}
