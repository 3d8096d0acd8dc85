//! Fraction-free integer linear algebra.
//!
//! All elimination here is Bareiss-style: every intermediate entry is a
//! minor of the input, every division is exact, and no rational numbers
//! appear. That keeps determinants, solves and principal minors exact over
//! any [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::LengthMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Leading `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let mut b = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                b.set(i, j, self.get(i, j).clone());
            }
        }
        b
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = scalar::add(&acc, &scalar::mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn square_or_err(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

/// One Bareiss update: `(a_ij * a_kk - a_ik * a_kj) / prev`.
#[inline]
fn bareiss_step<T: Scalar>(aij: &T, akk: &T, aik: &T, akj: &T, prev: &T) -> Result<T> {
    let num = scalar::sub(&scalar::mul(aij, akk)?, &scalar::mul(aik, akj)?)?;
    // Sylvester's identity guarantees exactness.
    debug_assert!((num.clone() % prev.clone()).is_zero());
    Ok(num / prev.clone())
}

/// Determinant by fraction-free elimination with row pivoting.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    m.square_or_err()?;
    let n = m.rows;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = bareiss_step(&a[i][j], &a[k][k], &a[i][k], &a[k][j], &prev)?;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// All leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
///
/// Without pivoting the Bareiss pivots are exactly these minors; once a
/// pivot vanishes the remaining minors are computed directly.
pub fn leading_principal_minors<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    m.square_or_err()?;
    let n = m.rows;
    let mut minors = Vec::with_capacity(n);
    let mut a = m.to_rows();
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            for size in k + 1..=n {
                minors.push(determinant(&m.leading_block(size))?);
            }
            return Ok(minors);
        }
        minors.push(a[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                let v = bareiss_step(&a[i][j], &a[k][k], &a[i][k], &a[k][j], &prev)?;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(minors)
}

/// Outcome of an exact integer solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    /// The unique rational solution has a non-integer coordinate.
    NonIntegral,
    Singular,
}

/// Solves `a * x = b` over the integers.
pub fn solve_integral<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Solution<T>> {
    a.square_or_err()?;
    let n = a.rows;
    if b.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: b.len() });
    }
    if n == 0 {
        return Ok(Solution::Unique(Vec::new()));
    }
    // Augmented fraction-free forward elimination.
    let mut aug: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut prev = T::one();
    for k in 0..n {
        if aug[k][k].is_zero() {
            match (k + 1..n).find(|&r| !aug[r][k].is_zero()) {
                Some(r) => aug.swap(k, r),
                None => return Ok(Solution::Singular),
            }
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = bareiss_step(&aug[i][j], &aug[k][k], &aug[i][k], &aug[k][j], &prev)?;
                aug[i][j] = v;
            }
            aug[i][k] = T::zero();
        }
        prev = aug[k][k].clone();
    }
    // Back substitution on scaled unknowns X = det * x, all integral.
    let det = aug[n - 1][n - 1].clone();
    let mut scaled = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = scalar::mul(&det, &aug[k][n])?;
        for j in k + 1..n {
            acc = scalar::sub(&acc, &scalar::mul(&aug[k][j], &scaled[j])?)?;
        }
        let (q, r) = acc.div_rem(&aug[k][k]);
        if !r.is_zero() {
            return Err(Error::Overflow);
        }
        scaled[k] = q;
    }
    let mut x = Vec::with_capacity(n);
    for s in scaled {
        let (q, r) = s.div_rem(&det);
        if !r.is_zero() {
            return Ok(Solution::NonIntegral);
        }
        x.push(q);
    }
    Ok(Solution::Unique(x))
}
