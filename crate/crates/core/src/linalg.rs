//! Small dense matrices over an arbitrary scalar: products, determinants,
//! linear solves, and fraction-free exact rank for the rational mode.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
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

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: S) {
        let cur = self.get(r, c).clone();
        self.set(r, c, cur + v);
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::BlockMismatch(format!(
                "matrix product shape mismatch: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_to(r, c, a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BlockMismatch("matrix sum shape mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).clone() + other.get(r, c).clone()
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BlockMismatch(
                "matrix difference shape mismatch".into(),
            ));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).clone() - other.get(r, c).clone()
        }))
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).clone() * s.clone()
        })
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc = acc + a.clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for v in &self.data {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Determinant by Gaussian elimination with the largest-|pivot| choice.
    pub fn det(&self) -> Result<S> {
        if self.rows != self.cols {
            return Err(Error::BlockMismatch(
                "determinant of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let pivot = (col..n).max_by(|&a, &b| {
                m.get(a, col)
                    .abs()
                    .partial_cmp(&m.get(b, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let pivot = pivot.unwrap();
            if m.get(pivot, col).is_zero() {
                return Ok(S::zero());
            }
            if pivot != col {
                for c in 0..n {
                    let a = m.get(pivot, c).clone();
                    let b = m.get(col, c).clone();
                    m.set(pivot, c, b);
                    m.set(col, c, a);
                }
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = det * piv.clone();
            for r in col + 1..n {
                let factor = m.get(r, col).clone() / piv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(col, c).clone();
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves A x = b for square invertible A (exact for field scalars).
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(Error::BlockMismatch("solve shape mismatch".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    m.get(a, col)
                        .abs()
                        .partial_cmp(&m.get(b, col).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if m.get(pivot, col).is_zero() {
                return Err(Error::InvalidParameter("singular system".into()));
            }
            if pivot != col {
                for c in 0..n {
                    let a = m.get(pivot, c).clone();
                    let bb = m.get(col, c).clone();
                    m.set(pivot, c, bb);
                    m.set(col, c, a);
                }
                rhs.swap(pivot, col);
            }
            let piv = m.get(col, col).clone();
            for r in col + 1..n {
                let factor = m.get(r, col).clone() / piv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(col, c).clone();
                    m.set(r, c, v);
                }
                rhs[r] = rhs[r].clone() - factor * rhs[col].clone();
            }
        }
        let mut x = vec![S::zero(); n];
        for r in (0..n).rev() {
            let mut acc = rhs[r].clone();
            for c in r + 1..n {
                acc = acc - m.get(r, c).clone() * x[c].clone();
            }
            x[r] = acc / m.get(r, r).clone();
        }
        Ok(x)
    }
}

/// Exact rank of a rational matrix by Bareiss fraction-free elimination on
/// the denominator-cleared integer matrix.
pub fn rank_exact(m: &Matrix<BigRational>) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    if rows == 0 || cols == 0 {
        return 0;
    }
    // clear denominators row by row
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut lcm = BigInt::one();
        for c in 0..cols {
            let den = m.get(r, c).denom().clone();
            lcm = num::integer::lcm(lcm, den);
        }
        let row: Vec<BigInt> = (0..cols)
            .map(|c| {
                let v = m.get(r, c);
                v.numer() * (&lcm / v.denom())
            })
            .collect();
        a.push(row);
    }
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..cols {
        let pivot_row = (row..rows).find(|&r| !a[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        a.swap(row, pr);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let v = (&a[row][col] * &a[r][c] - &a[r][col] * &a[row][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn det_small() {
        let m = Matrix::from_fn(2, 2, |i, j| r(((i + 1) * (j + 2)) as i64, 1));
        // [[2,3],[4,6]] singular
        assert_eq!(m.det().unwrap(), r(0, 1));
        let m = Matrix::from_fn(2, 2, |i, j| if i == j { r(2, 1) } else { r(1, 3) });
        assert_eq!(m.det().unwrap(), r(4, 1) - r(1, 9));
    }

    #[test]
    fn solve_roundtrip() {
        let a = Matrix::from_fn(3, 3, |i, j| {
            r((i * 3 + j + 1) as i64, 1) + if i == j { r(7, 2) } else { r(0, 1) }
        });
        let x = vec![r(1, 2), r(-2, 3), r(5, 1)];
        let b = a.apply(&x);
        assert_eq!(a.solve(&b).unwrap(), x);
    }

    #[test]
    fn exact_rank() {
        let mut m = Matrix::zeros(3, 3);
        m.set(0, 0, r(1, 2));
        m.set(0, 1, r(1, 3));
        m.set(1, 0, r(1, 1));
        m.set(1, 1, r(2, 3)); // row1 = 2*row0
        m.set(2, 2, r(5, 7));
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_exact(&Matrix::<BigRational>::identity(4)), 4);
        assert_eq!(rank_exact(&Matrix::<BigRational>::zeros(2, 5)), 0);
    }
}
