//! Dense matrices over `Q`.
//!
//! Empty shapes (`0 x n`, `n x 0`) are first-class: a vertex of dimension zero
//! produces empty blocks and every product through it is an all-zero matrix of
//! the outer shape.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{fmt_q, q, Q};
use crate::upoly::UPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| fmt_q(&self[(i, j)])).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    /// Integer rows; all rows must have equal length. `cols` is needed for
    /// the empty case.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().map(|&x| q(x)));
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn column(entries: Vec<Q>) -> Self {
        let n = entries.len();
        Matrix {
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    pub fn row(entries: Vec<Q>) -> Self {
        let n = entries.len();
        Matrix {
            rows: 1,
            cols: n,
            data: entries,
        }
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

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square(), "power of non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Some(out)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * &rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Column-major vectorisation, matching `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
    pub fn vectorize(&self) -> Vec<Q> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)].clone());
            }
        }
        v
    }

    pub fn unvectorize(rows: usize, cols: usize, v: &[Q]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = v[j * rows + i].clone();
            }
        }
        m
    }

    /// Exact inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let t = &f * &a[(col, j)];
                    a[(r, j)] -= t;
                    let t = &f * &inv[(col, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Unique solution of the square system `self · x = b`; `None` if singular.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len());
        let inv = self.inverse()?;
        Some(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &inv[(i, j)] * &b[j]).sum())
                .collect(),
        )
    }

    /// Some solution of `self · x = b` for any shape (free variables set to
    /// zero); `None` if inconsistent.
    pub fn solve_any(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len());
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(k) = (r..self.rows).find(|&k| !m[(k, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, k);
            rhs.swap(r, k);
            let inv = Q::one() / &m[(r, c)];
            for j in 0..self.cols {
                m[(r, j)] *= &inv;
            }
            rhs[r] *= &inv;
            for k in 0..self.rows {
                if k != r && !m[(k, c)].is_zero() {
                    let f = m[(k, c)].clone();
                    for j in 0..self.cols {
                        let t = &f * &m[(r, j)];
                        m[(k, j)] -= t;
                    }
                    let t = &f * &rhs[r];
                    rhs[k] -= t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        if rhs[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, c) in pivots.into_iter().enumerate() {
            x[c] = rhs[row].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank by fraction-free (Bareiss) elimination after clearing each row's
    /// denominators, so the elimination runs in `Z`.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter()
                    .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect();
        bareiss_rank(&mut rows, self.cols)
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Q::zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &p;
                for j in col..n {
                    let t = &f * &a[(col, j)];
                    a[(r, j)] -= t;
                }
            }
        }
        det
    }

    /// Monic characteristic polynomial `det(u·1 − A)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> UPoly {
        assert!(self.is_square(), "charpoly of non-square matrix");
        let n = self.rows;
        // coefficients c_n = 1, c_{n-k}
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -am.trace() / q(k as i64);
        }
        UPoly::new(coeffs)
    }
}

pub(crate) fn bareiss_rank(rows: &mut [Vec<BigInt>], cols: usize) -> usize {
    let nrows = rows.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(piv) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(piv, rank);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for j in 0..cols {
                if j == col {
                    continue;
                }
                row[j] = (&pivot_row[col] * &row[j] - &f * &pivot_row[j]) / &prev;
            }
            row[col] = BigInt::zero();
        }
        // entries left of `col` in the pivot row are already zero
        prev = rows[rank][col].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|| {
            panic!(
                "shape mismatch in product: {:?} * {:?}",
                self.shape(),
                rhs.shape()
            )
        })
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn empty_products_are_zero_of_outer_shape() {
        let a = Matrix::zeros(2, 0);
        let b = Matrix::zeros(0, 3);
        let c = &a * &b;
        assert_eq!(c.shape(), (2, 3));
        assert!(c.is_zero());
    }

    #[test]
    fn inverse_and_rank() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let mut r = Matrix::zeros(3, 3);
        r[(0, 1)] = qf(1, 3);
        r[(2, 2)] = qf(-5, 7);
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn charpoly_of_symmetric_2x2() {
        // u^2 - u - 4
        let a = Matrix::from_i64(&[&[1, 2], &[2, 0]]);
        assert_eq!(a.charpoly(), UPoly::from_i64(&[-4, -1, 1]));
        assert_eq!(a.determinant(), q(-4));
    }

    #[test]
    fn kron_vectorization_identity() {
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let x = Matrix::from_i64(&[&[0, 1, 5], &[2, -1, 1]]);
        let b = Matrix::from_i64(&[&[1, 0, 2], &[0, 3, 1], &[1, 1, 1]]);
        let lhs = (&(&a * &x) * &b).vectorize();
        let k = b.transpose().kron(&a);
        let vx = x.vectorize();
        let rhs: Vec<Q> = (0..k.rows())
            .map(|i| (0..k.cols()).map(|j| &k[(i, j)] * &vx[j]).sum())
            .collect();
        assert_eq!(lhs, rhs);
    }
}
