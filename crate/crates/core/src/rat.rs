//! Exact rational scalars and dense matrices used throughout the crate.
//!
//! All linear algebra is performed over arbitrary-precision rationals; there
//! is no floating point anywhere. Matrices are small (at most a few dozen
//! rows), so plain Gaussian elimination is used for determinants, ranks and
//! inverses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Exact rational scalar.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Serialize a rational as a `[numerator, denominator]` pair of decimal
/// strings, which keeps CLI output bit-exact regardless of magnitude.
pub fn q_to_pair(x: &Q) -> [String; 2] {
    [x.numer().to_string(), x.denom().to_string()]
}

/// Serialize a rational as a `[numerator, denominator]` integer pair. The
/// matrices exported this way have small entries by construction.
pub fn q_pair_i64(x: &Q) -> [i64; 2] {
    let n = i64::try_from(x.numer().clone()).expect("numerator exceeds i64 in JSON export");
    let d = i64::try_from(x.denom().clone()).expect("denominator exceeds i64 in JSON export");
    [n, d]
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMat { rows, cols, data }
    }

    /// Build from integer entries given as nested slices.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| qi(rows[i][j]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMat {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] = &out[(i, j)] + &t;
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Determinant by fraction-aware Gaussian elimination.
    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let pr = match pivot {
                Some(p) => p,
                None => return Q::zero(),
            };
            if pr != col {
                m.swap_rows(pr, col);
                det = -det;
            }
            let p = m[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &p;
                for c in col..n {
                    let sub = &factor * &m[(col, c)];
                    m[(r, c)] = &m[(r, c)] - &sub;
                }
            }
        }
        det
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let pivot = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let pr = match pivot {
                Some(p) => p,
                None => continue,
            };
            m.swap_rows(pr, row);
            let p = m[(row, col)].clone();
            for r in row + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &p;
                for c in col..m.cols {
                    let sub = &factor * &m[(row, c)];
                    m[(r, c)] = &m[(r, c)] - &sub;
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero())?;
            m.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = m[(col, col)].clone();
            for c in 0..n {
                m[(col, c)] = &m[(col, c)] / &p;
                inv[(col, c)] = &inv[(col, c)] / &p;
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in 0..n {
                    let s1 = &factor * &m[(col, c)];
                    m[(r, c)] = &m[(r, c)] - &s1;
                    let s2 = &factor * &inv[(col, c)];
                    inv[(r, c)] = &inv[(r, c)] - &s2;
                }
            }
        }
        Some(inv)
    }

    /// Solve `self * x = b` exactly; `None` when singular.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        Some(self.inverse()?.matvec(b))
    }

    /// Determinant of the leading principal `k x k` block.
    pub fn leading_minor(&self, k: usize) -> Q {
        assert!(k <= self.rows && k <= self.cols);
        Self::from_fn(k, k, |i, j| self[(i, j)].clone()).det()
    }

    /// Submatrix by row/column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMat {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Entries as `[num, den]` string pairs, row-major nested.
    pub fn to_pairs(&self) -> Vec<Vec<[String; 2]>> {
        (0..self.rows).map(|i| self.row(i).iter().map(q_to_pair).collect()).collect()
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        let width = strs.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in &strs {
            write!(f, "[")?;
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{s:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl Mul<&QMat> for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        self.matmul(rhs)
    }
}

impl Add<&QMat> for &QMat {
    type Output = QMat;
    fn add(self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl Sub<&QMat> for &QMat {
    type Output = QMat;
    fn sub(self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl Neg for &QMat {
    type Output = QMat;
    fn neg(self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }
}

/// Dense integer matrix, used for Cartan data and Weyl group actions where
/// entries stay integral by construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IMat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn matmul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        IMat::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| {
                    self[(i, k)]
                        .checked_mul(other[(k, j)])
                        .expect("integer overflow in matrix product")
                })
                .fold(0i64, |a, b| a.checked_add(b).expect("integer overflow in matrix product"))
        })
    }

    pub fn matvec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn to_qmat(&self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| qi(self[(i, j)]))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }
}

impl Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IMat {}x{} {:?}", self.rows, self.cols, self.rows_vec())
    }
}

impl fmt::Display for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qmat())
    }
}

/// Raise a nonzero rational to a (possibly negative) integer power.
pub fn qpow(base: &Q, exp: i64) -> Q {
    if exp == 0 {
        return Q::one();
    }
    let mag = base.pow(i32::try_from(exp.unsigned_abs()).expect("exponent out of range"));
    if exp > 0 {
        mag
    } else {
        mag.recip()
    }
}

/// Positivity helper used by random sampling.
pub fn q_is_positive(x: &Q) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_roundtrip() {
        let m = QMat::from_int_rows(&[vec![2, -2, 1], vec![-2, 2, 0], vec![1, 0, 0]]);
        assert_eq!(m.det(), qi(-2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), QMat::identity(3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = QMat::from_int_rows(&[vec![2, -2], vec![-2, 2]]);
        assert_eq!(m.det(), qi(0));
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn leading_minors() {
        let m = QMat::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.leading_minor(1), qi(1));
        assert_eq!(m.leading_minor(2), qi(-2));
    }

    #[test]
    fn qpow_signs() {
        assert_eq!(qpow(&q(2, 3), -2), q(9, 4));
        assert_eq!(qpow(&q(2, 3), 0), qi(1));
        assert_eq!(qpow(&q(-2, 1), 3), qi(-8));
    }
}
