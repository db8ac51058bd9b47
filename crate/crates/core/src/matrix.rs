//! Dense matrices, Kronecker products and the structured blocks used to
//! assemble signed adjacency matrices.

use std::ops::{Add, Mul, Neg};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: Clone + Zero + Add<Output = T>> Matrix<T> {
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::InvalidInput("shape mismatch in matrix sum".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| {
                    if b.is_zero() {
                        a.clone()
                    } else if a.is_zero() {
                        b.clone()
                    } else {
                        a.clone() + b.clone()
                    }
                })
                .collect(),
        })
    }
}

impl<T: Clone + Zero + Mul<Output = T>> Matrix<T> {
    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| s.clone() * v.clone())
    }
}

impl<T: Clone + Zero + Neg<Output = T>> Matrix<T> {
    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }
}

/// `A ⊗ B`: block `(i, j)` is `a_ij · B`.
pub fn kron<T: Clone + Zero + Mul<Output = T>>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (p, q) = (b.rows, b.cols);
    Matrix::from_fn(a.rows * p, a.cols * q, |i, j| {
        let x = a.get(i / p, j / q);
        let y = b.get(i % p, j % q);
        if x.is_zero() || y.is_zero() {
            return T::zero();
        }
        x.clone() * y.clone()
    })
}

pub type QMatrix = Matrix<BigRational>;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Tridiagonal Toeplitz matrix with `sub` below, `diag` on and `sup` above the diagonal.
pub fn tridiag_toeplitz(
    k: usize,
    sub: &BigRational,
    diag: &BigRational,
    sup: &BigRational,
) -> QMatrix {
    Matrix::from_fn(k, k, |i, j| {
        if i == j {
            diag.clone()
        } else if j == i + 1 {
            sup.clone()
        } else if i == j + 1 {
            sub.clone()
        } else {
            BigRational::zero()
        }
    })
}

pub fn diag(v: &[BigRational]) -> QMatrix {
    let k = v.len();
    Matrix::from_fn(k, k, |i, j| {
        if i == j {
            v[i].clone()
        } else {
            BigRational::zero()
        }
    })
}

/// Anti-diagonal matrix with `v[i]` at `(i, k − 1 − i)`.
pub fn adiag(v: &[BigRational]) -> QMatrix {
    let k = v.len();
    Matrix::from_fn(k, k, |i, j| {
        if i + j + 1 == k {
            v[i].clone()
        } else {
            BigRational::zero()
        }
    })
}

/// The reversal permutation `J_k`.
pub fn reversal(k: usize) -> QMatrix {
    adiag(&vec![BigRational::one(); k])
}

/// `(1, −1, 1, −1, …)` of length `k`.
pub fn alternating(k: usize) -> Vec<BigRational> {
    (0..k).map(|i| q(if i % 2 == 0 { 1 } else { -1 })).collect()
}

/// `adiag(1, 0, …, 0, −1)`, the closing edge of an oriented cycle.
pub fn b_cyl(k: usize) -> QMatrix {
    let mut m = QMatrix::zeros(k, k);
    if k >= 1 {
        *m.get_mut(0, k - 1) = m.get(0, k - 1) + q(1);
        *m.get_mut(k - 1, 0) = m.get(k - 1, 0) - q(1);
    }
    m
}

/// `adiag(1, 0, …, 0, 1)`.
pub fn b_mob(k: usize) -> QMatrix {
    let mut m = QMatrix::zeros(k, k);
    if k >= 1 {
        *m.get_mut(0, k - 1) = m.get(0, k - 1) + q(1);
        *m.get_mut(k - 1, 0) = m.get(k - 1, 0) + q(1);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    FromGraph,
    FromKronecker,
    Imported,
}

/// Generalised adjacency matrix `K` of a weighted oriented grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMatrix {
    pub matrix: QMatrix,
    pub provenance: Provenance,
}

impl SignedMatrix {
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    /// `K − x·I` is antisymmetric, i.e. the diagonal is constant and off-diagonal
    /// entries satisfy `K[i][j] = −K[j][i]`.
    pub fn is_shifted_antisymmetric(&self) -> bool {
        let m = &self.matrix;
        if !m.is_square() {
            return false;
        }
        let n = m.rows();
        if n == 0 {
            return true;
        }
        let x = m.get(0, 0);
        (0..n).all(|i| m.get(i, i) == x && (i + 1..n).all(|j| *m.get(i, j) == -m.get(j, i).clone()))
    }

    pub fn dump(&self) -> String {
        dump_matrix(&self.matrix)
    }
}

/// One row per line, entries as `p` or `p/q` separated by single spaces.
pub fn dump_matrix(m: &QMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Inverse of [`dump_matrix`]; blank lines and `#` comments are skipped.
pub fn parse_matrix_dump(text: &str) -> Result<QMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    let m = Matrix::from_rows(rows)?;
    if m.rows() != m.cols() {
        return Err(Error::Parse(format!(
            "matrix dump is {}x{}, expected square",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_with_identity_is_block_diagonal() {
        let b = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]).unwrap();
        let k = kron(&QMatrix::identity(2), &b);
        let expect = Matrix::from_rows(vec![
            vec![q(1), q(2), q(0), q(0)],
            vec![q(3), q(4), q(0), q(0)],
            vec![q(0), q(0), q(1), q(2)],
            vec![q(0), q(0), q(3), q(4)],
        ])
        .unwrap();
        assert_eq!(k, expect);
    }

    #[test]
    fn boundary_blocks() {
        let c = b_cyl(3);
        assert_eq!(*c.get(0, 2), q(1));
        assert_eq!(*c.get(2, 0), q(-1));
        let m = b_mob(3);
        assert_eq!(*m.get(2, 0), q(1));
        // T_2 plus the closing edge doubles the single edge
        let t = tridiag_toeplitz(2, &q(-1), &q(0), &q(1))
            .add(&b_cyl(2))
            .unwrap();
        assert_eq!(*t.get(0, 1), q(2));
        assert_eq!(*t.get(1, 0), q(-2));
    }

    #[test]
    fn dump_roundtrip() {
        let m = Matrix::from_rows(vec![
            vec![q(1), BigRational::new(1.into(), 3.into())],
            vec![BigRational::new((-1).into(), 3.into()), q(1)],
        ])
        .unwrap();
        let text = dump_matrix(&m);
        assert_eq!(text, "1 1/3\n-1/3 1\n");
        assert_eq!(parse_matrix_dump(&text).unwrap(), m);
    }

    #[test]
    fn dump_rejects_ragged_and_rectangular() {
        assert!(parse_matrix_dump("1 2\n3\n").is_err());
        assert!(parse_matrix_dump("1 2\n").is_err());
        assert!(parse_matrix_dump("1 x\n2 3\n").is_err());
        assert_eq!(parse_matrix_dump("# empty\n").unwrap().rows(), 0);
    }
}
