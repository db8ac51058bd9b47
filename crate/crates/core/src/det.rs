//! Exact and high-precision determinants and Pfaffians.

use std::collections::HashMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, QMatrix};
use crate::modular::{log2_abs, log2_norm, Crt, Field, IntEntries, Primes};
use crate::ordering::{envelope_order, is_odd_permutation, permute};
use crate::real::{self, RM};

/// Orders up to this size go through Bareiss; larger ones through multi-modular elimination.
pub const BAREISS_MAX_ORDER: usize = 32;
/// Pfaffians up to this order use memoised expansion along the first row.
pub const PFAFFIAN_EXPANSION_MAX: usize = 16;

fn require_square<T>(m: &Matrix<T>) -> Result<()>
where
    T: Clone + Zero,
{
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Integer matrix `D·K` with `D` diagonal, plus `det D`.
fn clear_row_denominators(k: &QMatrix) -> (Matrix<BigInt>, BigInt) {
    let n = k.rows();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let row = k.row(i);
        if row.iter().all(|v| v.denom().is_one()) {
            rows.push(row.iter().map(|v| v.numer().clone()).collect());
            continue;
        }
        let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(
            row.iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect::<Vec<_>>(),
        );
        scale *= l;
    }
    (Matrix::from_rows(rows).expect("rectangular"), scale)
}

/// Fraction-free Gaussian elimination with row pivoting.
pub fn bareiss(m: &Matrix<BigInt>) -> BigInt {
    let n = m.rows();
    assert!(m.is_square());
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Determinant modulo the field prime; entries in Montgomery form.
/// Row operations are limited to each pivot row's last nonzero column.
fn det_mod(mut a: Vec<u64>, n: usize, f: &Field) -> u64 {
    let mut last: Vec<usize> = (0..n)
        .map(|i| (0..n).rev().find(|&j| a[i * n + j] != 0).unwrap_or(0))
        .collect();
    let mut det = f.one();
    for k in 0..n {
        if a[k * n + k] == 0 {
            match (k + 1..n).find(|&i| a[i * n + k] != 0) {
                Some(i) => {
                    for j in k..n {
                        a.swap(k * n + j, i * n + j);
                    }
                    last.swap(k, i);
                    det = f.neg(det);
                }
                None => return 0,
            }
        }
        let piv = a[k * n + k];
        det = f.mul(det, piv);
        let inv = f.inv(piv);
        let hi = last[k];
        let (top, bottom) = a.split_at_mut((k + 1) * n);
        let prow = &top[k * n..];
        for (r, row) in bottom.chunks_exact_mut(n).enumerate() {
            let lead = row[k];
            if lead == 0 {
                continue;
            }
            let factor = f.mul(lead, inv);
            for j in k + 1..=hi {
                let p = prow[j];
                if p != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, p));
                }
            }
            row[k] = 0;
            let i = k + 1 + r;
            if hi > last[i] {
                last[i] = hi;
            }
        }
    }
    det
}

/// Upper bound on `log2 |det|` (Hadamard, the smaller of the row and column forms).
fn hadamard_log2(m: &Matrix<BigInt>) -> f64 {
    let n = m.rows();
    let logs: Vec<f64> = m.entries().iter().map(log2_abs).collect();
    let mut rows = 0.0;
    let mut cols = 0.0;
    let mut col = vec![0.0; n];
    for i in 0..n {
        rows += log2_norm(&logs[i * n..(i + 1) * n]);
        for (j, c) in col.iter_mut().enumerate() {
            *c = logs[j * n + i];
        }
        cols += log2_norm(&col);
    }
    f64::min(rows, cols)
}

/// Exact integer determinant through residues modulo 62-bit primes.
pub fn det_multimodular(m: &Matrix<BigInt>) -> BigInt {
    let n = m.rows();
    assert!(m.is_square());
    if n == 0 {
        return BigInt::one();
    }
    let bound = hadamard_log2(m);
    if bound == f64::NEG_INFINITY {
        return BigInt::zero();
    }
    let need = bound.max(0.0).ceil() as u64 + 2;
    let reordered = envelope_order(m).map(|o| permute(m, &o));
    let entries = IntEntries::new(reordered.as_ref().unwrap_or(m).entries());
    let mut crt = Crt::default();
    for p in Primes::default() {
        let f = Field::new(p);
        let r = det_mod(entries.reduce(&f), n, &f);
        crt.push(f.leave(r), p);
        if crt.modulus_bits() > need {
            break;
        }
    }
    crt.symmetric()
}

pub fn det_integer(m: &Matrix<BigInt>) -> BigInt {
    if m.rows() <= BAREISS_MAX_ORDER {
        bareiss(m)
    } else {
        det_multimodular(m)
    }
}

/// Exact determinant of a rational matrix.
pub fn det_exact(k: &QMatrix) -> Result<BigRational> {
    require_square(k)?;
    let (m, scale) = clear_row_denominators(k);
    Ok(BigRational::new(det_integer(&m), scale))
}

/// High-precision determinant with a coarse relative error estimate.
#[derive(Debug, Clone)]
pub struct RealDet {
    pub value: BigFloat,
    pub precision: usize,
    pub rel_error: f64,
}

impl RealDet {
    pub fn to_rational(&self) -> BigRational {
        real::to_rational(&self.value).unwrap_or_else(BigRational::zero)
    }
}

fn exp_of(v: &BigFloat) -> i64 {
    if v.is_zero() {
        i64::MIN / 4
    } else {
        v.exponent().map_or(0, |e| e as i64)
    }
}

/// LU with partial pivoting in `p`-bit binary floating point.
pub fn det_real(k: &QMatrix, p: usize) -> Result<RealDet> {
    require_square(k)?;
    let n = k.rows();
    let zero = BigFloat::from_word(0, p);
    let mut a: Vec<BigFloat> = k
        .entries()
        .iter()
        .map(|v| {
            if v.is_zero() {
                zero.clone()
            } else {
                real::from_rational(v, p)
            }
        })
        .collect();
    let max_in = a.iter().map(exp_of).max().unwrap_or(0);
    let mut max_u = max_in;
    let mut det = BigFloat::from_word(1, p);
    for c in 0..n {
        let piv_row = (c..n)
            .filter(|&r| !a[r * n + c].is_zero())
            .max_by(|&r, &s| {
                a[r * n + c]
                    .abs()
                    .cmp(&a[s * n + c].abs())
                    .unwrap_or(0)
                    .cmp(&0)
            });
        let Some(r) = piv_row else {
            return Ok(RealDet {
                value: zero,
                precision: p,
                rel_error: 0.0,
            });
        };
        if r != c {
            for j in 0..n {
                a.swap(r * n + j, c * n + j);
            }
            det = det.neg();
        }
        let piv = a[c * n + c].clone();
        det = det.mul(&piv, p, RM);
        for i in c + 1..n {
            if a[i * n + c].is_zero() {
                continue;
            }
            let factor = a[i * n + c].div(&piv, p, RM);
            for j in c + 1..n {
                if a[c * n + j].is_zero() {
                    continue;
                }
                let t = factor.mul(&a[c * n + j], p, RM);
                a[i * n + j] = a[i * n + j].sub(&t, p, RM);
                max_u = max_u.max(exp_of(&a[i * n + j]));
            }
            a[i * n + c] = zero.clone();
        }
    }
    let growth = ((max_u - max_in) as f64).exp2();
    let nf = n.max(1) as f64;
    let rel_error = nf * nf * growth * (-(p as f64) + 1.0).exp2();
    Ok(RealDet {
        value: det,
        precision: p,
        rel_error,
    })
}

fn check_skew(a: &QMatrix) -> Result<()> {
    require_square(a)?;
    let n = a.rows();
    if n % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "Pfaffian needs even order, got {n}"
        )));
    }
    for i in 0..n {
        if !a.get(i, i).is_zero() {
            return Err(Error::InvalidInput("Pfaffian needs a zero diagonal".into()));
        }
        for j in i + 1..n {
            if *a.get(i, j) != -a.get(j, i).clone() {
                return Err(Error::InvalidInput(format!(
                    "matrix is not antisymmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn pf_expand(a: &Matrix<BigInt>, mask: u32, memo: &mut HashMap<u32, BigInt>) -> BigInt {
    if mask == 0 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut total = BigInt::zero();
    let mut pos = 0;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        pos += 1;
        let aij = a.get(i, j);
        if aij.is_zero() {
            continue;
        }
        let sub = pf_expand(a, rest & !(1 << j), memo);
        if sub.is_zero() {
            continue;
        }
        let term = aij * sub;
        if pos % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    memo.insert(mask, total.clone());
    total
}

/// Pfaffian of an antisymmetric integer matrix by memoised first-row expansion.
pub fn pfaffian_expansion(a: &Matrix<BigInt>) -> BigInt {
    let n = a.rows();
    assert!(n <= 32);
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    pf_expand(a, full, &mut HashMap::new())
}

/// Pfaffian modulo the field prime; `last[i]` bounds the last nonzero column of row `i`.
fn pf_mod(mut a: Vec<u64>, n: usize, f: &Field) -> u64 {
    let mut last: Vec<usize> = (0..n)
        .map(|i| (0..n).rev().find(|&j| a[i * n + j] != 0).unwrap_or(0))
        .collect();
    let mut pf = f.one();
    let mut k = 0;
    while k < n {
        let Some(j) = (k + 1..=last[k].max(k)).find(|&j| a[k * n + j] != 0) else {
            return 0;
        };
        if j != k + 1 {
            let s = k + 1;
            for r in 0..n {
                a.swap(r * n + s, r * n + j);
            }
            for c in 0..n {
                a.swap(s * n + c, j * n + c);
            }
            last.swap(s, j);
            for l in last.iter_mut() {
                if *l >= s && *l < j {
                    *l = j;
                }
            }
            pf = f.neg(pf);
        }
        let b = a[k * n + k + 1];
        pf = f.mul(pf, b);
        let binv = f.inv(b);
        let hi = last[k].max(last[k + 1]);
        for i in k + 2..=hi.min(n - 1) {
            let ui = f.mul(a[(k + 1) * n + i], binv);
            let vi = f.mul(a[k * n + i], binv);
            if ui == 0 && vi == 0 {
                continue;
            }
            for j in i + 1..=hi {
                let t = f.sub(f.mul(ui, a[k * n + j]), f.mul(vi, a[(k + 1) * n + j]));
                let v = f.add(a[i * n + j], t);
                a[i * n + j] = v;
                a[j * n + i] = f.neg(v);
            }
            last[i] = last[i].max(hi);
        }
        k += 2;
    }
    pf
}

/// Pfaffian of an antisymmetric integer matrix through residues modulo 62-bit primes.
pub fn pfaffian_multimodular(a: &Matrix<BigInt>) -> BigInt {
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let bound = hadamard_log2(a);
    if bound == f64::NEG_INFINITY {
        return BigInt::zero();
    }
    let need = (bound.max(0.0) / 2.0).ceil() as u64 + 2;
    // Pf(P A Pᵀ) = det(P) Pf(A)
    let order = envelope_order(a);
    let flip = order.as_deref().is_some_and(is_odd_permutation);
    let reordered = order.map(|o| permute(a, &o));
    let entries = IntEntries::new(reordered.as_ref().unwrap_or(a).entries());
    let mut crt = Crt::default();
    for p in Primes::default() {
        let f = Field::new(p);
        let r = pf_mod(entries.reduce(&f), n, &f);
        crt.push(f.leave(r), p);
        if crt.modulus_bits() > need {
            break;
        }
    }
    let pf = crt.symmetric();
    if flip {
        -pf
    } else {
        pf
    }
}

/// Exact Pfaffian; errors on odd order or a matrix that is not antisymmetric.
pub fn pfaffian_exact(a: &QMatrix) -> Result<BigRational> {
    check_skew(a)?;
    let n = a.rows();
    let l = a
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let m = a.map(|v| v.numer() * (&l / v.denom()));
    let pf = if n <= PFAFFIAN_EXPANSION_MAX {
        pfaffian_expansion(&m)
    } else {
        pfaffian_multimodular(&m)
    };
    Ok(BigRational::new(pf, num_traits::pow(l, n / 2)))
}
