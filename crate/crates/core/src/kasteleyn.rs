//! Generalised signed adjacency matrices, built from the oriented graph or
//! assembled as Kronecker sums of structured blocks.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::det::det_exact;
use crate::error::{Error, Result};
use crate::grid::{EdgeKind, OrientedGrid};
use crate::matrix::{
    adiag, alternating, b_cyl, b_mob, diag, kron, reversal, tridiag_toeplitz, Provenance, QMatrix,
    SignedMatrix,
};

/// Nonzero entries keyed by `(row, column)`, 0-based.
pub type Entries = BTreeMap<(usize, usize), BigRational>;

fn accumulate(m: &mut Entries, key: (usize, usize), v: BigRational) {
    let slot = m.entry(key).or_insert_with(BigRational::zero);
    *slot += v;
    if slot.is_zero() {
        m.remove(&key);
    }
}

fn densify(n: usize, e: &Entries) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    for (&(i, j), v) in e {
        m.set(i, j, v.clone());
    }
    m
}

/// Nonzero entries of `f_1 ⊗ f_2 ⊗ … ⊗ f_k`.
fn kron_sparse(factors: &[QMatrix]) -> Vec<((usize, usize), BigRational)> {
    let mut cur = vec![((0, 0), BigRational::one())];
    for f in factors {
        let nz: Vec<(usize, usize, &BigRational)> = (0..f.rows())
            .flat_map(|i| (0..f.cols()).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = f.get(i, j);
                (!v.is_zero()).then_some((i, j, v))
            })
            .collect();
        let mut next = Vec::with_capacity(cur.len() * nz.len());
        for ((r, c), v) in &cur {
            for &(i, j, y) in &nz {
                next.push(((r * f.rows() + i, c * f.cols() + j), v * y));
            }
        }
        cur = next;
    }
    cur
}
use crate::spec::{GridSpec, Mode};
use crate::weights::WeightSpec;

/// Largest order for which dense matrices are assembled.
pub const MAX_DENSE_ORDER: usize = 4096;

fn check_order(n: usize) -> Result<()> {
    if n > MAX_DENSE_ORDER {
        return Err(Error::TooLarge {
            n,
            cap: MAX_DENSE_ORDER,
        });
    }
    Ok(())
}

/// Nonzero entries of the graph-built matrix: `x` on the diagonal, `±a_axis`
/// by orientation off it, parallel edges summed.
pub fn graph_entries(grid: &OrientedGrid, w: &WeightSpec) -> Result<Entries> {
    w.check_dim(grid.spec().dim())?;
    let mut m = Entries::new();
    for i in 0..grid.num_vertices() {
        accumulate(&mut m, (i, i), w.x.clone());
    }
    for e in grid.edges() {
        let a = &w.a[e.axis - 1];
        let (t, h) = (e.tail - 1, e.head - 1);
        accumulate(&mut m, (t, h), a.clone());
        accumulate(&mut m, (h, t), -a.clone());
    }
    Ok(m)
}

/// `K[v][v] = x`, `K[u][v] = ±a_axis` by orientation, parallel edges summed.
pub fn build_k_from_graph(grid: &OrientedGrid, w: &WeightSpec) -> Result<SignedMatrix> {
    let n = grid.num_vertices();
    check_order(n)?;
    let e = graph_entries(grid, w)?;
    Ok(SignedMatrix {
        matrix: densify(n, &e),
        provenance: Provenance::FromGraph,
    })
}

/// Contribution of the dashed edges alone.
pub fn dashed_part_from_graph(grid: &OrientedGrid, a1: &BigRational) -> QMatrix {
    let n = grid.num_vertices();
    let mut m = QMatrix::zeros(n, n);
    for e in grid.edges().iter().filter(|e| e.kind == EdgeKind::Dashed) {
        let (t, h) = (e.tail - 1, e.head - 1);
        *m.get_mut(t, h) += a1;
        *m.get_mut(h, t) -= a1;
    }
    m
}

fn dashed_factors(spec: &GridSpec) -> Result<Vec<QMatrix>> {
    let d = spec.dims();
    if d.len() != 3 || !spec.mode().is_twisted() {
        return Err(Error::Unsupported(format!(
            "dashed Kronecker pattern is only written for three-axis twisted grids, got {spec}"
        )));
    }
    Ok(vec![
        adiag(&alternating(d[2])),
        diag(&alternating(d[1])),
        b_mob(d[0]),
    ])
}

/// `a_1 · adiag(1, −1, …) ⊗ diag(1, −1, …) ⊗ B^Möb` for three axes.
pub fn dashed_kronecker_term(spec: &GridSpec, a1: &BigRational) -> Result<QMatrix> {
    let f = dashed_factors(spec)?;
    Ok(kron(&kron(&f[0], &f[1]), &f[2]).scale(a1))
}

/// Kronecker factors of axis `j` (0-based), highest axis first.
fn axis_factors(spec: &GridSpec, w: &WeightSpec, j: usize) -> Vec<QMatrix> {
    let dims = spec.dims();
    let a = &w.a[j];
    let z = if j == 0 {
        w.x.clone()
    } else {
        BigRational::zero()
    };
    let mut block = tridiag_toeplitz(dims[j], &-a.clone(), &z, a);
    if spec.is_cyclic(j) {
        block = block.add(&b_cyl(dims[j]).scale(a)).expect("same shape");
    }
    (0..dims.len())
        .rev()
        .map(|i| {
            if i > j {
                QMatrix::identity(dims[i])
            } else if i == j {
                block.clone()
            } else {
                reversal(dims[i])
            }
        })
        .collect()
}

#[cfg(test)]
fn axis_term(spec: &GridSpec, w: &WeightSpec, j: usize) -> QMatrix {
    axis_factors(spec, w, j)
        .iter()
        .fold(QMatrix::identity(1), |m, f| kron(&m, f))
}

fn check_kronecker(spec: &GridSpec, w: &WeightSpec) -> Result<()> {
    w.check_dim(spec.dim())?;
    match spec.mode() {
        Mode::Free | Mode::Cylindrical(_) | Mode::Toroidal => {}
        Mode::Moebius | Mode::Klein if spec.dim() == 3 => {}
        m => {
            return Err(Error::Unsupported(format!(
                "no Kronecker block form for {m} boundaries in dimension {}",
                spec.dim()
            )))
        }
    }
    spec.require_even()
}

/// Nonzero entries of the Kronecker-sum assembly; only for the boundary/dimension
/// pairs with an explicit block form (free and cylindrical in any dimension,
/// Möbius and Klein in three).
pub fn kronecker_entries(spec: &GridSpec, w: &WeightSpec) -> Result<Entries> {
    check_kronecker(spec, w)?;
    let mut m = Entries::new();
    for j in 0..spec.dim() {
        for (key, v) in kron_sparse(&axis_factors(spec, w, j)) {
            accumulate(&mut m, key, v);
        }
    }
    if spec.mode().is_twisted() {
        for (key, v) in kron_sparse(&dashed_factors(spec)?) {
            accumulate(&mut m, key, v * &w.a[0]);
        }
    }
    Ok(m)
}

pub fn build_k_kronecker(spec: &GridSpec, w: &WeightSpec) -> Result<SignedMatrix> {
    check_kronecker(spec, w)?;
    let n = spec.num_vertices();
    check_order(n)?;
    Ok(SignedMatrix {
        matrix: densify(n, &kronecker_entries(spec, w)?),
        provenance: Provenance::FromKronecker,
    })
}

/// Whether `det(A ⊗ B) = det(A)^p · det(B)^n` for `A` of order `n`, `B` of order `p`.
pub fn det_kron_identity_check(a: &QMatrix, b: &QMatrix) -> Result<bool> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::InvalidInput(
            "Kronecker determinant identity needs square factors".into(),
        ));
    }
    let lhs = det_exact(&kron(a, b))?;
    let da = det_exact(a)?;
    let db = det_exact(b)?;
    let rhs = num_traits::pow(da, b.rows()) * num_traits::pow(db, a.rows());
    Ok(lhs == rhs)
}

/// `K` at zero vertex weight, the input of Pfaffian based dimer counts.
pub fn dimer_matrix(grid: &OrientedGrid, w: &WeightSpec) -> Result<SignedMatrix> {
    let w0 = w.clone().with_x(BigRational::zero());
    build_k_from_graph(grid, &w0)
}
