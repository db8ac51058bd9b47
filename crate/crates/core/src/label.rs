//! Boustrophedon (snake) labelling of grid vertices.
//!
//! A d-dimensional grid is `n_d` consecutive copies of the (d−1)-dimensional
//! grid, labelled alternately forwards and backwards.

use crate::error::{Error, Result};

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidSpec("empty dimension list".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidSpec("side lengths must be ≥ 1".into()));
    }
    Ok(())
}

/// Label (1..=N) of 1-based coordinates `coords`. Coordinates are not range checked.
pub fn label_of(dims: &[usize], coords: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), coords.len());
    let mut label = coords[0];
    let mut block = dims[0];
    for j in 1..dims.len() {
        let k = coords[j];
        let inner = if k % 2 == 1 { label } else { block + 1 - label };
        label = (k - 1) * block + inner;
        block *= dims[j];
    }
    label
}

/// Inverse of [`label_of`].
pub fn coords_of(dims: &[usize], label: usize) -> Vec<usize> {
    let d = dims.len();
    let mut coords = vec![0; d];
    let mut block: usize = dims[..d - 1].iter().product();
    let mut rest = label;
    for j in (1..d).rev() {
        let k = (rest - 1) / block + 1;
        let r = rest - (k - 1) * block;
        coords[j] = k;
        rest = if k % 2 == 1 { r } else { block + 1 - r };
        block /= dims[j - 1];
    }
    coords[0] = rest;
    coords
}

/// Dense coordinate→label table, indexed lexicographically with axis 1 fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    dims: Vec<usize>,
    labels: Vec<usize>,
}

impl Labelling {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn index(&self, coords: &[usize]) -> Option<usize> {
        if coords.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0;
        for (&k, &n) in coords.iter().zip(&self.dims).rev() {
            if k == 0 || k > n {
                return None;
            }
            idx = idx * n + (k - 1);
        }
        Some(idx)
    }

    pub fn get(&self, coords: &[usize]) -> Option<usize> {
        self.index(coords).map(|i| self.labels[i])
    }

    /// `(coords, label)` pairs in lexicographic coordinate order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        let dims = &self.dims;
        self.labels.iter().enumerate().map(move |(mut i, &l)| {
            let c = dims
                .iter()
                .map(|&n| {
                    let k = i % n + 1;
                    i /= n;
                    k
                })
                .collect();
            (c, l)
        })
    }
}

/// Builds the full labelling table for `dims`.
pub fn boustrophedon_labels(dims: &[usize]) -> Result<Labelling> {
    check_dims(dims)?;
    let n = dims
        .iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(x))
        .ok_or_else(|| Error::InvalidSpec("vertex count overflows".into()))?;
    let mut labels = Vec::with_capacity(n);
    let mut coords = vec![1; dims.len()];
    for _ in 0..n {
        labels.push(label_of(dims, &coords));
        for (k, &m) in coords.iter_mut().zip(dims) {
            if *k < m {
                *k += 1;
                break;
            }
            *k = 1;
        }
    }
    Ok(Labelling {
        dims: dims.to_vec(),
        labels,
    })
}
