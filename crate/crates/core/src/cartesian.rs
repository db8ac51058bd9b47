//! Orientation of a Cartesian product of naturally labelled oriented paths and cycles.

use crate::error::{Error, Result};
use crate::grid::OrientedGrid;
use crate::label::label_of;
use crate::spec::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `1 → 2 → … → n`.
    Path(usize),
    /// `1 → 2 → … → n` plus the closing edge oriented `1 → n`.
    Cycle(usize),
}

impl Factor {
    pub fn len(self) -> usize {
        match self {
            Factor::Path(n) | Factor::Cycle(n) => n,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    /// Directed edges of the factor on its own.
    pub fn arcs(self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        if let Factor::Cycle(n) = self {
            if n >= 2 {
                out.push((1, n));
            }
        }
        out
    }
}

/// A product edge, coordinates 1-based, `axis` 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
    pub axis: usize,
}

/// Every edge of `G_1 □ … □ G_k`, where an edge along coordinate `i` keeps its
/// factor direction unless `u_{i+1} + … + u_k + (k − i)` is odd.
pub fn oriented_cartesian_orientation(factors: &[Factor]) -> Vec<Arc> {
    let k = factors.len();
    let dims: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total: usize = dims.iter().product();
    let mut out = Vec::new();
    if k == 0 || total == 0 {
        return out;
    }
    let mut u = vec![1; k];
    for _ in 0..total {
        for (i, f) in factors.iter().enumerate() {
            let parity = u[i + 1..].iter().sum::<usize>() + (k - 1 - i);
            for (a, b) in f.arcs() {
                if u[i] != a {
                    continue;
                }
                let mut tail = u.clone();
                let mut head = u.clone();
                head[i] = b;
                if parity % 2 == 1 {
                    std::mem::swap(&mut tail, &mut head);
                }
                out.push(Arc {
                    tail,
                    head,
                    axis: i + 1,
                });
            }
        }
        for (c, &m) in u.iter_mut().zip(&dims) {
            if *c < m {
                *c += 1;
                break;
            }
            *c = 1;
        }
    }
    out.sort();
    out
}

/// Path/cycle factors of an untwisted grid.
pub fn factors_of(spec: &GridSpec) -> Result<Vec<Factor>> {
    if spec.mode().is_twisted() {
        return Err(Error::Unsupported(format!(
            "{} grids are not Cartesian products",
            spec.mode()
        )));
    }
    Ok(spec
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if spec.is_cyclic(i) {
                Factor::Cycle(n)
            } else {
                Factor::Path(n)
            }
        })
        .collect())
}

/// Whether the product orientation matches the grid's solid edges edge by edge.
pub fn agrees_with_grid(grid: &OrientedGrid) -> Result<bool> {
    let dims = grid.spec().dims();
    let mut product: Vec<(usize, usize, usize)> =
        oriented_cartesian_orientation(&factors_of(grid.spec())?)
            .into_iter()
            .map(|a| (label_of(dims, &a.tail), label_of(dims, &a.head), a.axis))
            .collect();
    let mut solid: Vec<(usize, usize, usize)> = grid
        .solid_edges()
        .map(|e| (e.tail, e.head, e.axis))
        .collect();
    product.sort_unstable();
    solid.sort_unstable();
    Ok(product == solid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::spec::Mode;

    #[test]
    fn single_factor_keeps_its_orientation() {
        let arcs = oriented_cartesian_orientation(&[Factor::Path(4)]);
        let pairs: Vec<(usize, usize)> = arcs.iter().map(|a| (a.tail[0], a.head[0])).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 3), (3, 4)]);
        let arcs = oriented_cartesian_orientation(&[Factor::Cycle(3)]);
        assert_eq!(arcs.len(), 3);
        assert!(arcs.iter().any(|a| a.tail == [1] && a.head == [3]));
    }

    #[test]
    fn p3_box_p3_matches_labels() {
        let g = build_grid(&GridSpec::new(vec![3, 3], Mode::Free).unwrap()).unwrap();
        assert!(agrees_with_grid(&g).unwrap());
        // row 2 runs right to left: 6 → 5 → 4 read as labels 4 → 5 → 6
        let arcs = oriented_cartesian_orientation(&[Factor::Path(3), Factor::Path(3)]);
        assert!(arcs.contains(&Arc {
            tail: vec![3, 2],
            head: vec![2, 2],
            axis: 1
        }));
    }

    #[test]
    fn twisted_rejected() {
        let s = GridSpec::new(vec![2, 2], Mode::Moebius).unwrap();
        assert!(factors_of(&s).is_err());
    }
}
