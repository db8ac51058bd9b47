//! Symmetric reorderings that shrink the envelope of sparse matrices.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::matrix::Matrix;

/// Symmetrised nonzero pattern, diagonal excluded.
pub(crate) fn pattern<T: Clone + Zero>(m: &Matrix<T>) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if !m.get(i, j).is_zero() || !m.get(j, i).is_zero() {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

fn bfs_levels(adj: &[Vec<usize>], start: usize, seen: &[bool]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        for &u in &adj[v] {
            if !seen[u] && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
        }
    }
    dist
}

/// Reverse Cuthill–McKee order; `order[new] = old`.
pub(crate) fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let mut start = (0..n)
            .filter(|&v| !seen[v])
            .min_by_key(|&v| deg[v])
            .expect("unvisited vertex left");
        // a couple of sweeps towards a pseudo-peripheral vertex
        for _ in 0..2 {
            let dist = bfs_levels(adj, start, &seen);
            let far = (0..n)
                .filter(|&v| dist[v] != usize::MAX)
                .max_by_key(|&v| (dist[v], std::cmp::Reverse(deg[v])))
                .unwrap_or(start);
            if dist[far] == 0 {
                break;
            }
            start = far;
        }
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !seen[u]).collect();
            next.sort_by_key(|&u| (deg[u], u));
            for u in next {
                seen[u] = true;
                q.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

/// Work estimate for row-envelope elimination in the given order: every row
/// reaching back to the pivot column is updated up to the pivot row's last
/// column, and inherits that bound.
pub(crate) fn elimination_cost(adj: &[Vec<usize>], order: &[usize]) -> u64 {
    let n = order.len();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut first = vec![0; n];
    let mut last = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        first[i] = adj[v].iter().map(|&u| pos[u]).min().map_or(i, |p| p.min(i));
        last[i] = adj[v].iter().map(|&u| pos[u]).max().map_or(i, |p| p.max(i));
    }
    let mut cost = 0u64;
    for k in 0..n {
        let hi = last[k];
        for i in k + 1..n {
            if first[i] <= k {
                cost += (hi - k) as u64;
                last[i] = last[i].max(hi);
            }
        }
    }
    cost
}

pub(crate) fn is_odd_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    let mut odd = false;
    for s in 0..order.len() {
        let mut len = 0;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            v = order[v];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// A reordering with a strictly smaller elimination cost than the identity, if one is found.
pub(crate) fn envelope_order<T: Clone + Zero>(m: &Matrix<T>) -> Option<Vec<usize>> {
    let adj = pattern(m);
    let identity: Vec<usize> = (0..m.rows()).collect();
    let rcm = reverse_cuthill_mckee(&adj);
    (elimination_cost(&adj, &rcm) < elimination_cost(&adj, &identity)).then_some(rcm)
}

/// `P m Pᵀ` for the given order.
pub(crate) fn permute<T: Clone + Zero>(m: &Matrix<T>, order: &[usize]) -> Matrix<T> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(order[i], order[j]).clone())
}
