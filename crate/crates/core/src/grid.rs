//! Labelled, oriented grid graphs for every supported boundary condition.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{coords_of, label_of};
use crate::spec::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: usize,
    pub coords: Vec<usize>,
}

/// Directed edge between two labels; `axis` is 1-based, dashed edges use axis 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub axis: usize,
    pub kind: EdgeKind,
}

type EdgeKey = (usize, usize, usize, EdgeKind);

impl Edge {
    pub fn u(&self) -> usize {
        self.tail.min(self.head)
    }

    pub fn v(&self) -> usize {
        self.tail.max(self.head)
    }

    fn key(&self) -> EdgeKey {
        (self.u(), self.v(), self.axis, self.kind)
    }

    pub fn reversed(self) -> Edge {
        Edge {
            tail: self.head,
            head: self.tail,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareKind {
    /// Lattice square spanned by axes `i < j` (1-based).
    Axis(usize, usize),
    /// Two dashed edges joined by solid edges along `axis` at both ends of axis 1.
    Dashed(usize),
}

/// A 4-cycle `vertices[0] → … → vertices[3] → vertices[0]`; `edges[i]` joins
/// `vertices[i]` and `vertices[(i + 1) % 4]` and indexes into the edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Square {
    pub vertices: [usize; 4],
    pub edges: [usize; 4],
    pub kind: SquareKind,
}

/// Which way the dashed edge at label 1 points before propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DashedSeed {
    #[default]
    Outward,
    Inward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGrid {
    spec: GridSpec,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    squares: Vec<Square>,
}

impl OrientedGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Vertices ordered by label; `vertices()[l - 1].label == l`.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges sorted by `(min label, max label, axis, kind)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, label: usize) -> &Vertex {
        &self.vertices[label - 1]
    }

    pub fn dashed_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Dashed)
    }

    pub fn solid_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Solid)
    }

    /// Number of edge ends at each vertex, parallel edges counted separately.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.tail - 1] += 1;
            deg[e.head - 1] += 1;
        }
        deg
    }

    /// Reassembles a grid from its spec and edge list, recomputing squares.
    /// The edge multiset must match what [`build_grid`] produces up to direction.
    pub(crate) fn from_parts(spec: GridSpec, mut edges: Vec<Edge>) -> Result<Self> {
        let reference = build_unoriented(&spec);
        edges.sort_by_key(|e| e.key());
        let same = reference.len() == edges.len()
            && reference
                .iter()
                .zip(&edges)
                .all(|(a, b)| a.key() == b.key());
        if !same {
            return Err(Error::InvalidInput(format!(
                "edge set does not match the {spec} grid"
            )));
        }
        let n = spec.num_vertices();
        let dims = spec.dims().to_vec();
        let vertices = (1..=n)
            .map(|l| Vertex {
                label: l,
                coords: coords_of(&dims, l),
            })
            .collect();
        let squares = collect_squares(&spec, &edges);
        Ok(OrientedGrid {
            spec,
            vertices,
            edges,
            squares,
        })
    }
}

fn step(spec: &GridSpec, coords: &[usize], axis: usize) -> Option<(Vec<usize>, usize)> {
    let n = spec.dims()[axis];
    let mut c = coords.to_vec();
    if c[axis] < n {
        c[axis] += 1;
        Some((c, 0))
    } else if spec.is_cyclic(axis) {
        c[axis] = 1;
        Some((c, usize::from(n == 2)))
    } else {
        None
    }
}

fn twist(dims: &[usize], k: &[usize]) -> Vec<usize> {
    let mut c = Vec::with_capacity(dims.len());
    c.push(dims[0]);
    c.extend(k.iter().zip(&dims[1..]).map(|(&ki, &n)| n + 1 - ki));
    c
}

fn lattice(dims: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut c = vec![1; dims.len()];
    for _ in 0..total {
        out.push(c.clone());
        for (k, &m) in c.iter_mut().zip(dims) {
            if *k < m {
                *k += 1;
                break;
            }
            *k = 1;
        }
    }
    out
}

/// Solid edges oriented low→high plus provisionally oriented dashed edges, sorted.
fn build_unoriented(spec: &GridSpec) -> Vec<Edge> {
    let dims = spec.dims();
    let mut edges = Vec::new();
    for c in lattice(dims) {
        let l = label_of(dims, &c);
        for axis in 0..dims.len() {
            if let Some((nb, _)) = step(spec, &c, axis) {
                let m = label_of(dims, &nb);
                edges.push(Edge {
                    tail: l.min(m),
                    head: l.max(m),
                    axis: axis + 1,
                    kind: EdgeKind::Solid,
                });
            }
        }
    }
    if spec.mode().is_twisted() {
        for k in lattice(&dims[1..]) {
            let mut near = vec![1];
            near.extend_from_slice(&k);
            edges.push(Edge {
                tail: label_of(dims, &near),
                head: label_of(dims, &twist(dims, &k)),
                axis: 1,
                kind: EdgeKind::Dashed,
            });
        }
    }
    edges.sort_by_key(|e| e.key());
    edges
}

struct EdgeIndex(HashMap<EdgeKey, Vec<usize>>);

impl EdgeIndex {
    fn new(edges: &[Edge]) -> Self {
        let mut map: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            map.entry(e.key()).or_default().push(i);
        }
        EdgeIndex(map)
    }

    fn find(&self, a: usize, b: usize, axis: usize, kind: EdgeKind, occ: usize) -> usize {
        self.0[&(a.min(b), a.max(b), axis, kind)][occ]
    }
}

fn collect_squares(spec: &GridSpec, edges: &[Edge]) -> Vec<Square> {
    let dims = spec.dims();
    let d = dims.len();
    let idx = EdgeIndex::new(edges);
    let lab = |c: &[usize]| label_of(dims, c);
    let mut squares = Vec::new();
    for c in lattice(dims) {
        for i in 0..d {
            let Some((ci, oi)) = step(spec, &c, i) else {
                continue;
            };
            for j in i + 1..d {
                let Some((cj, oj)) = step(spec, &c, j) else {
                    continue;
                };
                let (cij, _) = step(spec, &ci, j).expect("step along j exists");
                let v = [lab(&c), lab(&ci), lab(&cij), lab(&cj)];
                let solid = EdgeKind::Solid;
                squares.push(Square {
                    vertices: v,
                    edges: [
                        idx.find(v[0], v[1], i + 1, solid, oi),
                        idx.find(v[1], v[2], j + 1, solid, oj),
                        idx.find(v[2], v[3], i + 1, solid, oi),
                        idx.find(v[3], v[0], j + 1, solid, oj),
                    ],
                    kind: SquareKind::Axis(i + 1, j + 1),
                });
            }
        }
    }
    if spec.mode().is_twisted() {
        for k in lattice(&dims[1..]) {
            let mut near = vec![1];
            near.extend_from_slice(&k);
            for j in 1..d {
                let Some((near2, occ)) = step(spec, &near, j) else {
                    continue;
                };
                let far = twist(dims, &k);
                let far2 = twist(dims, &near2[1..]);
                let v = [lab(&near), lab(&near2), lab(&far2), lab(&far)];
                squares.push(Square {
                    vertices: v,
                    edges: [
                        idx.find(v[0], v[1], j + 1, EdgeKind::Solid, occ),
                        idx.find(v[1], v[2], 1, EdgeKind::Dashed, 0),
                        idx.find(v[2], v[3], j + 1, EdgeKind::Solid, occ),
                        idx.find(v[3], v[0], 1, EdgeKind::Dashed, 0),
                    ],
                    kind: SquareKind::Dashed(j + 1),
                });
            }
        }
    }
    squares
}

/// Number of edges of `sq` pointing along its traversal direction.
pub fn co_oriented_count(grid: &OrientedGrid, sq: &Square) -> usize {
    (0..4)
        .filter(|&i| grid.edges[sq.edges[i]].tail == sq.vertices[i])
        .count()
}

/// Builds the grid with canonical solid orientation and propagated dashed orientation.
pub fn build_grid(spec: &GridSpec) -> Result<OrientedGrid> {
    let grid = OrientedGrid::from_parts(spec.clone(), build_unoriented(spec))?;
    orient_dashed_edges(&grid)
}

pub fn orient_dashed_edges(grid: &OrientedGrid) -> Result<OrientedGrid> {
    orient_dashed_edges_with(grid, DashedSeed::Outward)
}

/// Re-derives every dashed direction from the seed by odd-parity propagation
/// over dashed squares, breadth first from the dashed edge at label 1.
pub fn orient_dashed_edges_with(grid: &OrientedGrid, seed: DashedSeed) -> Result<OrientedGrid> {
    let mut out = grid.clone();
    let dashed: Vec<usize> = (0..out.edges.len())
        .filter(|&i| out.edges[i].kind == EdgeKind::Dashed)
        .collect();
    if dashed.is_empty() {
        return Ok(out);
    }
    let mut squares_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for (si, sq) in out.squares.iter().enumerate() {
        if let SquareKind::Dashed(_) = sq.kind {
            squares_of.entry(sq.edges[1]).or_default().push(si);
            squares_of.entry(sq.edges[3]).or_default().push(si);
        }
    }
    let seed_edge = *dashed
        .iter()
        .find(|&&i| out.edges[i].u() == 1)
        .ok_or_else(|| Error::Inconsistent("no dashed edge at label 1".into()))?;
    let mut fixed = vec![false; out.edges.len()];
    let e = out.edges[seed_edge];
    let outward = e.tail == 1;
    if outward != (seed == DashedSeed::Outward) {
        out.edges[seed_edge] = e.reversed();
    }
    fixed[seed_edge] = true;
    let mut queue = VecDeque::from([seed_edge]);
    while let Some(ei) = queue.pop_front() {
        for &si in squares_of.get(&ei).map(Vec::as_slice).unwrap_or(&[]) {
            let sq = out.squares[si];
            let other = if sq.edges[1] == ei { 3 } else { 1 };
            let oi = sq.edges[other];
            let rest = (0..4)
                .filter(|&p| p != other && out.edges[sq.edges[p]].tail == sq.vertices[p])
                .count();
            let want_co = rest % 2 == 0;
            let is_co = out.edges[oi].tail == sq.vertices[other];
            if fixed[oi] {
                if want_co != is_co {
                    return Err(Error::Inconsistent(format!(
                        "dashed square {:?} cannot be oddly oriented",
                        sq.vertices
                    )));
                }
                continue;
            }
            if want_co != is_co {
                out.edges[oi] = out.edges[oi].reversed();
            }
            fixed[oi] = true;
            queue.push_back(oi);
        }
    }
    if let Some(&i) = dashed.iter().find(|&&i| !fixed[i]) {
        return Err(Error::Inconsistent(format!(
            "dashed edge {}–{} unreachable from the seed",
            out.edges[i].u(),
            out.edges[i].v()
        )));
    }
    Ok(out)
}

/// Odd/total counts per square family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OrientationReport {
    pub axis_odd: usize,
    pub axis_total: usize,
    pub dashed_odd: usize,
    pub dashed_total: usize,
}

impl OrientationReport {
    pub fn all_odd(&self) -> bool {
        self.axis_odd == self.axis_total && self.dashed_odd == self.dashed_total
    }
}

pub fn orientation_report(grid: &OrientedGrid) -> OrientationReport {
    let mut r = OrientationReport::default();
    for sq in &grid.squares {
        let odd = co_oriented_count(grid, sq) % 2 == 1;
        match sq.kind {
            SquareKind::Axis(..) => {
                r.axis_total += 1;
                r.axis_odd += usize::from(odd);
            }
            SquareKind::Dashed(_) => {
                r.dashed_total += 1;
                r.dashed_odd += usize::from(odd);
            }
        }
    }
    r
}

/// True iff every recorded square has an odd number of co-oriented edges.
pub fn verify_odd_orientation(grid: &OrientedGrid) -> bool {
    grid.squares
        .iter()
        .all(|sq| co_oriented_count(grid, sq) % 2 == 1)
}
