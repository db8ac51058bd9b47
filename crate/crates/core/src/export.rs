//! JSON and DOT serialisation of oriented grids.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Edge, EdgeKind, OrientedGrid};
use crate::spec::GridSpec;

/// Largest grid accepted by [`import_graph_json`].
pub const IMPORT_MAX_VERTICES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Dot,
}

impl std::fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GraphFormat::Json => "json",
            GraphFormat::Dot => "dot",
        })
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(GraphFormat::Json),
            "dot" => Ok(GraphFormat::Dot),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    label: usize,
    coords: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    tail: usize,
    head: usize,
    axis: usize,
    kind: EdgeKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRepr {
    spec: GridSpec,
    vertices: Vec<VertexRepr>,
    edges: Vec<EdgeRepr>,
}

fn sorted_edges(grid: &OrientedGrid) -> Vec<Edge> {
    let mut edges = grid.edges().to_vec();
    edges.sort_by_key(|e| (e.tail, e.head, e.axis, e.kind));
    edges
}

pub fn graph_to_json(grid: &OrientedGrid) -> String {
    let repr = GraphRepr {
        spec: grid.spec().clone(),
        vertices: grid
            .vertices()
            .iter()
            .map(|v| VertexRepr {
                label: v.label,
                coords: v.coords.clone(),
            })
            .collect(),
        edges: sorted_edges(grid)
            .into_iter()
            .map(|e| EdgeRepr {
                tail: e.tail,
                head: e.head,
                axis: e.axis,
                kind: e.kind,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&repr).expect("plain data serialises")
}

pub fn graph_to_dot(grid: &OrientedGrid) -> String {
    let spec = grid.spec();
    let mut s = format!("digraph \"{} {}\" {{\n", spec.mode(), spec.dims_label());
    for v in grid.vertices() {
        let coords: Vec<String> = v.coords.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            s,
            "  {} [label=\"{}\\n({})\"];",
            v.label,
            v.label,
            coords.join(",")
        );
    }
    for e in sorted_edges(grid) {
        let style = match e.kind {
            EdgeKind::Solid => "",
            EdgeKind::Dashed => ", style=dashed",
        };
        let _ = writeln!(s, "  {} -> {} [axis={}{}];", e.tail, e.head, e.axis, style);
    }
    s.push_str("}\n");
    s
}

pub fn export_graph(grid: &OrientedGrid, format: &str) -> Result<String> {
    Ok(match format.parse::<GraphFormat>()? {
        GraphFormat::Json => graph_to_json(grid),
        GraphFormat::Dot => graph_to_dot(grid),
    })
}

/// Reads a grid written by [`graph_to_json`]. The edge set must be the one of
/// the declared spec; orientations are taken as given.
pub fn import_graph_json(text: &str) -> Result<OrientedGrid> {
    let repr: GraphRepr =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
    let n = repr.spec.num_vertices();
    if n > IMPORT_MAX_VERTICES {
        return Err(Error::TooLarge {
            n,
            cap: IMPORT_MAX_VERTICES,
        });
    }
    if repr.vertices.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} vertices, found {}",
            repr.vertices.len()
        )));
    }
    let mut edges = Vec::with_capacity(repr.edges.len());
    for e in &repr.edges {
        if e.tail == 0 || e.tail > n || e.head == 0 || e.head > n || e.tail == e.head {
            return Err(Error::InvalidInput(format!(
                "edge {} -> {} is out of range",
                e.tail, e.head
            )));
        }
        edges.push(Edge {
            tail: e.tail,
            head: e.head,
            axis: e.axis,
            kind: e.kind,
        });
    }
    let grid = OrientedGrid::from_parts(repr.spec, edges)?;
    for (v, r) in grid.vertices().iter().zip(&repr.vertices) {
        if v.label != r.label || v.coords != r.coords {
            return Err(Error::InvalidInput(format!(
                "vertex {} does not carry its boustrophedon coordinates",
                r.label
            )));
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::spec::Mode;

    fn grid(dims: &[usize], mode: Mode) -> OrientedGrid {
        build_grid(&GridSpec::new(dims.to_vec(), mode).unwrap()).unwrap()
    }

    #[test]
    fn json_roundtrip() {
        for (d, m) in [
            (vec![4, 2, 2], Mode::Moebius),
            (vec![2, 2, 2], Mode::Klein),
            (vec![3, 3], Mode::Free),
            (vec![2, 3], Mode::Toroidal),
        ] {
            let g = grid(&d, m);
            let back = import_graph_json(&graph_to_json(&g)).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn moebius_dot_golden() {
        let g = grid(&[4, 2, 2], Mode::Moebius);
        assert_eq!(
            graph_to_dot(&g),
            include_str!("../tests/data/moebius_4x2x2.dot")
        );
    }

    #[test]
    fn unknown_format() {
        let g = grid(&[2, 2], Mode::Free);
        assert!(matches!(
            export_graph(&g, "graphml"),
            Err(Error::UnknownFormat(f)) if f == "graphml"
        ));
    }

    #[test]
    fn import_rejects_tampering() {
        let g = grid(&[3, 3], Mode::Free);
        let text = graph_to_json(&g);
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["edges"].as_array_mut().unwrap().pop();
        assert!(import_graph_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["vertices"][0]["coords"] = serde_json::json!([2, 1]);
        assert!(import_graph_json(&v.to_string()).is_err());
        assert!(matches!(import_graph_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn import_keeps_orientation() {
        let g = grid(&[2, 2], Mode::Free);
        let mut v: serde_json::Value = serde_json::from_str(&graph_to_json(&g)).unwrap();
        let e = &mut v["edges"][0];
        let (t, h) = (e["tail"].clone(), e["head"].clone());
        e["tail"] = h;
        e["head"] = t;
        let back = import_graph_json(&v.to_string()).unwrap();
        assert_ne!(back, g);
        assert!(!crate::grid::verify_odd_orientation(&back));
    }
}
