//! Exact partition functions of monopole-dimer and loop-vertex models on
//! d-dimensional grids with free, cylindrical, toroidal, Möbius and Klein
//! boundaries.

pub mod cartesian;
pub mod det;
pub mod error;
pub mod export;
pub mod formulas;
pub mod grid;
pub mod kasteleyn;
pub mod label;
pub mod matrix;
pub mod modular;
pub mod oracle;
mod ordering;
pub mod real;
pub mod spec;
pub mod value;
pub mod verify;
pub mod weights;

pub use det::{det_exact, det_real, pfaffian_exact};
pub use error::{Error, Result};
pub use formulas::{eval_formula, eval_formula_exact, FormulaId};
pub use grid::{build_grid, verify_odd_orientation, Edge, EdgeKind, OrientedGrid, Vertex};
pub use kasteleyn::{build_k_from_graph, build_k_kronecker};
pub use label::boustrophedon_labels;
pub use oracle::{enumerate_loop_vertex, enumerate_matchings, enumerate_perfect_matchings};
pub use spec::{GridSpec, Mode};
pub use value::{Method, PartitionValue, Value};
pub use weights::WeightSpec;
