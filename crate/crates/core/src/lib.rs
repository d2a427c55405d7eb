//! Spectral theory of finite quantum graphs with general vertex spaces.
//!
//! A graph is a [`WeightedGraph`]; boundary conditions are a
//! [`TotalVertexSpace`]. The discrete side lives in [`discrete`], the
//! metric side in [`metric`], heat traces in [`trace`] and isoperimetric
//! constants in [`cheeger`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cheeger;
pub mod checks;
pub mod discrete;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod metric;
pub mod space;
pub mod spectrum;
pub mod trace;

pub use error::{Error, Result};
pub use format::{parse_graph, print_graph};
pub use graph::{subdivide, Edge, End, Slot, ValidationReport, WeightedGraph};
pub use linalg::{CMatrix, CVector, LinearMap, C64};
pub use space::{
    dual_space, irreducible_decomposition, is_connected, make_space, oriented_space,
    ScatteringMatrix, SpaceKind, TotalVertexSpace, VertexSpace,
};
pub use spectrum::{Eigenvalue, Method, SpectrumResult};
