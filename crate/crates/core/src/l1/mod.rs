//! L1 aggregate-max queries: the farthest-point diagram of the diagonal
//! extremes, and the engine that minimizes inside each cell by dragging.

pub mod engine;
pub mod fvd;

pub use engine::{decompose_cell, CellStream, L1Index, QueryStats, Subquery, Subregion};

pub use fvd::{
    bisector, build_cells, compute_qmax, g_value, owner_of, Bisector, BisectorKind, CellShape, Extents, L1Cell,
    QueryExtremes,
};
