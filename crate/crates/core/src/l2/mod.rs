//! L2 aggregate-max queries: the farthest-point diagram of the query hull,
//! and a partition tree answering triangle-restricted nearest neighbors.

pub mod engine;
pub mod fvd;

pub use engine::{l2_query, l2_query_with_stats, L2Stats, NodeView, PartitionTree, Region};

pub use fvd::{
    clip_cell, convex_hull, farthest_vd, triangulate_cell, ClipBox, FarthestCell, FarthestDiagram, HalfPlane,
    Triangle, TriangulatedCell,
};
