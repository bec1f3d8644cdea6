//! Exact aggregate-max nearest-neighbor queries over planar point sets.
//!
//! Given a static set `P`, a query set `Q` asks for the point of `P` that
//! minimizes `g(p, Q) = max_{q in Q} d(p, q)`. Ties are always broken
//! towards the smaller point id.
//!
//! * L1 ([`L1Index`]): `Q` reduces to at most four diagonal extremes whose
//!   farthest-point diagram has at most four cells; inside each cell the
//!   nearest point is found with a constant number of segment-dragging
//!   queries. Top-k runs one lazy stream per cell.
//! * L2 ([`PartitionTree`], [`l2_query`]): the farthest-point diagram of the
//!   hull of `Q` is triangulated, and each triangle is answered by a
//!   partition tree whose nodes carry Delaunay nearest-neighbor structures.
//!
//! [`oracle`] holds the brute-force definitions every engine is tested
//! against.
//!
//! ```
//! use annmax_core::{points_from_coords, L1Index, Metric};
//!
//! let p = points_from_coords(&[(1.0, 1.0), (5.0, 0.0), (0.0, 6.0)]);
//! let q = points_from_coords(&[(0.0, 0.0), (2.0, 2.0)]);
//! let best = L1Index::build(&p)?.query(&q)?;
//! assert_eq!((best.point.id, best.g), (0, 2.0));
//! # let _ = Metric::L1;
//! # Ok::<(), annmax_core::Error>(())
//! ```

pub mod drag;
pub mod error;
pub mod geometry;
pub mod instances;
pub mod l1;
pub mod l2;
pub mod oracle;

pub use drag::{Direction, DragIndex, DragQuery, Hit, HitBound, Quadrant, Slope, Track};
pub use error::{Error, Result};
pub use geometry::{dist, points_from_coords, rotate45, AggregateResult, Metric, Point, RotatedPoint};
pub use l1::{compute_qmax, g_value, L1Cell, L1Index, QueryExtremes, QueryStats};
pub use l2::{l2_query, l2_query_with_stats, L2Stats, PartitionTree};
