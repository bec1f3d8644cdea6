//! Seeded fixtures shared by the benchmarks.

use annmax_core::instances::{instance_rng, random_drag_query, random_points, GRID};
use annmax_core::{DragQuery, Point};

/// A point set with a batch of query sets over the same grid.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub points: Vec<Point>,
    pub query_sets: Vec<Vec<Point>>,
}

/// `n` uniform points and `count` query sets of `m` points each.
pub fn fixture(n: usize, m: usize, count: usize, seed: u64) -> Fixture {
    let mut rng = instance_rng(seed, n as u64);
    let points = random_points(&mut rng, n, GRID);
    let query_sets = (0..count).map(|_| random_points(&mut rng, m, GRID)).collect();
    Fixture { points, query_sets }
}

/// `count` random dragging queries over the default grid.
pub fn drag_queries(count: usize, max_id: usize, seed: u64) -> Vec<DragQuery> {
    let mut rng = instance_rng(seed, u64::MAX);
    (0..count).map(|_| random_drag_query(&mut rng, GRID, max_id)).collect()
}
