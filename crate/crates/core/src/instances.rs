//! Seeded random instances.
//!
//! Coordinates are integers so that L1 arithmetic and squared L2 distances
//! are exact. Instance `i` of seed `s` is drawn from its own ChaCha stream,
//! so any single instance can be regenerated from `(s, i)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::drag::{Direction, DragQuery, HitBound, Quadrant, Slope, Track};
use crate::geometry::Point;

/// Default coordinate range `[0, GRID)`.
pub const GRID: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub points: Vec<Point>,
    pub queries: Vec<Point>,
    pub k: usize,
}

/// Generator for instance `index` of `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` points uniform on `[0, span)^2` with ids `0..n`.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, n: usize, span: i64) -> Vec<Point> {
    (0..n)
        .map(|id| Point::new(rng.random_range(0..span) as f64, rng.random_range(0..span) as f64, id))
        .collect()
}

/// Random sizes `n in [1, max_n]`, `m in [1, max_m]`, `k in [1, n]`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_m: usize, span: i64) -> Instance {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let points = random_points(rng, n, span);
    let queries = random_points(rng, m, span);
    let k = rng.random_range(1..=n);
    Instance { points, queries, k }
}

/// An instance on a tiny grid: query extremes with even coordinates put
/// cell boundaries through many lattice points, and P is dense around them,
/// so boundary ties and duplicate coordinates are frequent.
pub fn tie_instance<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_m: usize) -> Instance {
    let m = rng.random_range(1..=max_m);
    let queries = (0..m)
        .map(|id| Point::new(2.0 * rng.random_range(0..6) as f64, 2.0 * rng.random_range(0..6) as f64, id))
        .collect();
    let n = rng.random_range(1..=max_n);
    let points = (0..n)
        .map(|id| Point::new(rng.random_range(-4..16) as f64, rng.random_range(-4..16) as f64, id))
        .collect();
    let k = rng.random_range(1..=n);
    Instance { points, queries, k }
}

/// A random dragging query of either kind over `[-span/4, 5span/4)^2`,
/// with an `after` bound 40% of the time.
pub fn random_drag_query<R: Rng + ?Sized>(rng: &mut R, span: i64, max_id: usize) -> DragQuery {
    let lo = -span / 4;
    let hi = span + span / 4;
    let after = if rng.random_bool(0.4) {
        Some(HitBound {
            distance: rng.random_range(0..span) as f64,
            id: rng.random_bool(0.5).then(|| rng.random_range(0..max_id.max(1))),
        })
    } else {
        None
    };
    let mut coord = || rng.random_range(lo..hi) as f64;
    let (a, b, c, d) = (coord(), coord(), coord(), coord());
    if rng.random_bool(0.5) {
        let quadrant = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE][rng.random_range(0..4)];
        DragQuery::OutOfCorner { corner: (a, b), quadrant, slope: quadrant.slope(), after }
    } else {
        let vertical = rng.random_bool(0.5);
        let track = |v: f64| if vertical { Track::vertical(v) } else { Track::horizontal(v) };
        let mut tracks = [track(a), track(b)];
        tracks[0].open = rng.random_bool(0.3);
        tracks[1].open = rng.random_bool(0.3);
        DragQuery::ParallelTrack {
            tracks,
            slope: if rng.random_bool(0.5) { Slope::Pos } else { Slope::Neg },
            direction: if rng.random_bool(0.5) { Direction::Forward } else { Direction::Backward },
            start: (c, d),
            after,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = random_instance(&mut instance_rng(42, 7), 50, 10, GRID);
        let b = random_instance(&mut instance_rng(42, 7), 50, 10, GRID);
        let c = random_instance(&mut instance_rng(42, 8), 50, 10, GRID);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.k >= 1 && a.k <= a.points.len());
        assert!(a.points.iter().all(|p| p.x >= 0.0 && p.x < GRID as f64 && p.x.fract() == 0.0));
    }
}
