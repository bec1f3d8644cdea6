//! Brute-force reference answers. Every engine in the crate is tested for
//! exact agreement with these, so they share the engines' tie rule: among
//! equal values the smaller id wins.

use std::cmp::Ordering;

use crate::drag::{DragQuery, Floor, Hit};
use crate::error::{Error, Result};
use crate::geometry::{cmp_key, dist, dist2, AggregateResult, Metric, Point};

/// `max_{q in Q} d(p, q)`, evaluated literally.
pub fn brute_g(p: &Point, queries: &[Point], metric: Metric) -> f64 {
    match metric {
        // Compare squared distances so argmax ties are decided exactly.
        Metric::L2 => queries.iter().map(|q| dist2(p, q)).fold(0.0, f64::max).sqrt(),
        Metric::L1 => queries.iter().map(|q| dist(p, q, metric)).fold(0.0, f64::max),
    }
}

/// Ranking key that is exact for integer inputs under both metrics.
fn exact_key(p: &Point, queries: &[Point], metric: Metric) -> f64 {
    match metric {
        Metric::L1 => brute_g(p, queries, metric),
        Metric::L2 => queries.iter().map(|q| dist2(p, q)).fold(0.0, f64::max),
    }
}

pub fn brute_query(points: &[Point], queries: &[Point], metric: Metric) -> Result<AggregateResult> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if queries.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let best = points
        .iter()
        .map(|p| (exact_key(p, queries, metric), p))
        .min_by(|a, b| cmp_key((a.0, a.1.id), (b.0, b.1.id)))
        .expect("non-empty");
    Ok(AggregateResult { point: *best.1, g: brute_g(best.1, queries, metric) })
}

/// The `min(k, n)` points with the smallest `(g, id)`, in that order.
pub fn brute_top_k(points: &[Point], queries: &[Point], metric: Metric, k: usize) -> Result<Vec<AggregateResult>> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    if queries.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let mut all: Vec<(f64, &Point)> = points.iter().map(|p| (exact_key(p, queries, metric), p)).collect();
    all.sort_by(|a, b| cmp_key((a.0, a.1.id), (b.0, b.1.id)));
    Ok(all
        .into_iter()
        .take(k)
        .map(|(_, p)| AggregateResult { point: *p, g: brute_g(p, queries, metric) })
        .collect())
}

/// Linear-scan answer to a dragging query.
pub fn brute_drag(points: &[Point], query: &DragQuery) -> Result<Option<Hit>> {
    let (sweep, origin) = query.sweep()?;
    let admitted: Box<dyn Fn(&Point) -> bool> = match *query {
        DragQuery::ParallelTrack { .. } => {
            let band = query.band()?;
            Box::new(move |p| band.contains(p))
        }
        DragQuery::OutOfCorner { corner, quadrant, after, .. } => {
            let floor = Floor::from_after(origin, after);
            Box::new(move |p| quadrant.contains(corner, p) && floor.admits(sweep.at(p), p.id))
        }
    };
    Ok(points
        .iter()
        .filter(|p| admitted(p))
        .min_by(|a, b| match sweep.at(a).total_cmp(&sweep.at(b)) {
            Ordering::Equal => a.id.cmp(&b.id),
            o => o,
        })
        .map(|p| Hit { point: *p, distance: sweep.at(p) - origin }))
}
