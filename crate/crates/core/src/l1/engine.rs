//! L1 aggregate-max query and top-k over a [`DragIndex`].
//!
//! Inside a wedge of its cell, the distance to the owner equals a rotated
//! coordinate minus a constant, so the nearest point of the wedge is the
//! first point hit by a dragged diagonal segment. A wedge with a middle
//! segment splits into a corner quadrant and a slab below it; a wedge
//! without one is a single quadrant.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::drag::{Axis, Band, Direction, DragIndex, DragQuery, Floor, Quadrant, Slope, Sweep, Track};
use crate::error::{Error, Result};
use crate::geometry::{AggregateResult, Metric, Point, Symmetry};
use crate::l1::fvd::{build_cells, compute_qmax, g_value, Extents, L1Cell, QueryExtremes};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Subregion {
    /// A closed quadrant.
    Corner { quadrant: Quadrant, corner: (f64, f64) },
    /// A slab with a floor on the swept coordinate.
    Band(Band),
}

/// One dragging subquery of a cell: over its region the distance to the
/// owner is `sweep(p) - offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subquery {
    pub region: Subregion,
    pub sweep: Sweep,
    pub offset: f64,
}

impl Subquery {
    pub fn contains(&self, p: &Point) -> bool {
        match self.region {
            Subregion::Corner { quadrant, corner } => quadrant.contains(corner, p),
            Subregion::Band(band) => band.contains(p),
        }
    }

    pub fn distance(&self, p: &Point) -> f64 {
        self.sweep.at(p) - self.offset
    }

    /// The subquery as a public dragging query.
    pub fn to_drag_query(&self) -> DragQuery {
        match self.region {
            Subregion::Corner { quadrant, corner } => DragQuery::corner(corner, quadrant),
            Subregion::Band(band) => {
                let (lo, hi) = match band.axis {
                    Axis::Rows => (Track::horizontal(band.lo), Track::horizontal(band.hi)),
                    Axis::Cols => (Track::vertical(band.lo), Track::vertical(band.hi)),
                };
                let lo = if band.lo_open { lo.opened() } else { lo };
                let hi = if band.hi_open { hi.opened() } else { hi };
                // Horizontal tracks: ±u sweeps have slope -1, ±v slope +1.
                let (slope, direction) = match band.sweep {
                    Sweep::U => (Slope::Neg, Direction::Forward),
                    Sweep::NegU => (Slope::Neg, Direction::Backward),
                    Sweep::V => (Slope::Pos, Direction::Forward),
                    Sweep::NegV => (Slope::Pos, Direction::Backward),
                };
                let Floor::AtLeast(c) = band.floor else {
                    unreachable!("decomposition bands have inclusive floors")
                };
                let start = match band.sweep {
                    Sweep::U => (c, 0.0),
                    Sweep::NegU => (-c, 0.0),
                    Sweep::V => (c, 0.0),
                    Sweep::NegV => (-c, 0.0),
                };
                DragQuery::ParallelTrack { tracks: [lo, hi], slope, direction, start, after: None }
            }
        }
    }
}

/// Subqueries whose regions cover the cell; each lies inside the cell.
pub fn decompose_cell(cell: &L1Cell, distinct: &[Point]) -> Vec<Subquery> {
    let mut out = Vec::with_capacity(2 * cell.roles.len());
    for &role in &cell.roles {
        let (sx, sy) = role.signs();
        // The reflection mapping this role onto the SW one.
        let s = Symmetry::reflection(sx > 0.0, sy > 0.0);
        let e = Extents::of(distinct.iter().map(|p| s.apply(p.xy())));
        let x = (e.u_min + e.v_max) / 2.0;
        let y = (e.u_min - e.v_min) / 2.0;
        let c = (e.u_min + e.u_max) / 2.0;
        let fx = if s.flip_x { -1.0 } else { 1.0 };
        let fy = if s.flip_y { -1.0 } else { 1.0 };
        let quadrant = Quadrant::from_signs(fx, fy);
        let sweep = quadrant.sweep();
        let offset = e.u_min;
        if c > x + y {
            out.push(Subquery {
                region: Subregion::Corner { quadrant, corner: s.invert((x, c - x)) },
                sweep,
                offset,
            });
            let (lo, lo_open, hi, hi_open) = if fy > 0.0 { (y, false, c - x, true) } else { (x - c, true, -y, false) };
            out.push(Subquery {
                region: Subregion::Band(Band {
                    axis: Axis::Rows,
                    lo,
                    hi,
                    lo_open,
                    hi_open,
                    sweep,
                    floor: Floor::AtLeast(c),
                }),
                sweep,
                offset,
            });
        } else {
            out.push(Subquery { region: Subregion::Corner { quadrant, corner: s.invert((x, y)) }, sweep, offset });
        }
    }
    out
}

/// Instrumentation for one query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Linear passes over the query set.
    pub query_passes: usize,
    /// Primitive slab/quadrant minimizations.
    pub drag_queries: usize,
    /// Candidate-heap pushes and pops.
    pub heap_ops: usize,
    /// Largest candidate-heap size in any cell stream.
    pub max_heap: usize,
}

/// The L1 query engine.
#[derive(Debug, Clone)]
pub struct L1Index {
    drag: DragIndex,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    distance: f64,
    point: Point,
    source: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.point.id.cmp(&other.point.id))
            .then(self.source.cmp(&other.source))
    }
}

/// Lazily emits the points of one cell in `(distance to owner, id)` order.
#[derive(Debug)]
pub struct CellStream<'a> {
    index: &'a DragIndex,
    pub owner: Point,
    subqueries: Vec<Subquery>,
    heap: BinaryHeap<Reverse<Candidate>>,
    emitted: HashSet<usize>,
    last: Option<(f64, usize)>,
    pub stats: QueryStats,
}

impl<'a> CellStream<'a> {
    pub fn new(index: &'a DragIndex, cell: &L1Cell, distinct: &[Point]) -> Self {
        let subqueries = decompose_cell(cell, distinct);
        let mut stream = CellStream {
            index,
            owner: cell.owner,
            heap: BinaryHeap::with_capacity(subqueries.len()),
            subqueries,
            emitted: HashSet::new(),
            last: None,
            stats: QueryStats::default(),
        };
        for k in 0..stream.subqueries.len() {
            stream.refill(k, None);
        }
        stream
    }

    /// Next hit of subquery `k` strictly after `(w, id)`.
    fn refill(&mut self, k: usize, after: Option<(f64, usize)>) {
        let sub = self.subqueries[k];
        let (hit, used) = match sub.region {
            Subregion::Corner { quadrant, corner } => match after {
                None => (self.index.corner_min(quadrant, corner, false, false), 1),
                Some((w, id)) => self.index.corner_after_counted(quadrant, corner, Floor::After(w, id)),
            },
            Subregion::Band(band) => {
                let band = match after {
                    None => band,
                    // the previous hit already satisfies the original floor
                    Some((w, id)) => Band { floor: Floor::After(w, id), ..band },
                };
                (self.index.band_min(&band), 1)
            }
        };
        self.stats.drag_queries += used;
        if let Some(p) = hit {
            self.heap.push(Reverse(Candidate { distance: sub.distance(&p), point: p, source: k }));
            self.stats.heap_ops += 1;
            self.stats.max_heap = self.stats.max_heap.max(self.heap.len());
        }
    }

    /// Peeks at the next emission without consuming it.
    fn peek(&mut self) -> Option<(f64, usize)> {
        self.skip_emitted();
        self.heap.peek().map(|Reverse(c)| (c.distance, c.point.id))
    }

    fn skip_emitted(&mut self) {
        while let Some(Reverse(top)) = self.heap.peek().copied() {
            if !self.emitted.contains(&top.point.id) {
                break;
            }
            self.heap.pop();
            self.stats.heap_ops += 1;
            let w = self.subqueries[top.source].sweep.at(&top.point);
            self.refill(top.source, Some((w, top.point.id)));
        }
    }
}

impl Iterator for CellStream<'_> {
    /// A point of the cell and its distance to the owner.
    type Item = (Point, f64);

    fn next(&mut self) -> Option<Self::Item> {
        self.skip_emitted();
        let Reverse(top) = self.heap.pop()?;
        self.stats.heap_ops += 1;
        let w = self.subqueries[top.source].sweep.at(&top.point);
        self.refill(top.source, Some((w, top.point.id)));
        self.emitted.insert(top.point.id);
        let key = (top.distance, top.point.id);
        assert!(
            self.last.is_none_or(|last| last.0 < key.0 || (last.0 == key.0 && last.1 < key.1)),
            "cell stream emitted out of order"
        );
        self.last = Some(key);
        Some((top.point, top.distance))
    }
}

impl L1Index {
    pub fn build(points: &[Point]) -> Result<Self> {
        Ok(L1Index { drag: DragIndex::build(points)? })
    }

    pub fn drag_index(&self) -> &DragIndex {
        &self.drag
    }

    pub fn len(&self) -> usize {
        self.drag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.drag.is_empty()
    }

    pub fn query(&self, queries: &[Point]) -> Result<AggregateResult> {
        self.query_with_stats(queries).map(|(r, _)| r)
    }

    /// The point of P minimizing the farthest L1 distance to `queries`.
    pub fn query_with_stats(&self, queries: &[Point]) -> Result<(AggregateResult, QueryStats)> {
        let extremes = compute_qmax(queries)?;
        let mut stats = QueryStats { query_passes: 1, ..QueryStats::default() };
        let mut best: Option<(f64, Point)> = None;
        for cell in build_cells(&extremes) {
            for sub in decompose_cell(&cell, &extremes.distinct) {
                let hit = match sub.region {
                    Subregion::Corner { quadrant, corner } => self.drag.corner_min(quadrant, corner, false, false),
                    Subregion::Band(band) => self.drag.band_min(&band),
                };
                stats.drag_queries += 1;
                if let Some(p) = hit {
                    let d = sub.distance(&p);
                    let better = best.is_none_or(|(bd, bp)| d < bd || (d == bd && p.id < bp.id));
                    if better {
                        best = Some((d, p));
                    }
                }
            }
        }
        let (_, point) = best.expect("the cells cover the plane and P is non-empty");
        Ok((result(point, &extremes), stats))
    }

    pub fn top_k(&self, queries: &[Point], k: usize) -> Result<Vec<AggregateResult>> {
        self.top_k_with_stats(queries, k).map(|(r, _)| r)
    }

    /// The `min(k, n)` points with the smallest `(g, id)`, in that order.
    pub fn top_k_with_stats(&self, queries: &[Point], k: usize) -> Result<(Vec<AggregateResult>, QueryStats)> {
        if k == 0 {
            return Err(Error::InvalidK);
        }
        let extremes = compute_qmax(queries)?;
        let mut streams: Vec<CellStream> = build_cells(&extremes)
            .iter()
            .map(|cell| CellStream::new(&self.drag, cell, &extremes.distinct))
            .collect();
        let mut out = Vec::with_capacity(k.min(self.len()));
        let mut seen = HashSet::new();
        while out.len() < k {
            let next = streams
                .iter_mut()
                .enumerate()
                .filter_map(|(i, s)| s.peek().map(|key| (key, i)))
                .min_by(|a, b| a.0 .0.total_cmp(&b.0 .0).then(a.0 .1.cmp(&b.0 .1)));
            let Some((_, i)) = next else { break };
            let (p, _) = streams[i].next().expect("peeked");
            if seen.insert(p.id) {
                out.push(result(p, &extremes));
            }
        }
        let mut stats = QueryStats { query_passes: 1, ..QueryStats::default() };
        for s in &streams {
            stats.drag_queries += s.stats.drag_queries;
            stats.heap_ops += s.stats.heap_ops;
            stats.max_heap = stats.max_heap.max(s.stats.max_heap);
        }
        Ok((out, stats))
    }
}

fn result(point: Point, extremes: &QueryExtremes) -> AggregateResult {
    AggregateResult { point, g: g_value(&point, extremes, Metric::L1) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::points_from_coords;
    use crate::l1::fvd::owner_of;
    use crate::oracle::{brute_drag, brute_query, brute_top_k};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(rng: &mut ChaCha8Rng, n: usize, span: i64) -> Vec<Point> {
        (0..n)
            .map(|i| Point::new(rng.random_range(0..span) as f64, rng.random_range(0..span) as f64, i))
            .collect()
    }

    #[test]
    fn query_example() {
        let p = points_from_coords(&[(1.0, 1.0), (5.0, 0.0), (0.0, 6.0)]);
        let q = points_from_coords(&[(0.0, 0.0), (2.0, 2.0)]);
        let r = L1Index::build(&p).unwrap().query(&q).unwrap();
        assert_eq!((r.point.xy(), r.g), ((1.0, 1.0), 2.0));
    }

    #[test]
    fn single_query_point_is_nearest_neighbor() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_points(&mut rng, 300, 1000);
        let idx = L1Index::build(&p).unwrap();
        for _ in 0..200 {
            let q = [Point::new(rng.random_range(-200..1200) as f64, rng.random_range(-200..1200) as f64, 0)];
            let nn = p
                .iter()
                .min_by(|a, b| crate::geometry::l1(a, &q[0]).total_cmp(&crate::geometry::l1(b, &q[0])).then(a.id.cmp(&b.id)))
                .unwrap();
            assert_eq!(idx.query(&q).unwrap().point.id, nn.id);
        }
    }

    #[test]
    fn empty_query_is_an_error() {
        let idx = L1Index::build(&points_from_coords(&[(0.0, 0.0)])).unwrap();
        assert_eq!(idx.query(&[]), Err(Error::EmptyQuery));
        assert_eq!(idx.top_k(&points_from_coords(&[(0.0, 0.0)]), 0), Err(Error::InvalidK));
    }

    #[test]
    fn decomposition_tiles_each_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut sets = vec![points_from_coords(&[(0.0, 0.0), (4.0, 4.0)]), vec![Point::new(3.0, 1.0, 0)]];
        for _ in 0..400 {
            let m = rng.random_range(1..6);
            sets.push(random_points(&mut rng, m, 8));
        }
        for q in sets {
            let e = compute_qmax(&q).unwrap();
            let cells = build_cells(&e);
            let total: usize = cells.iter().map(|c| decompose_cell(c, &e.distinct).len()).sum();
            assert!(total <= 6, "{total} subqueries for {q:?}");
            for cell in &cells {
                let subs = decompose_cell(cell, &e.distinct);
                assert!(subs.len() <= 2 * cell.roles.len());
                for i in -40..=40 {
                    for j in -40..=40 {
                        let p = Point::new(i as f64 / 2.0, j as f64 / 2.0, 0);
                        let inside: Vec<&Subquery> = subs.iter().filter(|s| s.contains(&p)).collect();
                        assert_eq!(!inside.is_empty(), cell.contains(p.xy()), "{q:?} {cell:?} {p:?}");
                        for s in inside {
                            assert_eq!(s.distance(&p), e.extents().g(p.x, p.y));
                        }
                    }
                }
            }
            // the whole plane is covered
            assert!(owner_of(&cells, (1e6, -1e6)).is_some());
        }
    }

    #[test]
    fn subqueries_round_trip_through_the_public_api() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_points(&mut rng, 200, 30);
        let idx = DragIndex::build(&p).unwrap();
        for _ in 0..200 {
            let q = random_points(&mut rng, 4, 30);
            let e = compute_qmax(&q).unwrap();
            for cell in build_cells(&e) {
                for sub in decompose_cell(&cell, &e.distinct) {
                    let public = idx.drag(&sub.to_drag_query()).unwrap().map(|h| h.point.id);
                    let direct = match sub.region {
                        Subregion::Corner { quadrant, corner } => idx.corner_min(quadrant, corner, false, false),
                        Subregion::Band(band) => idx.band_min(&band),
                    };
                    assert_eq!(public, direct.map(|p| p.id));
                    assert_eq!(public, brute_drag(&p, &sub.to_drag_query()).unwrap().map(|h| h.point.id));
                }
            }
        }
    }

    #[test]
    fn query_and_top_k_match_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for round in 0..300 {
            let span = if round % 3 == 0 { 12 } else { 1_000_000 };
            let n = rng.random_range(1..120);
            let m = rng.random_range(1..30);
            let p = random_points(&mut rng, n, span);
            let q = random_points(&mut rng, m, span);
            let idx = L1Index::build(&p).unwrap();
            let (r, stats) = idx.query_with_stats(&q).unwrap();
            assert_eq!(r, brute_query(&p, &q, Metric::L1).unwrap());
            assert!(stats.drag_queries <= 6);
            let k = rng.random_range(1..=n + 2);
            let (top, tstats) = idx.top_k_with_stats(&q, k).unwrap();
            assert_eq!(top, brute_top_k(&p, &q, Metric::L1, k).unwrap());
            assert_eq!(top[0], r);
            assert!(tstats.max_heap <= 6);
        }
    }

    #[test]
    fn cell_streams_enumerate_their_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let p = random_points(&mut rng, 150, 16);
            let q = random_points(&mut rng, 5, 16);
            let idx = DragIndex::build(&p).unwrap();
            let e = compute_qmax(&q).unwrap();
            for cell in build_cells(&e) {
                let got: Vec<usize> = CellStream::new(&idx, &cell, &e.distinct).map(|(p, _)| p.id).collect();
                let mut want: Vec<&Point> = p.iter().filter(|x| cell.contains(x.xy())).collect();
                want.sort_by(|a, b| {
                    let (ga, gb) = (e.extents().g(a.x, a.y), e.extents().g(b.x, b.y));
                    ga.total_cmp(&gb).then(a.id.cmp(&b.id))
                });
                assert_eq!(got, want.iter().map(|p| p.id).collect::<Vec<_>>());
            }
        }
    }
}
