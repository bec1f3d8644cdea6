//! Segment-dragging queries over a static point set.
//!
//! A segment of slope ±1 dragged along two parallel axis-parallel tracks, or
//! out of an axis-parallel corner, first hits the point that minimizes one
//! rotated coordinate (`±u` or `±v`) over a slab or a quadrant. Both query
//! kinds therefore reduce to range minimization:
//!
//! * [`SlabTree`]: a merge-sort tree over one axis whose nodes keep their
//!   points sorted by `u` and by `v`. A slab query walks `O(log n)` canonical
//!   nodes and does a successor (or predecessor) search in each, which also
//!   supports an exclusive lower bound on the dragged coordinate.
//! * [`CornerTree`]: a merge-sort tree over `x` whose nodes keep their points
//!   sorted by `y` with prefix/suffix argmins of the four corner objectives.
//!
//! Ties are broken by `(coordinate, id)` order, so repeated "next hit"
//! queries enumerate a region exactly, with no general-position assumption.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{validate_points, Point};

/// Points per bottom block; blocks this small are scanned.
const LEAF: usize = 16;

/// The rotated coordinate a dragged segment sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sweep {
    U,
    NegU,
    V,
    NegV,
}

impl Sweep {
    #[inline]
    pub fn eval(self, x: f64, y: f64) -> f64 {
        let w = match self {
            Sweep::U => x + y,
            Sweep::NegU => -x - y,
            Sweep::V => x - y,
            Sweep::NegV => y - x,
        };
        // `-0.0 + 0.0 == +0.0`: keys are compared with `total_cmp`, which
        // would otherwise order the two zeros apart.
        w + 0.0
    }

    #[inline]
    pub fn at(self, p: &Point) -> f64 {
        self.eval(p.x, p.y)
    }

    /// `w = sx * x + sy * y`.
    pub fn from_signs(sx: f64, sy: f64) -> Sweep {
        match (sx > 0.0, sy > 0.0) {
            (true, true) => Sweep::U,
            (false, false) => Sweep::NegU,
            (true, false) => Sweep::V,
            (false, true) => Sweep::NegV,
        }
    }

    fn uses_u(self) -> bool {
        matches!(self, Sweep::U | Sweep::NegU)
    }

    fn negated(self) -> bool {
        matches!(self, Sweep::NegU | Sweep::NegV)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    NE,
    NW,
    SW,
    SE,
}

impl Quadrant {
    /// `(sx, sy)` with the quadrant being `sx * (x - cx) >= 0, sy * (y - cy) >= 0`.
    pub fn signs(self) -> (f64, f64) {
        match self {
            Quadrant::NE => (1.0, 1.0),
            Quadrant::NW => (-1.0, 1.0),
            Quadrant::SW => (-1.0, -1.0),
            Quadrant::SE => (1.0, -1.0),
        }
    }

    pub fn from_signs(sx: f64, sy: f64) -> Quadrant {
        match (sx > 0.0, sy > 0.0) {
            (true, true) => Quadrant::NE,
            (false, true) => Quadrant::NW,
            (false, false) => Quadrant::SW,
            (true, false) => Quadrant::SE,
        }
    }

    /// The coordinate minimized when dragging out of this corner; it is the
    /// L1 distance to the corner up to a constant.
    pub fn sweep(self) -> Sweep {
        let (sx, sy) = self.signs();
        Sweep::from_signs(sx, sy)
    }

    /// Slope of the segment that can be dragged out of this corner.
    pub fn slope(self) -> Slope {
        match self {
            Quadrant::NE | Quadrant::SW => Slope::Neg,
            Quadrant::NW | Quadrant::SE => Slope::Pos,
        }
    }

    pub fn contains(self, corner: (f64, f64), p: &Point) -> bool {
        let (sx, sy) = self.signs();
        sx * (p.x - corner.0) >= 0.0 && sy * (p.y - corner.1) >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    Pos,
    Neg,
}

/// Drag direction along the tracks: `Forward` is increasing x for
/// horizontal tracks and increasing y for vertical ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Horizontal tracks; the slab constrains `y`.
    Rows,
    /// Vertical tracks; the slab constrains `x`.
    Cols,
}

/// A track line given by an anchor point and a direction. Only
/// axis-parallel tracks are accepted by the queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Track {
    pub anchor: (f64, f64),
    pub direction: (f64, f64),
    /// Points on an open track are outside the slab.
    pub open: bool,
}

impl Track {
    pub fn horizontal(y: f64) -> Self {
        Track { anchor: (0.0, y), direction: (1.0, 0.0), open: false }
    }

    pub fn vertical(x: f64) -> Self {
        Track { anchor: (x, 0.0), direction: (0.0, 1.0), open: false }
    }

    pub fn through(a: (f64, f64), b: (f64, f64)) -> Self {
        Track { anchor: a, direction: (b.0 - a.0, b.1 - a.1), open: false }
    }

    pub fn opened(mut self) -> Self {
        self.open = true;
        self
    }

    fn axis(&self) -> Result<(Axis, f64)> {
        let (dx, dy) = self.direction;
        match (dx == 0.0, dy == 0.0) {
            (true, true) => Err(Error::MalformedTracks("track has no direction")),
            (false, true) => Ok((Axis::Rows, self.anchor.1)),
            (true, false) => Ok((Axis::Cols, self.anchor.0)),
            (false, false) => Err(Error::MalformedTracks("track is not axis-parallel")),
        }
    }
}

/// Exclusive lower bound on the drag distance of the next hit. With an id,
/// hits at exactly `distance` are admitted when their id is larger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitBound {
    pub distance: f64,
    pub id: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DragQuery {
    ParallelTrack {
        tracks: [Track; 2],
        slope: Slope,
        direction: Direction,
        /// Any point on the segment's starting line.
        start: (f64, f64),
        after: Option<HitBound>,
    },
    OutOfCorner {
        corner: (f64, f64),
        quadrant: Quadrant,
        slope: Slope,
        after: Option<HitBound>,
    },
}

impl DragQuery {
    pub fn corner(corner: (f64, f64), quadrant: Quadrant) -> Self {
        DragQuery::OutOfCorner { corner, quadrant, slope: quadrant.slope(), after: None }
    }

    pub fn with_after(mut self, bound: HitBound) -> Self {
        match &mut self {
            DragQuery::ParallelTrack { after, .. } | DragQuery::OutOfCorner { after, .. } => {
                *after = Some(bound)
            }
        }
        self
    }

    /// Swept coordinate and its value at the drag origin.
    pub fn sweep(&self) -> Result<(Sweep, f64)> {
        match *self {
            DragQuery::ParallelTrack { slope, direction, start, .. } => {
                let band = self.band()?;
                let _ = (slope, direction);
                Ok((band.sweep, band.sweep.eval(start.0, start.1)))
            }
            DragQuery::OutOfCorner { corner, quadrant, slope, .. } => {
                if slope != quadrant.slope() {
                    return Err(Error::InconsistentCorner);
                }
                let s = quadrant.sweep();
                Ok((s, s.eval(corner.0, corner.1)))
            }
        }
    }

    /// Whether `p` can be hit at all, ignoring any `after` bound: inside the
    /// slab and not behind the start line, or inside the closed quadrant.
    pub fn reachable(&self, p: &Point) -> Result<bool> {
        match *self {
            DragQuery::ParallelTrack { .. } => {
                let (_, origin) = self.sweep()?;
                Ok(Band { floor: Floor::AtLeast(origin), ..self.band()? }.contains(p))
            }
            DragQuery::OutOfCorner { corner, quadrant, .. } => {
                self.sweep()?;
                Ok(quadrant.contains(corner, p))
            }
        }
    }

    pub(crate) fn band(&self) -> Result<Band> {
        let DragQuery::ParallelTrack { tracks, slope, direction, start, after } = *self else {
            return Err(Error::WrongQueryKind);
        };
        let (axis_a, at_a) = tracks[0].axis()?;
        let (axis_b, at_b) = tracks[1].axis()?;
        if axis_a != axis_b {
            return Err(Error::MalformedTracks("tracks are not parallel"));
        }
        let ((lo, lo_open), (hi, hi_open)) = if at_a <= at_b {
            ((at_a, tracks[0].open), (at_b, tracks[1].open))
        } else {
            ((at_b, tracks[1].open), (at_a, tracks[0].open))
        };
        let forward = direction == Direction::Forward;
        let sweep = match (axis_a, slope, forward) {
            (Axis::Rows, Slope::Neg, true) | (Axis::Cols, Slope::Neg, true) => Sweep::U,
            (Axis::Rows, Slope::Neg, false) | (Axis::Cols, Slope::Neg, false) => Sweep::NegU,
            (Axis::Rows, Slope::Pos, true) | (Axis::Cols, Slope::Pos, false) => Sweep::V,
            (Axis::Rows, Slope::Pos, false) | (Axis::Cols, Slope::Pos, true) => Sweep::NegV,
        };
        let origin = sweep.eval(start.0, start.1);
        Ok(Band {
            axis: axis_a,
            lo,
            hi,
            lo_open,
            hi_open,
            sweep,
            floor: Floor::from_after(origin, after),
        })
    }
}

/// A hit together with its drag distance from the query origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub point: Point,
    pub distance: f64,
}

/// Admissible values of the swept coordinate `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Floor {
    /// `w >= c`
    AtLeast(f64),
    /// `w > c`
    Above(f64),
    /// `(w, id) > (c, id)` lexicographically
    After(f64, usize),
}

impl Floor {
    pub(crate) fn from_after(origin: f64, after: Option<HitBound>) -> Floor {
        match after {
            Some(b) if b.distance >= 0.0 => match b.id {
                Some(id) => Floor::After(origin + b.distance, id),
                None => Floor::Above(origin + b.distance),
            },
            _ => Floor::AtLeast(origin),
        }
    }

    #[inline]
    pub fn admits(&self, w: f64, id: usize) -> bool {
        match *self {
            Floor::AtLeast(c) => w >= c,
            Floor::Above(c) => w > c,
            Floor::After(c, cid) => w > c || (w == c && id > cid),
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Floor::AtLeast(c) | Floor::Above(c) | Floor::After(c, _) => c,
        }
    }
}

/// A slab between two axis-parallel lines, with a floor on the swept
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
    pub sweep: Sweep,
    pub floor: Floor,
}

impl Band {
    pub fn contains(&self, p: &Point) -> bool {
        let c = match self.axis {
            Axis::Rows => p.y,
            Axis::Cols => p.x,
        };
        let lo_ok = if self.lo_open { c > self.lo } else { c >= self.lo };
        let hi_ok = if self.hi_open { c < self.hi } else { c <= self.hi };
        lo_ok && hi_ok && self.floor.admits(self.sweep.at(p), p.id)
    }
}

#[inline]
fn better(points: &[Point], sweep: Sweep, a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(i), Some(j)) => {
            let (p, q) = (&points[i as usize], &points[j as usize]);
            match sweep.at(p).total_cmp(&sweep.at(q)).then(p.id.cmp(&q.id)) {
                Ordering::Greater => Some(j),
                _ => Some(i),
            }
        }
    }
}

/// One canonical piece of a base-order range.
enum Piece {
    /// Whole block `[start, end)` stored at `level`.
    Full { level: usize, start: usize, end: usize },
    /// Short range to scan directly.
    Scan { start: usize, end: usize },
}

/// Block layout shared by both trees: level `l >= 1` holds blocks of
/// `LEAF << l` consecutive base positions.
#[derive(Debug, Clone)]
struct Layout {
    n: usize,
    top: usize,
}

impl Layout {
    fn new(n: usize) -> Self {
        let mut top = 0;
        while (LEAF << top) < n {
            top += 1;
        }
        Layout { n, top }
    }

    fn block(level: usize) -> usize {
        LEAF << level
    }

    fn cover(&self, a: usize, b: usize, out: &mut impl FnMut(Piece)) {
        if a < b {
            self.visit(self.top, 0, a, b, out);
        }
    }

    fn visit(&self, level: usize, start: usize, a: usize, b: usize, out: &mut impl FnMut(Piece)) {
        let end = (start + Self::block(level)).min(self.n);
        if end <= a || start >= b || start >= end {
            return;
        }
        if level == 0 {
            out(Piece::Scan { start: start.max(a), end: end.min(b) });
        } else if a <= start && end <= b {
            out(Piece::Full { level, start, end });
        } else {
            let half = Self::block(level - 1);
            self.visit(level - 1, start, a, b, out);
            self.visit(level - 1, start + half, a, b, out);
        }
    }

    /// Builds sorted blocks for levels `1..=top` by merging children.
    /// Merges run on ranks in the target order, which keeps them sequential
    /// in memory; ranks are mapped back to point indices at the end.
    fn build_levels(&self, base: &[u32], order: &Ranking) -> Vec<Vec<u32>> {
        let mut levels: Vec<Vec<u32>> = Vec::with_capacity(self.top + 1);
        let mut first: Vec<u32> = base.iter().map(|&i| order.rank[i as usize]).collect();
        for chunk in first.chunks_mut(LEAF) {
            chunk.sort_unstable();
        }
        levels.push(first);
        for level in 1..=self.top {
            let prev = &levels[level - 1];
            let mut cur = Vec::with_capacity(self.n);
            let size = Self::block(level);
            let half = Self::block(level - 1);
            let mut start = 0;
            while start < self.n {
                let mid = (start + half).min(self.n);
                let end = (start + size).min(self.n);
                let (mut i, mut j) = (start, mid);
                while i < mid && j < end {
                    if prev[j] < prev[i] {
                        cur.push(prev[j]);
                        j += 1;
                    } else {
                        cur.push(prev[i]);
                        i += 1;
                    }
                }
                cur.extend_from_slice(&prev[i..mid]);
                cur.extend_from_slice(&prev[j..end]);
                start = end;
            }
            levels.push(cur);
        }
        // level 0 blocks are scanned, never stored
        levels[0] = Vec::new();
        for list in &mut levels[1..] {
            for r in list.iter_mut() {
                *r = order.order[*r as usize];
            }
        }
        levels
    }
}

/// Point indices sorted by `(key, id)`, and the inverse permutation.
struct Ranking {
    order: Vec<u32>,
    rank: Vec<u32>,
    keys: Vec<f64>,
}

impl Ranking {
    fn new(points: &[Point], key: impl Fn(&Point) -> f64) -> Self {
        let mut tagged: Vec<(f64, usize, u32)> =
            points.iter().enumerate().map(|(i, p)| (key(p), p.id, i as u32)).collect();
        tagged.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut rank = vec![0u32; points.len()];
        for (r, t) in tagged.iter().enumerate() {
            rank[t.2 as usize] = r as u32;
        }
        Ranking {
            order: tagged.iter().map(|t| t.2).collect(),
            keys: tagged.iter().map(|t| t.0).collect(),
            rank,
        }
    }
}

/// Base positions `[a, b)` whose key lies in the given interval.
fn key_range(keys: &[f64], lo: f64, lo_open: bool, hi: f64, hi_open: bool) -> (usize, usize) {
    let a = if lo_open { keys.partition_point(|&k| k <= lo) } else { keys.partition_point(|&k| k < lo) };
    let b = if hi_open { keys.partition_point(|&k| k < hi) } else { keys.partition_point(|&k| k <= hi) };
    (a, b.max(a))
}

/// Slab minimization of `±u` / `±v` with a floor, over one axis.
#[derive(Debug, Clone)]
pub struct SlabTree {
    axis: Axis,
    layout: Layout,
    base: Vec<u32>,
    keys: Vec<f64>,
    by_u: Vec<Vec<u32>>,
    by_v: Vec<Vec<u32>>,
}

impl SlabTree {
    pub fn build(points: &[Point], axis: Axis) -> Self {
        let coord = move |p: &Point| match axis {
            Axis::Rows => p.y,
            Axis::Cols => p.x,
        };
        let Ranking { order: base, keys, .. } = Ranking::new(points, coord);
        let layout = Layout::new(points.len());
        let by_u = layout.build_levels(&base, &Ranking::new(points, |p| p.u()));
        let by_v = layout.build_levels(&base, &Ranking::new(points, |p| p.v()));
        SlabTree { axis, layout, base, keys, by_u, by_v }
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Index of the `(w, id)`-minimal point of the band, if any.
    pub fn min(&self, points: &[Point], band: &Band) -> Option<u32> {
        debug_assert_eq!(band.axis, self.axis);
        let (a, b) = key_range(&self.keys, band.lo, band.lo_open, band.hi, band.hi_open);
        let sweep = band.sweep;
        let mut best = None;
        self.layout.cover(a, b, &mut |piece| {
            let found = match piece {
                Piece::Scan { start, end } => self.base[start..end]
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let p = &points[i as usize];
                        band.floor.admits(sweep.at(p), p.id)
                    })
                    .fold(None, |acc, i| better(points, sweep, acc, Some(i))),
                Piece::Full { level, start, end } => {
                    let list = if sweep.uses_u() { &self.by_u[level] } else { &self.by_v[level] };
                    block_successor(points, &list[start..end], sweep, band.floor)
                }
            };
            best = better(points, sweep, best, found);
        });
        best
    }
}

/// Minimal admissible `(w, id)` in a block sorted by `(u, id)` or `(v, id)`.
fn block_successor(points: &[Point], list: &[u32], sweep: Sweep, floor: Floor) -> Option<u32> {
    let raw = |i: u32| {
        let p = &points[i as usize];
        if sweep.uses_u() {
            p.u()
        } else {
            p.v()
        }
    };
    let id = |i: u32| points[i as usize].id;
    if !sweep.negated() {
        let pos = match floor {
            Floor::AtLeast(c) => list.partition_point(|&i| raw(i) < c),
            Floor::Above(c) => list.partition_point(|&i| raw(i) <= c),
            Floor::After(c, cid) => list.partition_point(|&i| {
                let r = raw(i);
                r < c || (r == c && id(i) <= cid)
            }),
        };
        return list.get(pos).copied();
    }
    // w = -raw: the best is the largest admissible raw value, smallest id
    // within that value.
    let smallest_id_at = |end: usize| -> Option<u32> {
        if end == 0 {
            return None;
        }
        let top = raw(list[end - 1]);
        let first = list[..end].partition_point(|&i| raw(i) < top);
        Some(list[first])
    };
    let c = -floor.value();
    match floor {
        Floor::AtLeast(_) => smallest_id_at(list.partition_point(|&i| raw(i) <= c)),
        Floor::Above(_) => smallest_id_at(list.partition_point(|&i| raw(i) < c)),
        Floor::After(_, cid) => {
            let pos = list.partition_point(|&i| {
                let r = raw(i);
                r < c || (r == c && id(i) <= cid)
            });
            match list.get(pos) {
                Some(&i) if raw(i) == c => Some(i),
                _ => smallest_id_at(list.partition_point(|&i| raw(i) < c)),
            }
        }
    }
}

/// Quadrant minimization of the corner distance.
#[derive(Debug, Clone)]
pub struct CornerTree {
    layout: Layout,
    base: Vec<u32>,
    keys: Vec<f64>,
    by_y: Vec<Vec<u32>>,
    /// Per level, indexed like `by_y`: suffix argmins for NE and NW,
    /// prefix argmins for SE and SW (relative to each block).
    best: [Vec<Vec<u32>>; 4],
}

fn quadrant_slot(q: Quadrant) -> usize {
    match q {
        Quadrant::NE => 0,
        Quadrant::NW => 1,
        Quadrant::SE => 2,
        Quadrant::SW => 3,
    }
}

impl CornerTree {
    pub fn build(points: &[Point]) -> Self {
        let Ranking { order: base, keys, .. } = Ranking::new(points, |p| p.x);
        let layout = Layout::new(points.len());
        let by_y = layout.build_levels(&base, &Ranking::new(points, |p| p.y));
        let mut best: [Vec<Vec<u32>>; 4] = Default::default();
        for q in [Quadrant::NE, Quadrant::NW, Quadrant::SE, Quadrant::SW] {
            let sweep = q.sweep();
            // (w, id) order as plain integers
            let rank = Ranking::new(points, |p| sweep.at(p)).rank;
            let better = |a: Option<u32>, b: Option<u32>| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(i), Some(j)) => Some(if rank[j as usize] < rank[i as usize] { j } else { i }),
            };
            let suffix = matches!(q, Quadrant::NE | Quadrant::NW);
            let mut levels = vec![Vec::new()];
            for (level, list) in by_y.iter().enumerate().skip(1) {
                let mut out = vec![0u32; list.len()];
                let size = Layout::block(level);
                let mut start = 0;
                while start < list.len() {
                    let end = (start + size).min(list.len());
                    let mut cur: Option<u32> = None;
                    if suffix {
                        for k in (start..end).rev() {
                            cur = better(Some(list[k]), cur);
                            out[k] = cur.unwrap();
                        }
                    } else {
                        for k in start..end {
                            cur = better(cur, Some(list[k]));
                            out[k] = cur.unwrap();
                        }
                    }
                    start = end;
                }
                levels.push(out);
            }
            best[quadrant_slot(q)] = levels;
        }
        CornerTree { layout, base, keys, by_y, best }
    }

    /// Index of the point of the quadrant nearest (L1) to the corner.
    pub fn min(
        &self,
        points: &[Point],
        quadrant: Quadrant,
        corner: (f64, f64),
        open_x: bool,
        open_y: bool,
    ) -> Option<u32> {
        let (sx, sy) = quadrant.signs();
        let (cx, cy) = corner;
        let (a, b) = if sx > 0.0 {
            key_range(&self.keys, cx, open_x, f64::INFINITY, false)
        } else {
            key_range(&self.keys, f64::NEG_INFINITY, false, cx, open_x)
        };
        let sweep = quadrant.sweep();
        let y_ok = |y: f64| {
            let d = sy * (y - cy);
            if open_y {
                d > 0.0
            } else {
                d >= 0.0
            }
        };
        let slot = quadrant_slot(quadrant);
        let mut best = None;
        self.layout.cover(a, b, &mut |piece| {
            let found = match piece {
                Piece::Scan { start, end } => self.base[start..end]
                    .iter()
                    .copied()
                    .filter(|&i| y_ok(points[i as usize].y))
                    .fold(None, |acc, i| better(points, sweep, acc, Some(i))),
                Piece::Full { level, start, end } => {
                    let list = &self.by_y[level][start..end];
                    let argmins = &self.best[slot][level][start..end];
                    if sy > 0.0 {
                        let pos = list.partition_point(|&i| !y_ok(points[i as usize].y));
                        argmins.get(pos).copied()
                    } else {
                        let pos = list.partition_point(|&i| y_ok(points[i as usize].y));
                        (pos > 0).then(|| argmins[pos - 1])
                    }
                }
            };
            best = better(points, sweep, best, found);
        });
        best
    }
}

/// Preprocessed dragging structures over a static point set.
#[derive(Debug, Clone)]
pub struct DragIndex {
    points: Vec<Point>,
    rows: SlabTree,
    cols: SlabTree,
    corners: CornerTree,
}

impl DragIndex {
    pub fn build(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        validate_points(points)?;
        let points: Vec<Point> = points.iter().map(|p| p.canonical()).collect();
        Ok(DragIndex {
            rows: SlabTree::build(&points, Axis::Rows),
            cols: SlabTree::build(&points, Axis::Cols),
            corners: CornerTree::build(&points),
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// First point hit by a segment dragged between two parallel tracks.
    pub fn parallel_track(&self, query: &DragQuery) -> Result<Option<Hit>> {
        let band = query.band()?;
        let (_, origin) = query.sweep()?;
        Ok(self.band_min(&band).map(|p| Hit { point: p, distance: band.sweep.at(&p) - origin }))
    }

    /// First point of a closed quadrant hit by a segment dragged out of its
    /// corner.
    pub fn out_of_corner(&self, query: &DragQuery) -> Result<Option<Hit>> {
        let DragQuery::OutOfCorner { corner, quadrant, after, .. } = *query else {
            return Err(Error::WrongQueryKind);
        };
        let (sweep, origin) = query.sweep()?;
        let floor = Floor::from_after(origin, after);
        Ok(self
            .corner_after(quadrant, corner, floor)
            .map(|p| Hit { point: p, distance: sweep.at(&p) - origin }))
    }

    /// Dispatches on the query kind.
    pub fn drag(&self, query: &DragQuery) -> Result<Option<Hit>> {
        match query {
            DragQuery::ParallelTrack { .. } => self.parallel_track(query),
            DragQuery::OutOfCorner { .. } => self.out_of_corner(query),
        }
    }

    pub fn band_min(&self, band: &Band) -> Option<Point> {
        let tree = match band.axis {
            Axis::Rows => &self.rows,
            Axis::Cols => &self.cols,
        };
        tree.min(&self.points, band).map(|i| self.points[i as usize])
    }

    pub fn corner_min(
        &self,
        quadrant: Quadrant,
        corner: (f64, f64),
        open_x: bool,
        open_y: bool,
    ) -> Option<Point> {
        self.corners
            .min(&self.points, quadrant, corner, open_x, open_y)
            .map(|i| self.points[i as usize])
    }

    /// Closed-quadrant minimum subject to a floor on the corner sweep.
    ///
    /// With `X = sx*x`, `Y = sy*y` and floor value `c`, the admissible part
    /// of the quadrant `X >= a, Y >= b` splits at `Y = c - a`: below it
    /// `X >= a` follows from the floor, so it is a slab query; above it the
    /// floor follows from `X >= a`, so it is a plain quadrant query with an
    /// open lower side. Returns the number of primitive queries issued.
    pub fn corner_after_counted(
        &self,
        quadrant: Quadrant,
        corner: (f64, f64),
        floor: Floor,
    ) -> (Option<Point>, usize) {
        let (sx, sy) = quadrant.signs();
        let sweep = quadrant.sweep();
        let a = sx * corner.0;
        let b = sy * corner.1;
        let c = floor.value();
        let vacuous = match floor {
            Floor::AtLeast(c) => c <= a + b,
            Floor::Above(c) | Floor::After(c, _) => c < a + b,
        };
        if vacuous {
            return (self.corner_min(quadrant, corner, false, false), 1);
        }
        let split = c - a;
        let (lo, hi) = if sy > 0.0 { (b, split) } else { (-split, -b) };
        let band = Band { axis: Axis::Rows, lo, hi, lo_open: false, hi_open: false, sweep, floor };
        let low = self.band_min(&band);
        let high = self.corner_min(quadrant, (corner.0, sy * split), false, true);
        let best = match (low, high) {
            (None, x) | (x, None) => x,
            (Some(p), Some(q)) => {
                if sweep.at(&q).total_cmp(&sweep.at(&p)).then(q.id.cmp(&p.id)) == Ordering::Less {
                    Some(q)
                } else {
                    Some(p)
                }
            }
        };
        (best, 2)
    }

    pub fn corner_after(&self, quadrant: Quadrant, corner: (f64, f64), floor: Floor) -> Option<Point> {
        self.corner_after_counted(quadrant, corner, floor).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::points_from_coords;
    use crate::instances::random_drag_query;
    use crate::oracle::brute_drag;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three() -> Vec<Point> {
        points_from_coords(&[(1.0, 0.0), (3.0, 0.0), (0.0, 3.0)])
    }

    fn slab_query(after: Option<HitBound>) -> DragQuery {
        DragQuery::ParallelTrack {
            tracks: [Track::horizontal(0.0), Track::horizontal(4.0)],
            slope: Slope::Neg,
            direction: Direction::Forward,
            start: (0.0, 0.0),
            after,
        }
    }

    #[test]
    fn zero_sweep_values_tie_by_id() {
        // -(0 + 0) must compare equal to 2 + (-2) so that ties fall to the id
        let p = points_from_coords(&[(2.0, -2.0), (0.0, 0.0), (-0.0, -0.0)]);
        let idx = DragIndex::build(&p).unwrap();
        let mut order = Vec::new();
        let mut floor = None;
        loop {
            let hit = match floor {
                None => idx.corner_min(Quadrant::SW, (3.0, 5.0), false, false),
                Some(f) => idx.corner_after(Quadrant::SW, (3.0, 5.0), f),
            };
            let Some(h) = hit else { break };
            order.push(h.id);
            floor = Some(Floor::After(Sweep::NegU.at(&h), h.id));
        }
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn parallel_track_examples() {
        let idx = DragIndex::build(&three()).unwrap();
        let hit = idx.parallel_track(&slab_query(None)).unwrap().unwrap();
        assert_eq!((hit.point.id, hit.distance), (0, 1.0));
        // u = 3 is shared by (3,0) and (0,3); the smaller id wins
        let next = slab_query(Some(HitBound { distance: 1.0, id: None }));
        let hit = idx.parallel_track(&next).unwrap().unwrap();
        assert_eq!((hit.point.xy(), hit.distance), ((3.0, 0.0), 3.0));
        let after_tie = slab_query(Some(HitBound { distance: 3.0, id: Some(1) }));
        assert_eq!(idx.parallel_track(&after_tie).unwrap().unwrap().point.id, 2);
        let empty = DragQuery::ParallelTrack {
            tracks: [Track::horizontal(10.0), Track::horizontal(20.0)],
            slope: Slope::Neg,
            direction: Direction::Forward,
            start: (0.0, 10.0),
            after: None,
        };
        assert_eq!(idx.parallel_track(&empty).unwrap(), None);
    }

    #[test]
    fn out_of_corner_examples() {
        let idx = DragIndex::build(&three()).unwrap();
        let q = DragQuery::corner((0.0, 0.0), Quadrant::NE);
        assert_eq!(idx.out_of_corner(&q).unwrap().unwrap().point.xy(), (1.0, 0.0));
        let right = DragQuery::corner((10.0, 0.0), Quadrant::NE);
        assert_eq!(idx.out_of_corner(&right).unwrap(), None);
        let second = q.with_after(HitBound { distance: 1.0, id: Some(0) });
        assert_eq!(idx.out_of_corner(&second).unwrap().unwrap().point.id, 1);
    }

    #[test]
    fn malformed_queries_are_rejected() {
        let idx = DragIndex::build(&three()).unwrap();
        let mut q = slab_query(None);
        if let DragQuery::ParallelTrack { tracks, .. } = &mut q {
            tracks[1] = Track::vertical(3.0);
        }
        assert!(matches!(idx.parallel_track(&q), Err(Error::MalformedTracks(_))));
        if let DragQuery::ParallelTrack { tracks, .. } = &mut q {
            tracks[1] = Track::through((0.0, 0.0), (1.0, 1.0));
        }
        assert!(matches!(idx.parallel_track(&q), Err(Error::MalformedTracks(_))));
        let bad = DragQuery::OutOfCorner {
            corner: (0.0, 0.0),
            quadrant: Quadrant::NE,
            slope: Slope::Pos,
            after: None,
        };
        assert_eq!(idx.out_of_corner(&bad), Err(Error::InconsistentCorner));
        assert_eq!(idx.parallel_track(&DragQuery::corner((0.0, 0.0), Quadrant::NE)), Err(Error::WrongQueryKind));
    }

    #[test]
    fn build_errors_and_singletons() {
        assert_eq!(DragIndex::build(&[]).unwrap_err(), Error::EmptyPointSet);
        let dup = vec![Point::new(0.0, 0.0, 3), Point::new(1.0, 0.0, 3)];
        assert_eq!(DragIndex::build(&dup).unwrap_err(), Error::DuplicateId(3));
        let one = vec![Point::new(2.0, 2.0, 0)];
        let idx = DragIndex::build(&one).unwrap();
        assert!(idx.out_of_corner(&DragQuery::corner((1.0, 1.0), Quadrant::NE)).unwrap().is_some());
        assert!(idx.out_of_corner(&DragQuery::corner((3.0, 1.0), Quadrant::NE)).unwrap().is_none());
        assert!(idx.out_of_corner(&DragQuery::corner((3.0, 1.0), Quadrant::NW)).unwrap().is_some());
    }

    #[test]
    fn duplicate_coordinates_resolve_to_smaller_id() {
        let pts = vec![Point::new(5.0, 5.0, 9), Point::new(5.0, 5.0, 2), Point::new(7.0, 7.0, 1)];
        let idx = DragIndex::build(&pts).unwrap();
        let hit = idx.out_of_corner(&DragQuery::corner((0.0, 0.0), Quadrant::NE)).unwrap().unwrap();
        assert_eq!(hit.point.id, 2);
        let next = DragQuery::corner((0.0, 0.0), Quadrant::NE).with_after(HitBound { distance: 10.0, id: Some(2) });
        assert_eq!(idx.out_of_corner(&next).unwrap().unwrap().point.id, 9);
    }

    #[test]
    fn agrees_with_scan_on_random_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..20 {
            let n = if round == 0 { 1000 } else { rng.random_range(1..300) };
            let span = if round % 2 == 0 { 40 } else { 1_000_000 };
            let pts: Vec<Point> = (0..n)
                .map(|i| Point::new(rng.random_range(0..span) as f64, rng.random_range(0..span) as f64, i))
                .collect();
            let idx = DragIndex::build(&pts).unwrap();
            for _ in 0..500 {
                let q = random_drag_query(&mut rng, span, 600);
                assert_eq!(idx.drag(&q).unwrap(), brute_drag(&pts, &q).unwrap(), "{q:?}");
            }
        }
    }
}
