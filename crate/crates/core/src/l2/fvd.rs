//! Euclidean farthest-point Voronoi diagram of a query set.
//!
//! Only convex-hull vertices own cells. The diagram is obtained from the
//! farthest-point Delaunay triangulation of the hull polygon: a vertex's
//! cell is the intersection of the half-planes "farther from me than from
//! `j`" over its triangulation neighbours `j`. The triangulation is seeded
//! by repeatedly cutting off the ear with the largest circumcircle and then
//! repaired with exact in-circle flips, so ties on cocircular inputs are
//! harmless.

use std::collections::{BinaryHeap, HashMap};

use crate::geometry::{orient, Point};

/// Convex hull in counterclockwise order starting at the lexicographically
/// smallest vertex. Collinear boundary points are dropped; among points at
/// the same position the smallest id is kept.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).then(a.id.cmp(&b.id)));
    pts.dedup_by(|later, earlier| later.same_position(earlier));
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2].xy(), hull[hull.len() - 1].xy(), p.xy()) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0].same_position(&hull[1]) {
        hull.truncate(1);
    }
    hull
}

/// `a x + b y >= c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    /// Points at least as far from `owner` as from `other`. Exact for
    /// integer coordinates below 2^26.
    pub fn farther_from(owner: &Point, other: &Point) -> Self {
        HalfPlane {
            a: 2.0 * (other.x - owner.x),
            b: 2.0 * (other.y - owner.y),
            c: (other.x * other.x + other.y * other.y) - (owner.x * owner.x + owner.y * owner.y),
        }
    }

    #[inline]
    pub fn eval(&self, p: (f64, f64)) -> f64 {
        self.a * p.0 + self.b * p.1 - self.c
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.eval(p) >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: (f64, f64),
    pub direction: (f64, f64),
}

/// A cell of the diagram: convex and unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct FarthestCell {
    pub owner: Point,
    /// Diagram vertices along the bounded part of the boundary, in order.
    pub vertices: Vec<(f64, f64)>,
    /// The two unbounded boundary edges; empty for a single site.
    pub rays: Vec<Ray>,
    /// The cell as an intersection of half-planes, one per neighbour.
    pub halfplanes: Vec<HalfPlane>,
}

impl FarthestCell {
    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.halfplanes.iter().all(|h| h.contains(p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FarthestDiagram {
    pub hull: Vec<Point>,
    pub cells: Vec<FarthestCell>,
    /// Triangles of the farthest-point Delaunay triangulation, as hull
    /// indices in counterclockwise order.
    pub triangles: Vec<[usize; 3]>,
}

fn circumcenter(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let (bx, by) = (b.0 - a.0, b.1 - a.1);
    let (cx, cy) = (c.0 - a.0, c.1 - a.1);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    (a.0 + (cy * b2 - by * c2) / d, a.1 + (bx * c2 - cx * b2) / d)
}

fn circumradius2(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    let o = circumcenter(a, b, c);
    let (dx, dy) = (a.0 - o.0, a.1 - o.1);
    let r = dx * dx + dy * dy;
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

#[inline]
fn incircle(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> f64 {
    let k = |p: (f64, f64)| robust::Coord { x: p.0, y: p.1 };
    robust::incircle(k(a), k(b), k(c), k(d))
}

#[derive(Debug, PartialEq)]
struct Ear {
    r2: f64,
    vertex: usize,
    stamp: u64,
}

impl Eq for Ear {}

impl PartialOrd for Ear {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ear {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.r2.total_cmp(&other.r2).then(other.vertex.cmp(&self.vertex))
    }
}

/// Farthest-point Delaunay triangulation of a convex polygon (`h >= 3`).
fn farthest_delaunay(hull: &[Point]) -> Vec<[usize; 3]> {
    let h = hull.len();
    let xy = |i: usize| hull[i].xy();
    let mut prev: Vec<usize> = (0..h).map(|i| (i + h - 1) % h).collect();
    let mut next: Vec<usize> = (0..h).map(|i| (i + 1) % h).collect();
    let mut stamp = vec![0u64; h];
    let mut alive = h;
    let mut heap = BinaryHeap::with_capacity(2 * h);
    for i in 0..h {
        heap.push(Ear { r2: circumradius2(xy(prev[i]), xy(i), xy(next[i])), vertex: i, stamp: 0 });
    }
    let mut tris = Vec::with_capacity(h - 2);
    while alive > 3 {
        let ear = heap.pop().expect("ears remain");
        if ear.stamp != stamp[ear.vertex] {
            continue;
        }
        let (i, p, n) = (ear.vertex, prev[ear.vertex], next[ear.vertex]);
        tris.push([p, i, n]);
        next[p] = n;
        prev[n] = p;
        stamp[i] = u64::MAX;
        alive -= 1;
        for v in [p, n] {
            stamp[v] += 1;
            heap.push(Ear { r2: circumradius2(xy(prev[v]), xy(v), xy(next[v])), vertex: v, stamp: stamp[v] });
        }
    }
    let last = (0..h).find(|&i| stamp[i] != u64::MAX).unwrap();
    tris.push([prev[last], last, next[last]]);
    legalize(hull, &mut tris);
    tris
}

/// Lawson flips until every interior edge satisfies the farthest
/// criterion: the opposite vertex lies inside or on each circumcircle.
fn legalize(hull: &[Point], tris: &mut [[usize; 3]]) {
    let xy = |i: usize| hull[i].xy();
    loop {
        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                edges.insert((tri[k], tri[(k + 1) % 3]), (t, tri[(k + 2) % 3]));
            }
        }
        let mut flipped = false;
        let mut touched = vec![false; tris.len()];
        let mut keys: Vec<&(usize, usize)> = edges.keys().collect();
        keys.sort_unstable();
        for &(a, b) in keys {
            let Some(&(t2, d)) = edges.get(&(b, a)) else { continue };
            let (t1, c) = edges[&(a, b)];
            if touched[t1] || touched[t2] {
                continue;
            }
            // triangle (a, b, c) is counterclockwise; d lies across ab
            if incircle(xy(a), xy(b), xy(c), xy(d)) < 0.0 {
                tris[t1] = [c, a, d];
                tris[t2] = [d, b, c];
                touched[t1] = true;
                touched[t2] = true;
                flipped = true;
            }
        }
        if !flipped {
            return;
        }
    }
}

/// Farthest-point Voronoi diagram of points in convex position, as
/// produced by [`convex_hull`].
pub fn farthest_vd(hull: &[Point]) -> FarthestDiagram {
    let h = hull.len();
    let mut cells: Vec<FarthestCell> = hull
        .iter()
        .map(|q| FarthestCell { owner: *q, vertices: Vec::new(), rays: Vec::new(), halfplanes: Vec::new() })
        .collect();
    if h <= 1 {
        return FarthestDiagram { hull: hull.to_vec(), cells, triangles: Vec::new() };
    }
    if h == 2 {
        let (a, b) = (hull[0], hull[1]);
        let mid = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
        let along = (-(b.y - a.y), b.x - a.x);
        for (i, (o, other)) in [(a, b), (b, a)].into_iter().enumerate() {
            cells[i].halfplanes.push(HalfPlane::farther_from(&o, &other));
            cells[i].rays = vec![
                Ray { origin: mid, direction: along },
                Ray { origin: mid, direction: (-along.0, -along.1) },
            ];
        }
        return FarthestDiagram { hull: hull.to_vec(), cells, triangles: Vec::new() };
    }

    let triangles = farthest_delaunay(hull);
    let mut fan: Vec<Vec<[usize; 3]>> = vec![Vec::new(); h];
    for t in &triangles {
        for k in 0..3 {
            fan[t[k]].push([t[k], t[(k + 1) % 3], t[(k + 2) % 3]]);
        }
    }
    for i in 0..h {
        // Order the fan of i from the hull edge (i, i+1) to (i-1, i):
        // neighbours in polygon order after i.
        let rank = |j: usize| (j + h - i) % h;
        fan[i].sort_by_key(|t| rank(t[1]));
        let mut neighbours: Vec<usize> = fan[i].iter().flat_map(|t| [t[1], t[2]]).collect();
        neighbours.sort_by_key(|&j| rank(j));
        neighbours.dedup();
        let owner = hull[i];
        let cell = &mut cells[i];
        cell.halfplanes = neighbours.iter().map(|&j| HalfPlane::farther_from(&owner, &hull[j])).collect();
        cell.vertices = fan[i].iter().map(|t| circumcenter(hull[t[0]].xy(), hull[t[1]].xy(), hull[t[2]].xy())).collect();
        // Unbounded edges run along the inward normals of the two hull
        // edges at i.
        let inward = |a: &Point, b: &Point| (-(b.y - a.y), b.x - a.x);
        let (nx, pv) = (hull[(i + 1) % h], hull[(i + h - 1) % h]);
        cell.rays = vec![
            Ray { origin: cell.vertices[0], direction: inward(&owner, &nx) },
            Ray { origin: *cell.vertices.last().unwrap(), direction: inward(&pv, &owner) },
        ];
    }
    FarthestDiagram { hull: hull.to_vec(), cells, triangles }
}

/// Axis-parallel clipping rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipBox {
    pub min: (f64, f64),
    pub max: (f64, f64),
}

impl ClipBox {
    /// Bounding box of `points` expanded on every side by its diagonal
    /// (by 1 when the points coincide).
    pub fn around(points: &[Point]) -> Self {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = (min.0.min(p.x), min.1.min(p.y));
            max = (max.0.max(p.x), max.1.max(p.y));
        }
        let diag = ((max.0 - min.0).powi(2) + (max.1 - min.1).powi(2)).sqrt();
        let m = if diag > 0.0 { diag } else { 1.0 };
        ClipBox { min: (min.0 - m, min.1 - m), max: (max.0 + m, max.1 + m) }
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.min.0 <= p.0 && p.0 <= self.max.0 && self.min.1 <= p.1 && p.1 <= self.max.1
    }

    fn scale(&self) -> f64 {
        [self.min.0, self.min.1, self.max.0, self.max.1].iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    fn polygon(&self) -> Vec<(f64, f64)> {
        vec![self.min, (self.max.0, self.min.1), self.max, (self.min.0, self.max.1)]
    }
}

/// A closed triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub c: (f64, f64),
}

impl Triangle {
    pub fn new(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Self {
        Triangle { a, b, c }
    }

    /// Signed area, positive for counterclockwise vertices (exact sign).
    pub fn orientation(&self) -> f64 {
        orient(self.a, self.b, self.c)
    }

    pub fn area(&self) -> f64 {
        self.orientation().abs() / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.orientation() == 0.0
    }

    /// Closed containment with exact orientation tests.
    pub fn contains(&self, p: (f64, f64)) -> bool {
        let s = self.orientation().signum();
        s * orient(self.a, self.b, p) >= 0.0 && s * orient(self.b, self.c, p) >= 0.0 && s * orient(self.c, self.a, p) >= 0.0
    }

    pub fn bbox(&self) -> ((f64, f64), (f64, f64)) {
        let xs = [self.a.0, self.b.0, self.c.0];
        let ys = [self.a.1, self.b.1, self.c.1];
        let lo = |v: [f64; 3]| v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = |v: [f64; 3]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ((lo(xs), lo(ys)), (hi(xs), hi(ys)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangulatedCell {
    pub owner: Point,
    pub triangles: Vec<Triangle>,
}

/// Relative weld tolerance for clipped-polygon vertices.
const WELD: f64 = 1e-12;
/// Half-planes are relaxed outward by this fraction of the box scale so
/// that points exactly on a cell boundary survive rounding in the clipped
/// vertices. For integer inputs below 10^6 a point not on a bisector is
/// at least ~3e-7 away from it, far beyond this slack.
const SLACK: f64 = 2e-14;

fn clip(poly: &[(f64, f64)], h: &HalfPlane, slack: f64) -> Vec<(f64, f64)> {
    let norm = (h.a * h.a + h.b * h.b).sqrt();
    let eval = |p: (f64, f64)| h.eval(p) + slack * norm;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let p = poly[k];
        let q = poly[(k + 1) % poly.len()];
        let (sp, sq) = (eval(p), eval(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// The cell clipped to the box, as a convex polygon (possibly empty).
pub fn clip_cell(cell: &FarthestCell, clip_box: &ClipBox) -> Vec<(f64, f64)> {
    let scale = clip_box.scale();
    let mut poly = clip_box.polygon();
    for h in &cell.halfplanes {
        poly = clip(&poly, h, SLACK * scale);
        if poly.is_empty() {
            return poly;
        }
    }
    let tol = WELD * scale;
    let mut welded: Vec<(f64, f64)> = Vec::with_capacity(poly.len());
    for p in poly {
        if welded.last().is_none_or(|q: &(f64, f64)| (q.0 - p.0).abs() > tol || (q.1 - p.1).abs() > tol) {
            welded.push(p);
        }
    }
    while welded.len() > 1 {
        let (f, l) = (welded[0], welded[welded.len() - 1]);
        if (f.0 - l.0).abs() <= tol && (f.1 - l.1).abs() <= tol {
            welded.pop();
        } else {
            break;
        }
    }
    welded
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    (0..n).map(|k| poly[k].0 * poly[(k + 1) % n].1 - poly[(k + 1) % n].0 * poly[k].1).sum::<f64>().abs() / 2.0
}

/// Fan triangulation of the clipped cell; zero-area pieces are dropped.
pub fn triangulate_cell(cell: &FarthestCell, clip_box: &ClipBox) -> TriangulatedCell {
    let poly = clip_cell(cell, clip_box);
    let mut triangles = Vec::new();
    if poly.len() >= 3 {
        for k in 1..poly.len() - 1 {
            let t = Triangle::new(poly[0], poly[k], poly[k + 1]);
            if !t.is_degenerate() {
                triangles.push(t);
            }
        }
    }
    TriangulatedCell { owner: cell.owner, triangles }
}
