//! Partition tree with per-node nearest-neighbor structures, answering
//! "nearest point of P inside a triangle", and the L2 aggregate-max query
//! built on it.
//!
//! Each internal node splits its points into about `sqrt(|P_v|)` classes of
//! equal size (strips by `x`, then cells by `y`) and keeps a Delaunay
//! triangulation of its own points. A triangle query answers nodes whose
//! bounding box lies inside the triangle with one nearest-neighbor lookup,
//! skips disjoint nodes, and recurses into the rest.

use spade::handles::VertexHandle;
use spade::{DelaunayTriangulation, HasPosition, HierarchyHintGenerator, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::geometry::{cmp_key, dist2, orient, validate_points, AggregateResult, Point};
use crate::l2::fvd::{convex_hull, farthest_vd, triangulate_cell, ClipBox, Triangle};

/// Leaves hold at most this many points and are scanned directly.
pub const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone, Copy)]
struct Site {
    x: f64,
    y: f64,
    id: usize,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        Point2::new(self.x, self.y)
    }
}

type Delaunay = DelaunayTriangulation<Site, (), (), (), HierarchyHintGenerator<f64>>;

/// Axis-parallel bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub min: (f64, f64),
    pub max: (f64, f64),
}

impl Region {
    fn of(points: &[Point]) -> Self {
        let mut r = Region { min: (f64::INFINITY, f64::INFINITY), max: (f64::NEG_INFINITY, f64::NEG_INFINITY) };
        for p in points {
            r.min = (r.min.0.min(p.x), r.min.1.min(p.y));
            r.max = (r.max.0.max(p.x), r.max.1.max(p.y));
        }
        r
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.min.0 <= p.x && p.x <= self.max.0 && self.min.1 <= p.y && p.y <= self.max.1
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [self.min, (self.max.0, self.min.1), self.max, (self.min.0, self.max.1)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Disjoint,
    Inside,
    Crossing,
}

/// Closed triangle with counterclockwise vertices.
fn relation(tri: &Triangle, r: &Region) -> Relation {
    let (lo, hi) = tri.bbox();
    if hi.0 < r.min.0 || lo.0 > r.max.0 || hi.1 < r.min.1 || lo.1 > r.max.1 {
        return Relation::Disjoint;
    }
    let corners = r.corners();
    for (a, b) in [(tri.a, tri.b), (tri.b, tri.c), (tri.c, tri.a)] {
        if corners.iter().all(|&c| orient(a, b, c) < 0.0) {
            return Relation::Disjoint;
        }
    }
    if corners.iter().all(|&c| tri.contains(c)) {
        Relation::Inside
    } else {
        Relation::Crossing
    }
}

/// Nearest-neighbor structure over the points of one node.
struct NearestIndex {
    dt: Delaunay,
}

impl std::fmt::Debug for NearestIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NearestIndex").field("vertices", &self.dt.num_vertices()).finish()
    }
}

impl NearestIndex {
    fn build(points: &[Point]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (&points[a], &points[b]);
            p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)).then(p.id.cmp(&q.id))
        });
        order.dedup_by(|later, earlier| points[*later].same_position(&points[*earlier]));
        let sites: Vec<Site> = order
            .iter()
            .map(|&k| Site { x: points[k].x, y: points[k].y, id: points[k].id })
            .collect();
        let dt = Delaunay::bulk_load(sites).expect("finite coordinates within range");
        NearestIndex { dt }
    }

    /// Nearest site by `(squared distance, id)`.
    fn nearest(&self, q: (f64, f64)) -> Option<Point> {
        let qp = Point::new(q.0, q.1, 0);
        let key = |v: &VertexHandle<Site>| {
            let s = v.data();
            (dist2(&Point::new(s.x, s.y, s.id), &qp), s.id)
        };
        let mut best = self.dt.nearest_neighbor(Point2::new(q.0, q.1))?;
        // Greedy descent guards against rounding in the walk; then a flood
        // over equidistant neighbours applies the id tie rule.
        loop {
            let next = best.out_edges().map(|e| e.to()).find(|v| key(v).0 < key(&best).0);
            match next {
                Some(v) => best = v,
                None => break,
            }
        }
        let d = key(&best).0;
        let mut winner = key(&best);
        let mut stack = vec![best];
        let mut seen = vec![best.fix()];
        while let Some(v) = stack.pop() {
            for w in v.out_edges().map(|e| e.to()) {
                if key(&w).0 == d && !seen.contains(&w.fix()) {
                    seen.push(w.fix());
                    if key(&w).1 < winner.1 {
                        winner = key(&w);
                    }
                    stack.push(w);
                }
            }
        }
        let s = seen
            .iter()
            .map(|&h| self.dt.vertex(h))
            .find(|v| key(v) == winner)
            .map(|v| *v.data())
            .expect("winner is among visited vertices");
        Some(Point::new(s.x, s.y, s.id))
    }
}

#[derive(Debug)]
struct Node {
    start: usize,
    end: usize,
    region: Region,
    children: Vec<usize>,
    nn: Option<NearestIndex>,
}

/// Read-only view of a tree node.
#[derive(Debug, Clone, Copy)]
pub struct NodeView<'a> {
    pub points: &'a [Point],
    pub region: Region,
    pub children: &'a [usize],
    pub depth: usize,
}

/// Partition tree over P with a nearest-neighbor structure per node.
#[derive(Debug)]
pub struct PartitionTree {
    points: Vec<Point>,
    nodes: Vec<Node>,
    depths: Vec<usize>,
    clip_box: ClipBox,
}

/// Sizes of `parts` near-equal pieces of `n`.
fn split_sizes(n: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|k| n / parts + usize::from(k < n % parts)).collect()
}

fn sort_by_x(points: &mut [Point]) {
    points.sort_unstable_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).then(a.id.cmp(&b.id)));
}

fn sort_by_y(points: &mut [Point]) {
    points.sort_unstable_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)).then(a.id.cmp(&b.id)));
}

impl PartitionTree {
    pub fn build(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        validate_points(points)?;
        let mut tree = PartitionTree {
            points: points.iter().map(|p| p.canonical()).collect(),
            nodes: Vec::new(),
            depths: Vec::new(),
            clip_box: ClipBox::around(points),
        };
        tree.build_node(0, points.len(), 0);
        Ok(tree)
    }

    fn build_node(&mut self, start: usize, end: usize, depth: usize) -> usize {
        let id = self.nodes.len();
        let region = Region::of(&self.points[start..end]);
        self.nodes.push(Node { start, end, region, children: Vec::new(), nn: None });
        self.depths.push(depth);
        let n = end - start;
        if n <= LEAF_SIZE {
            return id;
        }
        self.nodes[id].nn = Some(NearestIndex::build(&self.points[start..end]));

        let classes = (n as f64).sqrt().ceil() as usize;
        let strips = (classes as f64).sqrt().ceil() as usize;
        let class_sizes = split_sizes(n, classes);
        sort_by_x(&mut self.points[start..end]);
        let mut bounds = Vec::with_capacity(classes);
        let mut at = start;
        for s in 0..strips {
            let group = &class_sizes[s * classes / strips..(s + 1) * classes / strips];
            let width: usize = group.iter().sum();
            sort_by_y(&mut self.points[at..at + width]);
            for &size in group {
                bounds.push((at, at + size));
                at += size;
            }
        }
        debug_assert_eq!(at, end);
        let children: Vec<usize> = bounds.into_iter().map(|(s, e)| self.build_node(s, e, depth + 1)).collect();
        self.nodes[id].children = children;
        id
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

    pub fn clip_box(&self) -> ClipBox {
        self.clip_box
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    pub fn node(&self, i: usize) -> NodeView<'_> {
        let n = &self.nodes[i];
        NodeView {
            points: &self.points[n.start..n.end],
            region: n.region,
            children: &n.children,
            depth: self.depths[i],
        }
    }

    /// Nearest point of node `i` to `q` by `(distance, id)`.
    pub fn node_nearest(&self, i: usize, q: (f64, f64)) -> Option<Point> {
        let n = &self.nodes[i];
        match &n.nn {
            Some(nn) => nn.nearest(q),
            None => scan(&self.points[n.start..n.end], q, |_| true),
        }
    }

    /// Nearest point of `P ∩ tri` (closed) to `q`, with its distance, and
    /// the number of nodes visited.
    pub fn f_triangle(&self, q: (f64, f64), tri: &Triangle) -> Result<(Option<(Point, f64)>, usize)> {
        if tri.is_degenerate() {
            return Err(Error::DegenerateTriangle);
        }
        let tri = if tri.orientation() < 0.0 { Triangle::new(tri.a, tri.c, tri.b) } else { *tri };
        let mut visits = 0;
        let mut best: Option<Point> = None;
        self.visit(0, q, &tri, &mut visits, &mut best);
        let qp = Point::new(q.0, q.1, 0);
        Ok((best.map(|p| (p, dist2(&p, &qp).sqrt())), visits))
    }

    fn visit(&self, i: usize, q: (f64, f64), tri: &Triangle, visits: &mut usize, best: &mut Option<Point>) {
        *visits += 1;
        let node = &self.nodes[i];
        let found = match relation(tri, &node.region) {
            Relation::Disjoint => None,
            Relation::Inside => self.node_nearest(i, q),
            Relation::Crossing if node.children.is_empty() => {
                scan(&self.points[node.start..node.end], q, |p| tri.contains(p.xy()))
            }
            Relation::Crossing => {
                for &c in &node.children {
                    self.visit(c, q, tri, visits, best);
                }
                None
            }
        };
        if let Some(p) = found {
            *best = Some(closer(q, best.take(), p));
        }
    }
}

fn closer(q: (f64, f64), a: Option<Point>, b: Point) -> Point {
    let qp = Point::new(q.0, q.1, 0);
    match a {
        Some(a) if cmp_key((dist2(&a, &qp), a.id), (dist2(&b, &qp), b.id)).is_le() => a,
        _ => b,
    }
}

fn scan(points: &[Point], q: (f64, f64), keep: impl Fn(&Point) -> bool) -> Option<Point> {
    points.iter().filter(|p| keep(p)).fold(None, |acc, p| Some(closer(q, acc, *p)))
}

/// Instrumentation for one L2 query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct L2Stats {
    pub hull_size: usize,
    pub triangles: usize,
    pub nodes_visited: usize,
}

pub fn l2_query(tree: &PartitionTree, queries: &[Point]) -> Result<AggregateResult> {
    l2_query_with_stats(tree, queries).map(|(r, _)| r)
}

/// The point of P minimizing the farthest Euclidean distance to `queries`.
pub fn l2_query_with_stats(tree: &PartitionTree, queries: &[Point]) -> Result<(AggregateResult, L2Stats)> {
    if queries.is_empty() {
        return Err(Error::EmptyQuery);
    }
    validate_points(queries)?;
    let hull = convex_hull(queries);
    let diagram = farthest_vd(&hull);
    let mut stats = L2Stats { hull_size: hull.len(), ..L2Stats::default() };
    // (g^2, point, d(f(q), q)^2)
    let mut best: Option<(f64, Point, f64)> = None;
    for cell in &diagram.cells {
        let q = cell.owner.xy();
        let mut f: Option<Point> = None;
        for tri in triangulate_cell(cell, &tree.clip_box).triangles {
            stats.triangles += 1;
            let (hit, visits) = tree.f_triangle(q, &tri)?;
            stats.nodes_visited += visits;
            if let Some((p, _)) = hit {
                f = Some(closer(q, f, p));
            }
        }
        let Some(p) = f else { continue };
        let g2 = hull.iter().map(|h| dist2(&p, h)).fold(0.0, f64::max);
        let own = dist2(&p, &cell.owner);
        if best.is_none_or(|(bg, bp, _)| cmp_key((g2, p.id), (bg, bp.id)).is_lt()) {
            best = Some((g2, p, own));
        }
    }
    let (g2, point, own) = best.expect("the clipped cells cover P");
    // The winner is f(q) of a hull point whose cell contains it, so its
    // distance to that point is the aggregate value.
    debug_assert_eq!(g2, own, "winner must lie in its own cell");
    Ok((AggregateResult { point, g: g2.sqrt() }, stats))
}
