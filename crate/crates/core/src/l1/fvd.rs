//! Farthest-point Voronoi diagram of the diagonal extremes of a query set.
//!
//! In rotated coordinates the farthest L1 distance from `p` to `Q` is
//!
//! ```text
//! g(p) = max(U+ - u, u - U-, v - V-, V+ - v)
//! ```
//!
//! where `U±`, `V±` are the extremes of `u = x + y` and `v = x - y` over
//! `Q`. Each term belongs to one diagonal direction (a *role*), and the
//! region where a term is the maximum is a wedge `{x >= X, y >= Y,
//! x + y >= C}` up to a symmetry of the square. A cell is the union of the
//! wedges of the roles its owner is assigned, so membership is exact even
//! when bisectors degenerate into two-dimensional regions.

use crate::drag::Quadrant;
use crate::error::{Error, Result};
use crate::geometry::{dist, Metric, Point, Symmetry};

/// Diagonal directions in the order used for redundancy removal.
pub const ROLES: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE];

/// Extremes of the rotated coordinates over a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extents {
    pub u_max: f64,
    pub u_min: f64,
    pub v_max: f64,
    pub v_min: f64,
}

impl Extents {
    pub fn of(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut e = Extents {
            u_max: f64::NEG_INFINITY,
            u_min: f64::INFINITY,
            v_max: f64::NEG_INFINITY,
            v_min: f64::INFINITY,
        };
        for (x, y) in points {
            let (u, v) = (x + y, x - y);
            e.u_max = e.u_max.max(u);
            e.u_min = e.u_min.min(u);
            e.v_max = e.v_max.max(v);
            e.v_min = e.v_min.min(v);
        }
        e
    }

    /// The distance term owned by `role`.
    #[inline]
    pub fn term(&self, role: Quadrant, x: f64, y: f64) -> f64 {
        match role {
            Quadrant::NE => self.u_max - (x + y),
            Quadrant::SW => (x + y) - self.u_min,
            Quadrant::NW => (x - y) - self.v_min,
            Quadrant::SE => self.v_max - (x - y),
        }
    }

    #[inline]
    pub fn g(&self, x: f64, y: f64) -> f64 {
        ROLES.iter().map(|&r| self.term(r, x, y)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether the term of `role` is a maximum at `(x, y)`.
    #[inline]
    pub fn wedge_contains(&self, role: Quadrant, x: f64, y: f64) -> bool {
        let t = self.term(role, x, y);
        ROLES.iter().all(|&r| self.term(r, x, y) <= t)
    }

    /// Whether `p` attains the extreme of `role`.
    pub fn attains(&self, role: Quadrant, p: &Point) -> bool {
        match role {
            Quadrant::NE => p.u() == self.u_max,
            Quadrant::SW => p.u() == self.u_min,
            Quadrant::NW => p.v() == self.v_min,
            Quadrant::SE => p.v() == self.v_max,
        }
    }
}

/// The diagonal extremes `q1..q4` of a query set (NE, NW, SW, SE), and the
/// distinct survivors after redundant members are removed.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryExtremes {
    pub q1: Point,
    pub q2: Point,
    pub q3: Point,
    pub q4: Point,
    pub distinct: Vec<Point>,
    extents: Extents,
}

impl QueryExtremes {
    pub fn get(&self, role: Quadrant) -> Point {
        match role {
            Quadrant::NE => self.q1,
            Quadrant::NW => self.q2,
            Quadrant::SW => self.q3,
            Quadrant::SE => self.q4,
        }
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    /// Roles assigned to the survivor with this id.
    pub fn roles_of(&self, id: usize) -> Vec<Quadrant> {
        ROLES.iter().copied().filter(|&r| self.get(r).id == id).collect()
    }
}

/// Single pass over `Q` for the extremes, then redundancy removal.
pub fn compute_qmax(queries: &[Point]) -> Result<QueryExtremes> {
    let first = queries.first().ok_or(Error::EmptyQuery)?;
    let extents = Extents::of(queries.iter().map(|q| q.xy()));
    let mut pick = [*first; 4];
    let mut seen = [false; 4];
    for q in queries {
        for (k, &role) in ROLES.iter().enumerate() {
            if extents.attains(role, q) && (!seen[k] || q.id < pick[k].id) {
                pick[k] = *q;
                seen[k] = true;
            }
        }
    }

    let mut survivors: Vec<Point> = Vec::with_capacity(4);
    for p in pick {
        if !survivors.iter().any(|s| s.id == p.id) {
            survivors.push(p);
        }
    }
    let mut k = 0;
    while k < survivors.len() {
        let others: Vec<&Point> = survivors.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p).collect();
        let redundant = !others.is_empty()
            && ROLES.iter().all(|&r| others.iter().any(|p| extents.attains(r, p)));
        if redundant {
            survivors.remove(k);
        } else {
            k += 1;
        }
    }

    let assign = |role: Quadrant| {
        *survivors
            .iter()
            .filter(|p| extents.attains(role, p))
            .min_by_key(|p| p.id)
            .expect("survivors attain every extreme")
    };
    let mut distinct = survivors.clone();
    distinct.sort_by_key(|p| p.id);
    Ok(QueryExtremes {
        q1: assign(Quadrant::NE),
        q2: assign(Quadrant::NW),
        q3: assign(Quadrant::SW),
        q4: assign(Quadrant::SE),
        distinct,
        extents,
    })
}

/// `max` over the distinct extremes of `d(p, q_i)`.
pub fn g_value(p: &Point, e: &QueryExtremes, metric: Metric) -> f64 {
    e.distinct.iter().map(|q| dist(p, q, metric)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BisectorKind {
    /// Middle segment plus two vertical half-lines.
    Vertical,
    /// Middle segment plus two horizontal half-lines.
    Horizontal,
    /// A single line perpendicular to axis-aligned sites.
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: (f64, f64),
    pub direction: (f64, f64),
}

impl Ray {
    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.origin.0 + t * self.direction.0, self.origin.1 + t * self.direction.1)
    }
}

/// The L1 bisector of two sites: a middle segment `a`-`b` of slope ±1
/// (a single point for a [`BisectorKind::Line`]) and two half-lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisector {
    pub kind: BisectorKind,
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub half_lines: [Ray; 2],
}

impl Bisector {
    pub fn middle_at(&self, t: f64) -> (f64, f64) {
        (self.a.0 + t * (self.b.0 - self.a.0), self.a.1 + t * (self.b.1 - self.a.1))
    }
}

/// L1 bisector of two distinct sites. When the bounding rectangle of the
/// sites is a square the two vertical half-lines are used.
pub fn bisector(q: &Point, q2: &Point) -> Result<Bisector> {
    if q.same_position(q2) {
        return Err(Error::CoincidentSites);
    }
    let (x1, y1, x2, y2) = (q.x, q.y, q2.x, q2.y);
    let (dx, dy) = ((x2 - x1).abs(), (y2 - y1).abs());
    if dx == 0.0 {
        let m = (x1, (y1 + y2) / 2.0);
        return Ok(Bisector {
            kind: BisectorKind::Line,
            a: m,
            b: m,
            half_lines: [Ray { origin: m, direction: (-1.0, 0.0) }, Ray { origin: m, direction: (1.0, 0.0) }],
        });
    }
    if dy == 0.0 {
        let m = ((x1 + x2) / 2.0, y1);
        return Ok(Bisector {
            kind: BisectorKind::Line,
            a: m,
            b: m,
            half_lines: [Ray { origin: m, direction: (0.0, -1.0) }, Ray { origin: m, direction: (0.0, 1.0) }],
        });
    }
    let sx = (x2 - x1).signum();
    let sy = (y2 - y1).signum();
    let half = (dx + dy) / 2.0;
    if dy > dx {
        let a = (x1, y1 + sy * half);
        let b = (x2, y1 + sy * (dy - dx) / 2.0);
        Ok(Bisector {
            kind: BisectorKind::Horizontal,
            a,
            b,
            half_lines: [Ray { origin: a, direction: (-sx, 0.0) }, Ray { origin: b, direction: (sx, 0.0) }],
        })
    } else {
        let a = (x1 + sx * half, y1);
        let b = (x1 + sx * (dx - dy) / 2.0, y2);
        Ok(Bisector {
            kind: BisectorKind::Vertical,
            a,
            b,
            half_lines: [Ray { origin: a, direction: (0.0, -sy) }, Ray { origin: b, direction: (0.0, sy) }],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellShape {
    /// Vertical ray, slope -1 middle segment, vertical ray (canonically).
    TypeA,
    /// A single wedge: two half-lines joined by a slope -1 segment.
    TypeB,
    /// Vertical ray, slope +1 middle segment, vertical ray (canonically).
    TypeC,
    HalfPlane,
    WholePlane,
    /// The closure of the complement of a TypeB wedge.
    Complement,
}

/// One cell of the diagram. `v1`, `v2` and `orientation` describe its
/// boundary; `orientation` maps the cell onto its canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Cell {
    pub owner: Point,
    pub roles: Vec<Quadrant>,
    pub shape: CellShape,
    pub v1: (f64, f64),
    pub v2: (f64, f64),
    pub orientation: Symmetry,
    extents: Extents,
}

fn map_role(s: &Symmetry, role: Quadrant) -> Quadrant {
    let (x, y) = s.apply(role.signs());
    Quadrant::from_signs(x, y)
}

/// Wedge parameters of the SW role in a frame: `x >= X, y >= Y, x + y >= C`.
#[derive(Debug, Clone, Copy)]
struct Frame {
    e: Extents,
}

impl Frame {
    fn new(s: &Symmetry, distinct: &[Point]) -> Self {
        Frame { e: Extents::of(distinct.iter().map(|p| s.apply(p.xy()))) }
    }

    fn x(&self) -> f64 {
        (self.e.u_min + self.e.v_max) / 2.0
    }

    fn y(&self) -> f64 {
        (self.e.u_min - self.e.v_min) / 2.0
    }

    fn c(&self) -> f64 {
        (self.e.u_min + self.e.u_max) / 2.0
    }

    /// Whether the wedge has a middle segment of positive length.
    fn has_diagonal(&self) -> bool {
        self.c() > self.x() + self.y()
    }

    fn wedge_vertices(&self) -> ((f64, f64), (f64, f64)) {
        let (x, y, c) = (self.x(), self.y(), self.c());
        if self.has_diagonal() {
            ((x, c - x), (c - y, y))
        } else {
            ((x, y), (x, y))
        }
    }
}

impl L1Cell {
    /// Exact membership: some assigned role's term is maximal at `p`.
    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.roles.iter().any(|&r| self.extents.wedge_contains(r, p.0, p.1))
    }

    /// Membership reconstructed from `(shape, v1, v2, orientation)` only.
    pub fn contains_by_shape(&self, p: (f64, f64)) -> bool {
        let s = self.orientation;
        let (x, y) = s.apply(p);
        let v1 = s.apply(self.v1);
        let v2 = s.apply(self.v2);
        match self.shape {
            CellShape::WholePlane => true,
            CellShape::HalfPlane => x >= v1.0,
            CellShape::TypeB => x >= v1.0 && y >= v2.1 && x + y >= v1.0 + v1.1,
            CellShape::Complement => x <= v1.0 || y <= v2.1 || x + y <= v1.0 + v1.1,
            CellShape::TypeA | CellShape::TypeC => {
                let diagonal = if self.shape == CellShape::TypeA {
                    x + y >= v1.0 + v1.1
                } else {
                    x - y >= v1.0 - v1.1
                };
                if y >= v1.1 {
                    x >= v1.0 && (y > v1.1 || diagonal)
                } else if y <= v2.1 {
                    x >= v2.0 && (y < v2.1 || diagonal)
                } else {
                    diagonal
                }
            }
        }
    }

    /// L1 distance from `p` to the owner when `p` is in the cell; equals
    /// `g(p)` there.
    pub fn owner_distance(&self, p: (f64, f64)) -> f64 {
        self.extents.g(p.0, p.1)
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }
}

/// One cell per distinct extreme, ordered by owner id.
pub fn build_cells(e: &QueryExtremes) -> Vec<L1Cell> {
    e.distinct
        .iter()
        .map(|owner| {
            let roles = e.roles_of(owner.id);
            let (shape, orientation, v1, v2) = classify(&roles, &e.distinct);
            L1Cell { owner: *owner, roles, shape, v1, v2, orientation, extents: e.extents }
        })
        .collect()
}

type Classified = (CellShape, Symmetry, (f64, f64), (f64, f64));

fn classify(roles: &[Quadrant], distinct: &[Point]) -> Classified {
    let to_sw = |role: Quadrant| {
        Symmetry::all()
            .find(|s| !s.transpose && map_role(s, role) == Quadrant::SW)
            .expect("a reflection maps every role to SW")
    };
    let wedge = |s: Symmetry| {
        let (v1, v2) = Frame::new(&s, distinct).wedge_vertices();
        (s.invert(v1), s.invert(v2))
    };
    match roles.len() {
        1 => {
            let s = to_sw(roles[0]);
            let (v1, v2) = wedge(s);
            (CellShape::TypeB, s, v1, v2)
        }
        3 => {
            let missing = ROLES.iter().copied().find(|r| !roles.contains(r)).unwrap();
            let s = to_sw(missing);
            let (v1, v2) = wedge(s);
            (CellShape::Complement, s, v1, v2)
        }
        2 => {
            let s = Symmetry::all().find(|s| {
                let mapped: Vec<Quadrant> = roles.iter().map(|&r| map_role(s, r)).collect();
                mapped.contains(&Quadrant::SW) && mapped.contains(&Quadrant::NW)
            });
            let Some(s) = s else {
                // Opposite roles never survive redundancy removal together;
                // fall back to exact membership through `contains`.
                let p = distinct[0].xy();
                return (CellShape::WholePlane, Symmetry::IDENTITY, p, p);
            };
            let f = Frame::new(&s, distinct);
            let a = (f.e.u_max - f.e.u_min) / 2.0;
            let b = (f.e.v_max - f.e.v_min) / 2.0;
            let (x3, y3, c) = (f.x(), f.y(), f.c());
            let x2 = (f.e.u_max + f.e.v_min) / 2.0;
            let cv = (f.e.v_min + f.e.v_max) / 2.0;
            let (shape, v1, v2) = if a > b {
                (CellShape::TypeA, (x3, c - x3), (c - y3, y3))
            } else if b > a {
                (CellShape::TypeC, (x3, y3), (x2, x2 - cv))
            } else {
                (CellShape::HalfPlane, (x3, y3), (x3, y3))
            };
            (shape, s, s.invert(v1), s.invert(v2))
        }
        _ => {
            let p = distinct[0].xy();
            (CellShape::WholePlane, Symmetry::IDENTITY, p, p)
        }
    }
}

/// The smallest-id owner among the cells containing `p`; this is the
/// farthest extreme under the smaller-id tie rule.
pub fn owner_of(cells: &[L1Cell], p: (f64, f64)) -> Option<Point> {
    cells.iter().filter(|c| c.contains(p)).map(|c| c.owner).min_by_key(|o| o.id)
}
