//! Planar points, the two metrics, and the 45° rotation that turns L1 into
//! L∞.
//!
//! Under `u = x + y`, `v = x - y` every line of slope ±1 becomes
//! axis-parallel, and `|dx| + |dy| = max(|du|, |dv|)`. The L1 side of the
//! crate works almost entirely in these rotated coordinates.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A point of an input set. `id` is its stable index and the tie-breaker
/// everywhere: among equal keys the smaller id wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub id: usize,
}

impl Point {
    pub const fn new(x: f64, y: f64, id: usize) -> Self {
        Point { x, y, id }
    }

    #[inline]
    pub fn u(&self) -> f64 {
        self.x + self.y + 0.0
    }

    #[inline]
    pub fn v(&self) -> f64 {
        self.x - self.y + 0.0
    }

    /// The same point with any negative zero coordinate replaced by `+0.0`,
    /// so that `total_cmp` orderings agree with `==`.
    pub fn canonical(self) -> Point {
        Point { x: self.x + 0.0, y: self.y + 0.0, ..self }
    }

    #[inline]
    pub fn xy(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn same_position(&self, other: &Point) -> bool {
        self.x == other.x && self.y == other.y
    }
}

/// Assigns ids `0..n` in input order.
pub fn points_from_coords(coords: &[(f64, f64)]) -> Vec<Point> {
    coords
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| Point::new(x, y, id))
        .collect()
}

/// Checks finiteness and id uniqueness of a point set.
pub fn validate_points(points: &[Point]) -> Result<()> {
    let mut ids: Vec<usize> = Vec::with_capacity(points.len());
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::NonFinite(p.id));
        }
        ids.push(p.id);
    }
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateId(w[0]));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    L1,
    L2,
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            other => Err(format!("unknown metric '{other}' (expected l1 or l2)")),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::L1 => f.write_str("l1"),
            Metric::L2 => f.write_str("l2"),
        }
    }
}

pub fn dist(p: &Point, q: &Point, metric: Metric) -> f64 {
    match metric {
        Metric::L1 => l1(p, q),
        Metric::L2 => dist2(p, q).sqrt(),
    }
}

#[inline]
pub fn l1(p: &Point, q: &Point) -> f64 {
    (p.x - q.x).abs() + (p.y - q.y).abs()
}

/// Squared Euclidean distance; exact for integer coordinates below 2^26.
#[inline]
pub fn dist2(p: &Point, q: &Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

/// `(key, id)` lexicographic order with NaN-free keys.
#[inline]
pub fn cmp_key(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// A point of P together with its aggregate value `g(p, Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateResult {
    pub point: Point,
    pub g: f64,
}

impl AggregateResult {
    pub fn key(&self) -> (f64, usize) {
        (self.g, self.point.id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedPoint {
    pub u: f64,
    pub v: f64,
}

impl RotatedPoint {
    pub fn unrotate(&self) -> (f64, f64) {
        ((self.u + self.v) / 2.0, (self.u - self.v) / 2.0)
    }

    pub fn chebyshev(&self, other: &RotatedPoint) -> f64 {
        (self.u - other.u).abs().max((self.v - other.v).abs())
    }
}

pub fn rotate45(p: &Point) -> RotatedPoint {
    RotatedPoint { u: p.u(), v: p.v() }
}

/// The four axis/diagonal lines through a site, stored by their offsets:
/// `l_plus: y - x = c`, `l_minus: x + y = c`, `l_h: y = c`, `l_v: x = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    pub site: Point,
    pub l_plus: f64,
    pub l_minus: f64,
    pub l_h: f64,
    pub l_v: f64,
}

impl CanonicalFrame {
    pub fn new(site: Point) -> Self {
        CanonicalFrame {
            site,
            l_plus: site.y - site.x,
            l_minus: site.x + site.y,
            l_h: site.y,
            l_v: site.x,
        }
    }

    /// Signed side of `p` relative to the slope +1 line: positive above.
    pub fn above_plus(&self, p: &Point) -> f64 {
        (p.y - p.x) - self.l_plus
    }

    /// Signed side of `p` relative to the slope -1 line: positive above.
    pub fn above_minus(&self, p: &Point) -> f64 {
        (p.x + p.y) - self.l_minus
    }
}

/// Exact orientation of `c` relative to the directed line `a -> b`:
/// positive for a left turn.
#[inline]
pub fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.0, y: a.1 },
        robust::Coord { x: b.0, y: b.1 },
        robust::Coord { x: c.0, y: c.1 },
    )
}

/// One of the eight symmetries of the square, applied as an optional
/// transpose `(x, y) -> (y, x)` followed by sign flips on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub transpose: bool,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { transpose: false, flip_x: false, flip_y: false };

    pub const fn reflection(flip_x: bool, flip_y: bool) -> Self {
        Symmetry { transpose: false, flip_x, flip_y }
    }

    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..8u8).map(|b| Symmetry { transpose: b & 4 != 0, flip_x: b & 1 != 0, flip_y: b & 2 != 0 })
    }

    #[inline]
    pub fn apply(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let (x, y) = if self.transpose { (y, x) } else { (x, y) };
        (if self.flip_x { -x } else { x }, if self.flip_y { -y } else { y })
    }

    #[inline]
    pub fn invert(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let (x, y) = (if self.flip_x { -x } else { x }, if self.flip_y { -y } else { y });
        if self.transpose {
            (y, x)
        } else {
            (x, y)
        }
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let (x, y) = self.apply(p.xy());
        Point::new(x, y, p.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y, 0)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dist(&p(0.0, 0.0), &p(3.0, 4.0), Metric::L1), 7.0);
        assert_eq!(dist(&p(0.0, 0.0), &p(3.0, 4.0), Metric::L2), 5.0);
        assert_eq!(dist(&p(2.0, 2.0), &p(2.0, 2.0), Metric::L1), 0.0);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate45(&p(1.0, 0.0)), RotatedPoint { u: 1.0, v: 1.0 });
        assert_eq!(rotate45(&p(0.0, 0.0)), RotatedPoint { u: 0.0, v: 0.0 });
        assert_eq!(rotate45(&p(2.0, 3.0)), RotatedPoint { u: 5.0, v: -1.0 });
    }

    #[test]
    fn frame_offsets() {
        let f = CanonicalFrame::new(p(2.0, 5.0));
        assert_eq!((f.l_plus, f.l_minus, f.l_h, f.l_v), (3.0, 7.0, 5.0, 2.0));
        assert_eq!(f.above_plus(&p(0.0, 3.0)), 0.0);
        assert!(f.above_minus(&p(10.0, 10.0)) > 0.0);
    }

    #[test]
    fn validation_rejects_bad_sets() {
        let pts = vec![Point::new(0.0, 0.0, 1), Point::new(1.0, 1.0, 1)];
        assert_eq!(validate_points(&pts), Err(Error::DuplicateId(1)));
        let pts = vec![Point::new(f64::NAN, 0.0, 4)];
        assert_eq!(validate_points(&pts), Err(Error::NonFinite(4)));
    }

    #[test]
    fn symmetries_are_invertible() {
        for s in Symmetry::all() {
            let q = s.apply((3.0, -7.0));
            assert_eq!(s.invert(q), (3.0, -7.0));
        }
        assert_eq!(Symmetry::all().count(), 8);
    }

    #[test]
    fn l1_is_chebyshev_after_rotation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100_000 {
            let a = p(rng.random_range(-1000..1000) as f64, rng.random_range(-1000..1000) as f64);
            let b = p(rng.random_range(-1000..1000) as f64, rng.random_range(-1000..1000) as f64);
            assert_eq!(l1(&a, &b), rotate45(&a).chebyshev(&rotate45(&b)));
        }
    }

    proptest! {
        #[test]
        fn rotation_round_trips(x in -1_000_000i64..1_000_000, y in -1_000_000i64..1_000_000) {
            let r = rotate45(&p(x as f64, y as f64));
            prop_assert_eq!(r.unrotate(), (x as f64, y as f64));
        }

        #[test]
        fn triangle_inequality(
            a in (-10_000i64..10_000, -10_000i64..10_000),
            b in (-10_000i64..10_000, -10_000i64..10_000),
            c in (-10_000i64..10_000, -10_000i64..10_000),
        ) {
            let [a, b, c] = [a, b, c].map(|(x, y)| p(x as f64, y as f64));
            prop_assert!(l1(&a, &c) <= l1(&a, &b) + l1(&b, &c));
            let (ac, ab, bc) = (dist(&a, &c, Metric::L2), dist(&a, &b, Metric::L2), dist(&b, &c, Metric::L2));
            prop_assert!(ac <= (ab + bc) * (1.0 + 1e-12));
            prop_assert_eq!(l1(&a, &b), l1(&b, &a));
        }
    }
}
