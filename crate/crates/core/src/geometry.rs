//! Planar primitives shared by the triangulation, spline and proximity code.
//!
//! Orientation and in-circle signs come from adaptive-precision predicates, so
//! a zero result means exactly collinear / cocircular.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn coord(self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.x,
            y: self.y,
        }
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Positive when `a, b, c` turn counter-clockwise, zero when collinear.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

/// Positive when `d` lies strictly inside the circle through the
/// counter-clockwise triangle `a, b, c`; zero when the four are cocircular.
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    robust::incircle(a.coord(), b.coord(), c.coord(), d.coord())
}

pub fn triangle_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)).abs()
}

pub fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

/// Convex hull in counter-clockwise order without collinear boundary points
/// (Andrew's monotone chain).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(lex_cmp);
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Largest signed distance from `p` to the supporting lines of a
/// counter-clockwise convex polygon. Negative inside, positive outside.
pub fn signed_distance_outside(hull: &[Point], p: Point) -> f64 {
    let n = hull.len();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let len = a.distance(&b);
        if len == 0.0 {
            continue;
        }
        // outward normal of a CCW edge points to the right
        let d = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / len;
        worst = worst.max(-d);
    }
    worst
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(&a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(&(a + ab * t))
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Closed containment test for a convex polygon given in either orientation.
pub fn point_in_convex(poly: &[Point], p: Point) -> bool {
    match poly.len() {
        0 => false,
        1 => poly[0] == p,
        2 => orient(poly[0], poly[1], p) == 0.0 && on_segment(poly[0], poly[1], p),
        n => {
            let mut sign = 0.0_f64;
            for i in 0..n {
                let o = orient(poly[i], poly[(i + 1) % n], p);
                if o != 0.0 {
                    if sign != 0.0 && o.signum() != sign {
                        return false;
                    }
                    sign = o.signum();
                }
            }
            true
        }
    }
}

fn polygon_edges(poly: &[Point]) -> Vec<(Point, Point)> {
    match poly.len() {
        0 => Vec::new(),
        1 => vec![(poly[0], poly[0])],
        2 => vec![(poly[0], poly[1])],
        n => (0..n).map(|i| (poly[i], poly[(i + 1) % n])).collect(),
    }
}

/// Euclidean distance between two closed convex polygons (points, segments or
/// filled triangles). Zero when they touch or overlap.
pub fn polygon_distance(a: &[Point], b: &[Point]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    if a.iter().any(|&p| point_in_convex(b, p)) || b.iter().any(|&p| point_in_convex(a, p)) {
        return 0.0;
    }
    let ea = polygon_edges(a);
    let eb = polygon_edges(b);
    let mut best = f64::INFINITY;
    for &(p, q) in &ea {
        for &(r, s) in &eb {
            if segments_intersect(p, q, r, s) {
                return 0.0;
            }
            best = best
                .min(point_segment_distance(p, r, s))
                .min(point_segment_distance(q, r, s))
                .min(point_segment_distance(r, p, q))
                .min(point_segment_distance(s, p, q));
        }
    }
    best
}

/// Distance from `p` to a closed triangle; zero inside.
pub fn point_triangle_distance(p: Point, tri: [Point; 3]) -> f64 {
    polygon_distance(&[p], &tri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert!(orient(a, b, Point::new(0.0, 1.0)) > 0.0);
        assert!(orient(a, b, Point::new(0.0, -1.0)) < 0.0);
        assert_eq!(orient(a, b, Point::new(2.0, 0.0)), 0.0);
    }

    #[test]
    fn unit_square_is_cocircular() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert_eq!(incircle(sq[0], sq[1], sq[2], sq[3]), 0.0);
        assert!(incircle(sq[0], sq[1], sq[2], Point::new(0.5, 0.5)) > 0.0);
    }

    #[test]
    fn hull_drops_collinear_and_interior_points() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
            Point::new(1.0, 1.0),
        ];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(signed_distance_outside(&hull, Point::new(1.0, 1.0)) < 0.0);
        assert!((signed_distance_outside(&hull, Point::new(3.0, 1.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_distances() {
        let t1 = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        let t2 = [
            Point::new(1.5, 0.0),
            Point::new(2.5, 0.0),
            Point::new(1.5, 1.0),
        ];
        assert!((polygon_distance(&t1, &t2) - 0.5).abs() < 1e-12);
        assert_eq!(polygon_distance(&t1, &t1), 0.0);
        assert_eq!(point_triangle_distance(Point::new(0.2, 0.2), t1), 0.0);
    }
}
