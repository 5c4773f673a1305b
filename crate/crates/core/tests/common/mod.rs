//! Generators and independent reference computations shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use delta_shape::bspline::{BSplineCurve, KnotVector};
use delta_shape::geometry::Point;
use delta_shape::{Cell, Complex, ComplexKind, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

/// An ordered complex on at most 12 vertices with up to `max_triangles`
/// triangles plus a few loose edges and vertices.
pub fn random_ordered_complex<R: Rng>(rng: &mut R, max_triangles: usize) -> Complex {
    let n = rng.gen_range(3..=12u32);
    let mut cells = Vec::new();
    for _ in 0..rng.gen_range(1..=max_triangles) {
        let mut vs: Vec<u32> = (0..n).collect();
        vs.shuffle(rng);
        let mut t = [vs[0], vs[1], vs[2]];
        t.sort();
        cells.push(Cell::triangle(t[0], t[1], t[2]));
    }
    for _ in 0..rng.gen_range(0..4) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            cells.push(Cell::edge(a.min(b), a.max(b)));
        }
    }
    cells.push(Cell::vertex(n + rng.gen_range(0..3)));
    Complex::build(cells, ComplexKind::Ordered).expect("sorted cells")
}

/// Number of `(cell, i, j)` with `i < j` where `d_i d_j != d_{j-1} d_i`.
pub fn commutation_failures(k: &Complex) -> usize {
    let mut failures = 0;
    for c in k.all_cells().filter(|c| c.dim() >= 2) {
        for j in 1..=c.dim() {
            for i in 0..j {
                let lhs = k.face(c, j).and_then(|f| k.face(&f, i));
                let rhs = k.face(c, i).and_then(|f| k.face(&f, j - 1));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => {}
                    _ => failures += 1,
                }
            }
        }
    }
    failures
}

/// A clamped knot vector of the given degree with random interior knots on
/// a coarse grid, so repeated knots occur (multiplicity at most `degree`).
pub fn random_clamped_knots<R: Rng>(rng: &mut R, degree: usize) -> KnotVector {
    let interior = rng.gen_range(0..=6);
    let mut inner: Vec<f64> = Vec::new();
    while inner.len() < interior {
        let t = rng.gen_range(1..20) as f64 / 20.0;
        if inner.iter().filter(|&&u| u == t).count() < degree {
            inner.push(t);
        }
    }
    inner.sort_by(f64::total_cmp);
    let mut knots = vec![0.0; degree + 1];
    knots.extend(inner);
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    KnotVector::new(knots).expect("valid clamped knots")
}

pub fn random_curve<R: Rng>(rng: &mut R, knots: KnotVector, degree: usize) -> BSplineCurve {
    let n = knots.len() - degree - 1;
    let control = (0..n)
        .map(|_| Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)))
        .collect();
    let weights = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
    BSplineCurve::new(control, weights, knots).expect("valid curve")
}

/// De Boor's corner-cutting scheme in homogeneous coordinates.
pub fn de_boor(curve: &BSplineCurve, t: f64) -> Point {
    let k = curve.knots().as_slice();
    let p = curve.degree();
    let n = curve.control().len();
    // span s with k[s] <= t < k[s+1], using the last non-empty span at the end
    let s = (p..n)
        .rev()
        .find(|&s| k[s] <= t && (t < k[s + 1] || (t == k[s + 1] && s + 1 == n)))
        .expect("t inside the domain");
    let mut d: Vec<[f64; 3]> = (0..=p)
        .map(|j| {
            let q = curve.control()[j + s - p];
            let w = curve.weights()[j + s - p];
            [q.x * w, q.y * w, w]
        })
        .collect();
    for r in 1..=p {
        for j in (r..=p).rev() {
            let lo = k[j + s - p];
            let hi = k[j + 1 + s - r];
            let alpha = (t - lo) / (hi - lo);
            let prev = d[j - 1];
            for (cur, lower) in d[j].iter_mut().zip(prev) {
                *cur = (1.0 - alpha) * lower + alpha * *cur;
            }
        }
    }
    let [x, y, w] = d[p];
    Point::new(x / w, y / w)
}

/// Distance from `p` to the convex hull of `pts`, as the smallest distance to
/// any triangle or segment spanned by them.
pub fn distance_to_hull(pts: &[Point], p: Point) -> f64 {
    let seg = |a: Point, b: Point| {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        let s = if len2 == 0.0 {
            0.0
        } else {
            (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
        };
        (p.x - a.x - s * dx).hypot(p.y - a.y - s * dy)
    };
    let cross =
        |a: Point, b: Point, c: Point| (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        best = best.min(pts[i].distance(&p));
        for j in i + 1..pts.len() {
            best = best.min(seg(pts[i], pts[j]));
            for l in j + 1..pts.len() {
                let (a, b, c) = (pts[i], pts[j], pts[l]);
                let area = cross(a, b, c);
                if area == 0.0 {
                    continue;
                }
                let u = cross(p, b, c) / area;
                let v = cross(a, p, c) / area;
                let w = cross(a, b, p) / area;
                if u >= 0.0 && v >= 0.0 && w >= 0.0 {
                    return 0.0;
                }
            }
        }
    }
    best
}

/// Level of every triangle reachable from `p`: 1 for triangles on `p`,
/// otherwise one more than the nearest triangle sharing a vertex with it.
pub fn bfs_levels(k: &Complex, p: VertexId) -> BTreeMap<Cell, usize> {
    let tris: Vec<&Cell> = k.triangles().iter().collect();
    let mut level: BTreeMap<Cell, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for t in &tris {
        if t.contains(p) {
            level.insert((*t).clone(), 1);
            queue.push_back(*t);
        }
    }
    while let Some(t) = queue.pop_front() {
        let d = level[t];
        for u in &tris {
            if !level.contains_key(*u) && u.vertices().iter().any(|&v| t.contains(v)) {
                level.insert((*u).clone(), d + 1);
                queue.push_back(*u);
            }
        }
    }
    level
}

/// Triangle levels as recorded by a decomposition.
pub fn recorded_levels(levels: &[BTreeSet<Cell>]) -> BTreeMap<Cell, usize> {
    levels
        .iter()
        .enumerate()
        .skip(1)
        .flat_map(|(k, l)| l.iter().map(move |c| (c.clone(), k)))
        .collect()
}
