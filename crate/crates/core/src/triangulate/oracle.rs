//! Brute-force Delaunay reference in exact integer arithmetic.
//!
//! Every triple whose circumcircle has no input point strictly inside is a
//! candidate. All points on such a circle form a convex polygon, which is
//! fanned from its lowest index. Quartic in the number of points; meant for
//! small inputs only.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Float, Signed, Zero};

use crate::geometry::Point;

type Q = BigInt;

/// Every finite double is `m * 2^e`; shifting all of them to the smallest
/// exponent present gives integers with the same geometry.
fn exact_integers(points: &[Point]) -> Vec<(Q, Q)> {
    let parts: Vec<[(u64, i16, i8); 2]> = points
        .iter()
        .map(|p| [p.x.integer_decode(), p.y.integer_decode()])
        .collect();
    let base = parts
        .iter()
        .flatten()
        .filter(|(m, _, _)| *m != 0)
        .map(|&(_, e, _)| e)
        .min()
        .unwrap_or(0);
    let to_int = |(m, e, s): (u64, i16, i8)| {
        let v = BigInt::from(m) << ((e - base) as usize);
        if s < 0 {
            -v
        } else {
            v
        }
    };
    parts
        .into_iter()
        .map(|[x, y]| (to_int(x), to_int(y)))
        .collect()
}

fn orient(a: &(Q, Q), b: &(Q, Q), c: &(Q, Q)) -> Q {
    (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
}

/// Sign convention of the usual in-circle determinant: positive when `d` is
/// inside the circle through counter-clockwise `a, b, c`.
fn incircle(a: &(Q, Q), b: &(Q, Q), c: &(Q, Q), d: &(Q, Q)) -> Q {
    let row = |p: &(Q, Q)| {
        let x = &p.0 - &d.0;
        let y = &p.1 - &d.1;
        let w = &x * &x + &y * &y;
        (x, y, w)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    &ax * (&by * &cw - &bw * &cy) - &ay * (&bx * &cw - &bw * &cx) + &aw * (&bx * &cy - &by * &cx)
}

/// Increasing index triples of the tie-broken Delaunay triangulation of
/// `points`, which must be pairwise distinct.
pub fn delaunay_triangles(points: &[Point]) -> BTreeSet<[usize; 3]> {
    let p = exact_integers(points);
    let n = p.len();
    let mut circles: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = orient(&p[i], &p[j], &p[k]);
                if o.is_zero() {
                    continue;
                }
                let (a, b, c) = if o.is_positive() {
                    (i, j, k)
                } else {
                    (i, k, j)
                };
                let mut on_circle = Vec::new();
                let mut empty = true;
                for m in 0..n {
                    let s = incircle(&p[a], &p[b], &p[c], &p[m]);
                    if s.is_positive() {
                        empty = false;
                        break;
                    }
                    if s.is_zero() {
                        on_circle.push(m);
                    }
                }
                if empty {
                    circles.insert(on_circle);
                }
            }
        }
    }

    let mut out = BTreeSet::new();
    for group in circles {
        let root = group[0];
        let mut rest = group[1..].to_vec();
        // all other points lie within a half-turn as seen from a hull vertex
        rest.sort_by(|&u, &v| {
            let o = orient(&p[root], &p[u], &p[v]);
            if o.is_positive() {
                std::cmp::Ordering::Less
            } else if o.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        for w in rest.windows(2) {
            let mut t = [root, w[0], w[1]];
            t.sort_unstable();
            out.insert(t);
        }
    }
    out
}
