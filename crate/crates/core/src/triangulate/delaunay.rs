use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Keypoint;
use crate::complex::{Cell, Complex, ComplexKind};
use crate::error::{Error, Result};
use crate::geometry::{incircle, lex_cmp, orient, Point};

pub type Edge = (usize, usize);

/// A planar triangulation over a list of keypoints.
///
/// Triangles are stored as increasing index triples; every edge records the
/// one or two triangles that contain it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeshJson", into = "MeshJson")]
pub struct Mesh {
    vertices: Vec<Keypoint>,
    triangles: Vec<[usize; 3]>,
    edges: BTreeMap<Edge, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MeshJson {
    vertices: Vec<Keypoint>,
    triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(vertices: Vec<Keypoint>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        let mut tris = Vec::with_capacity(triangles.len());
        for mut t in triangles {
            t.sort_unstable();
            if t[2] >= n {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t:?} indexes past {n} vertices"
                )));
            }
            if t[0] == t[1] || t[1] == t[2] {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t:?} repeats a vertex"
                )));
            }
            let [a, b, c] = t.map(|i| vertices[i].point());
            if orient(a, b, c) == 0.0 {
                return Err(Error::InvalidMesh(format!("triangle {t:?} has zero area")));
            }
            tris.push(t);
        }
        tris.sort_unstable();
        if tris.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMesh("duplicate triangle".into()));
        }
        let mut edges: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (id, &[a, b, c]) in tris.iter().enumerate() {
            for e in [(a, b), (a, c), (b, c)] {
                edges.entry(e).or_default().push(id);
            }
        }
        if let Some((e, _)) = edges.iter().find(|(_, ts)| ts.len() > 2) {
            return Err(Error::InvalidMesh(format!(
                "edge {e:?} has more than two triangles"
            )));
        }
        Ok(Self {
            vertices,
            triangles: tris,
            edges,
        })
    }

    pub fn vertices(&self) -> &[Keypoint] {
        &self.vertices
    }

    pub fn point(&self, i: usize) -> Point {
        self.vertices[i].point()
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(Keypoint::point).collect()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|i| self.point(i))
    }

    /// Edge → ids of its incident triangles (one or two).
    pub fn edge_adjacency(&self) -> &BTreeMap<Edge, Vec<usize>> {
        &self.edges
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.keys().copied()
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| *e)
    }

    /// Third vertices of the triangles on `edge`, in increasing order.
    pub fn opposite_vertices(&self, edge: Edge) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .get(&edge)
            .into_iter()
            .flatten()
            .map(|&t| {
                *self.triangles[t]
                    .iter()
                    .find(|&&v| v != edge.0 && v != edge.1)
                    .expect("triangle has a third vertex")
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The mesh as an ordered complex on vertex ids `0..n`.
    pub fn to_complex(&self) -> Complex {
        let mut cells: Vec<Cell> = (0..self.vertices.len() as u32).map(Cell::vertex).collect();
        cells.extend(
            self.triangles
                .iter()
                .map(|t| Cell::triangle(t[0] as u32, t[1] as u32, t[2] as u32)),
        );
        Complex::build(cells, ComplexKind::Ordered).expect("mesh triangles are increasing")
    }
}

impl TryFrom<MeshJson> for Mesh {
    type Error = Error;
    fn try_from(json: MeshJson) -> Result<Self> {
        Mesh::new(json.vertices, json.triangles)
    }
}

impl From<Mesh> for MeshJson {
    fn from(m: Mesh) -> Self {
        MeshJson {
            vertices: m.vertices,
            triangles: m.triangles,
        }
    }
}

/// Keeps the first of each group of keypoints at the same position.
pub fn dedup_points(points: &[Keypoint]) -> Vec<Keypoint> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(points.len());
    for k in points {
        if seen.insert((k.x.to_bits(), k.y.to_bits())) {
            out.push(*k);
        } else {
            log::warn!("dropping duplicate point ({}, {})", k.x, k.y);
        }
    }
    out
}

/// Delaunay triangulation with exact predicates.
///
/// Where four or more points are cocircular the empty polygon is fanned from
/// its lowest-index vertex. Duplicate positions are dropped (with a warning)
/// before indexing, so indices refer to the deduplicated list.
pub fn delaunay(points: &[Keypoint]) -> Result<Mesh> {
    if points.iter().any(|k| !k.x.is_finite() || !k.y.is_finite()) {
        return Err(Error::Degenerate("non-finite coordinate".into()));
    }
    let vertices = dedup_points(points);
    if vertices.len() < 3 {
        return Err(Error::Degenerate(format!(
            "{} distinct points",
            vertices.len()
        )));
    }
    let pts: Vec<Point> = vertices.iter().map(Keypoint::point).collect();
    let mut tri = Triangulation::sweep(&pts)?;
    tri.legalize(&pts);
    let triangles = tri.triangles.into_iter().map(|mut t| {
        t.sort_unstable();
        t
    });
    Mesh::new(vertices, triangles.collect())
}

struct Triangulation {
    /// Counter-clockwise triples.
    triangles: Vec<[usize; 3]>,
    /// Directed edge → the triangle holding it counter-clockwise.
    half_edges: HashMap<Edge, usize>,
}

impl Triangulation {
    fn add(&mut self, t: [usize; 3]) {
        let id = self.triangles.len();
        self.triangles.push(t);
        self.link(id);
    }

    fn link(&mut self, id: usize) {
        let [a, b, c] = self.triangles[id];
        for e in [(a, b), (b, c), (c, a)] {
            self.half_edges.insert(e, id);
        }
    }

    /// Inserts points in lexicographic order; each new point lies outside the
    /// current hull and is joined to every hull edge it strictly sees.
    fn sweep(pts: &[Point]) -> Result<Self> {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(&pts[a], &pts[b]));
        let (p0, p1) = (pts[order[0]], pts[order[1]]);
        let k = (2..order.len())
            .find(|&i| orient(p0, p1, pts[order[i]]) != 0.0)
            .ok_or_else(|| Error::Degenerate("all points are collinear".into()))?;

        let mut tri = Triangulation {
            triangles: Vec::new(),
            half_edges: HashMap::new(),
        };
        let apex = order[k];
        let mut run: Vec<usize> = order[..k].to_vec();
        if orient(p0, p1, pts[apex]) < 0.0 {
            run.reverse();
        }
        for w in run.windows(2) {
            tri.add([w[0], w[1], apex]);
        }
        let mut hull = run;
        hull.push(apex);

        for &p in &order[k + 1..] {
            let n = hull.len();
            let visible: Vec<bool> = (0..n)
                .map(|i| orient(pts[hull[i]], pts[hull[(i + 1) % n]], pts[p]) < 0.0)
                .collect();
            let start = (0..n)
                .find(|&i| visible[i] && !visible[(i + n - 1) % n])
                .expect("a point outside the hull sees some edge");
            hull.rotate_left(start);
            let run_len = visible.iter().filter(|&&v| v).count();
            for i in 0..run_len {
                tri.add([hull[i + 1], hull[i], p]);
            }
            hull.drain(1..run_len);
            hull.insert(1, p);
        }
        Ok(tri)
    }

    /// Lawson edge flips until every edge is locally Delaunay. A cocircular
    /// quadrilateral keeps the diagonal with the smaller lowest endpoint.
    fn legalize(&mut self, pts: &[Point]) {
        let mut stack: Vec<Edge> = self
            .half_edges
            .keys()
            .filter(|(a, b)| a < b)
            .copied()
            .collect();
        stack.sort_unstable();
        while let Some((u, v)) = stack.pop() {
            let (Some(&t1), Some(&t2)) =
                (self.half_edges.get(&(u, v)), self.half_edges.get(&(v, u)))
            else {
                continue;
            };
            let [a, b, c] = rotate_to(self.triangles[t1], u);
            let d = third(self.triangles[t2], a, b);
            let ic = incircle(pts[a], pts[b], pts[c], pts[d]);
            if !(ic > 0.0 || (ic == 0.0 && c.min(d) < a.min(b))) {
                continue;
            }
            self.half_edges.remove(&(a, b));
            self.half_edges.remove(&(b, a));
            self.triangles[t1] = [a, d, c];
            self.triangles[t2] = [d, b, c];
            self.link(t1);
            self.link(t2);
            for (x, y) in [(a, d), (d, b), (b, c), (c, a)] {
                stack.push((x.min(y), x.max(y)));
            }
        }
    }
}

fn rotate_to(t: [usize; 3], first: usize) -> [usize; 3] {
    match t.iter().position(|&v| v == first) {
        Some(0) => t,
        Some(1) => [t[1], t[2], t[0]],
        _ => [t[2], t[0], t[1]],
    }
}

fn third(t: [usize; 3], a: usize, b: usize) -> usize {
    *t.iter()
        .find(|&&v| v != a && v != b)
        .expect("triangle has a third vertex")
}
