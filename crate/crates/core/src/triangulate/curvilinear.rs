use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::delaunay::{Edge, Mesh};
use crate::bspline::BSplineCurve;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, signed_distance_outside};

/// Hull violations up to this distance (px) still count as contained.
pub const CONTAINMENT_TOLERANCE: f64 = 1e-6;

/// Weights for the control points of every edge spline.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeWeights {
    /// Interior control points get this weight; endpoints keep weight 1.
    Interior(f64),
    /// One weight per control point, endpoints included.
    PerPoint(Vec<f64>),
}

impl Default for EdgeWeights {
    fn default() -> Self {
        EdgeWeights::Interior(1.0)
    }
}

impl EdgeWeights {
    fn for_edge(&self, n_ctrl: usize) -> Result<Vec<f64>> {
        match self {
            EdgeWeights::Interior(w) => {
                let mut v = vec![*w; n_ctrl];
                v[0] = 1.0;
                v[n_ctrl - 1] = 1.0;
                Ok(v)
            }
            EdgeWeights::PerPoint(v) if v.len() == 1 => {
                EdgeWeights::Interior(v[0]).for_edge(n_ctrl)
            }
            EdgeWeights::PerPoint(v) if v.len() == n_ctrl => Ok(v.clone()),
            EdgeWeights::PerPoint(v) => Err(Error::WeightLength {
                got: v.len(),
                expected: n_ctrl,
            }),
        }
    }
}

/// A mesh whose edges are replaced by B-spline curves.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvedMesh {
    base: Mesh,
    splines: BTreeMap<Edge, BSplineCurve>,
}

impl CurvedMesh {
    pub fn base(&self) -> &Mesh {
        &self.base
    }

    pub fn splines(&self) -> &BTreeMap<Edge, BSplineCurve> {
        &self.splines
    }

    pub fn spline(&self, edge: Edge) -> Option<&BSplineCurve> {
        self.splines.get(&(edge.0.min(edge.1), edge.0.max(edge.1)))
    }
}

pub fn edge_key((a, b): Edge) -> String {
    format!("{a}-{b}")
}

pub fn parse_edge_key(key: &str) -> Option<Edge> {
    let (a, b) = key.split_once('-')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

impl Serialize for CurvedMesh {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Splines<'a>(&'a BTreeMap<Edge, BSplineCurve>);
        impl Serialize for Splines<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (e, c) in self.0 {
                    map.serialize_entry(&edge_key(*e), c)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("vertices", self.base.vertices())?;
        map.serialize_entry("triangles", self.base.triangles())?;
        map.serialize_entry("splines", &Splines(&self.splines))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for CurvedMesh {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Json {
            vertices: Vec<super::Keypoint>,
            triangles: Vec<[usize; 3]>,
            splines: BTreeMap<String, BSplineCurve>,
        }
        let json = Json::deserialize(d)?;
        let base = Mesh::new(json.vertices, json.triangles).map_err(D::Error::custom)?;
        let mut splines = BTreeMap::new();
        for (k, c) in json.splines {
            let e =
                parse_edge_key(&k).ok_or_else(|| D::Error::custom(format!("bad edge key {k}")))?;
            splines.insert(e, c);
        }
        if !splines.keys().copied().eq(base.edges()) {
            return Err(D::Error::custom("splines do not match the mesh edges"));
        }
        Ok(CurvedMesh { base, splines })
    }
}

/// Replaces every edge `A-B` by a clamped spline over `[A, opposite vertices
/// by id, B]`: three control points on the hull, four on shared edges.
///
/// `degree: None` uses the highest degree the control count allows (2 or 3);
/// an explicit degree is capped the same way and must be at least 2.
pub fn curvilinear(
    mesh: &Mesh,
    weights: &EdgeWeights,
    degree: Option<usize>,
) -> Result<CurvedMesh> {
    if let Some(d) = degree {
        if d < 2 {
            return Err(Error::InvalidConfig(format!(
                "spline degree must be at least 2, got {d}"
            )));
        }
    }
    let mut splines = BTreeMap::new();
    for edge in mesh.edges() {
        let mut ids = vec![edge.0];
        ids.extend(mesh.opposite_vertices(edge));
        ids.push(edge.1);
        let n = ids.len();
        let control = ids.iter().map(|&i| mesh.point(i)).collect();
        let p = degree.map_or(n - 1, |d| d.min(n - 1));
        splines.insert(
            edge,
            BSplineCurve::clamped(control, weights.for_edge(n)?, p)?,
        );
    }
    Ok(CurvedMesh {
        base: mesh.clone(),
        splines,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment {
    pub contained: bool,
    /// Largest signed distance (px) of a sample outside the vertex hull;
    /// negative when every sample is strictly inside.
    pub worst: f64,
}

/// Samples every edge spline and measures how far it strays outside the
/// convex hull of the mesh vertices.
pub fn hull_containment(cm: &CurvedMesh, samples_per_edge: usize) -> Result<Containment> {
    if samples_per_edge < 2 {
        return Err(Error::InvalidConfig(
            "samples_per_edge must be at least 2".into(),
        ));
    }
    let hull = convex_hull(&cm.base.points());
    let mut worst = f64::NEG_INFINITY;
    for curve in cm.splines.values() {
        for p in curve.sample(samples_per_edge)? {
            worst = worst.max(signed_distance_outside(&hull, p));
        }
    }
    Ok(Containment {
        contained: worst <= CONTAINMENT_TOLERANCE,
        worst: worst + 0.0,
    })
}
