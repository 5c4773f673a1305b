//! Nearness of cell sets: strong, graded strong, Lodato and descriptive.
//!
//! By default two regions meet when their closures share a cell, so two
//! triangles with a common vertex intersect in that vertex.

mod features;
mod theorems;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use features::{
    linf_distance, DimensionFeatures, FeatureExtractor, FeatureVector, GeometricFeatures,
    ImageFeatures,
};
pub use theorems::{SuiteReport, TheoremReport, TheoremSuite};

use crate::complex::Cell;
use crate::error::{Error, Result};
use crate::geometry::{polygon_distance, Point};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntersectionMode {
    /// Shared faces of any dimension.
    #[default]
    Complex,
    /// Identical member cells only.
    Cells,
    /// Overlap of the drawn cells in the plane.
    Geometric,
}

/// A set of cells, optionally drawn in the plane by vertex positions
/// indexed by vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    cells: BTreeSet<Cell>,
    positions: Option<Vec<Point>>,
}

impl Region {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Self {
        Self {
            cells: cells.into_iter().collect(),
            positions: None,
        }
    }

    pub fn with_positions(mut self, positions: &[Point]) -> Self {
        self.positions = Some(positions.to_vec());
        self
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn closure(&self) -> BTreeSet<Cell> {
        self.cells.iter().flat_map(Cell::closure).collect()
    }

    /// Each cell as a point, segment or triangle.
    pub fn polygons(&self) -> Result<Vec<Vec<Point>>> {
        let pos = self
            .positions
            .as_ref()
            .ok_or_else(|| Error::Configuration("region has no geometric realization".into()))?;
        self.cells
            .iter()
            .map(|c| {
                c.vertices()
                    .iter()
                    .map(|v| {
                        pos.get(v.0 as usize).copied().ok_or_else(|| {
                            Error::Configuration(format!("vertex {v} has no position"))
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

fn non_empty(a: &Region, b: &Region) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        Err(Error::EmptyRegion)
    } else {
        Ok(())
    }
}

/// The intersection complex of the closures.
pub fn intersection(a: &Region, b: &Region) -> BTreeSet<Cell> {
    let cb = b.closure();
    a.closure().into_iter().filter(|c| cb.contains(c)).collect()
}

fn min_distance(a: &Region, b: &Region) -> Result<f64> {
    let pa = a.polygons()?;
    let pb = b.polygons()?;
    let mut best = f64::INFINITY;
    for p in &pa {
        for q in &pb {
            best = best.min(polygon_distance(p, q));
            if best == 0.0 {
                return Ok(0.0);
            }
        }
    }
    Ok(best)
}

/// `A ∩ B ≠ ∅` under the chosen reading of intersection.
pub fn strong_near(a: &Region, b: &Region, mode: IntersectionMode) -> Result<bool> {
    non_empty(a, b)?;
    Ok(match mode {
        IntersectionMode::Complex => !intersection(a, b).is_empty(),
        IntersectionMode::Cells => a.cells.iter().any(|c| b.cells.contains(c)),
        IntersectionMode::Geometric => min_distance(a, b)? == 0.0,
    })
}

/// Highest dimension of a cell shared by the closures, if any.
pub fn graded_strong_near(a: &Region, b: &Region) -> Result<Option<usize>> {
    non_empty(a, b)?;
    Ok(intersection(a, b).iter().map(Cell::dim).max())
}

/// Shared faces, or (given `eps_geo`) drawn cells at most `eps_geo` apart.
pub fn lodato_near(a: &Region, b: &Region, eps_geo: Option<f64>) -> Result<bool> {
    if strong_near(a, b, IntersectionMode::Complex)? {
        return Ok(true);
    }
    match eps_geo {
        Some(eps) => Ok(min_distance(a, b)? <= eps),
        None => Ok(false),
    }
}

/// Some face of `A` and some face of `B` have feature vectors within
/// `eps_phi` in the max norm.
pub fn descriptive_near(
    a: &Region,
    b: &Region,
    phi: &dyn FeatureExtractor,
    eps_phi: f64,
) -> Result<bool> {
    non_empty(a, b)?;
    let describe = |r: &Region| -> Result<Vec<FeatureVector>> {
        r.closure().iter().map(|c| phi.features(c)).collect()
    };
    let fa = describe(a)?;
    let fb = describe(b)?;
    Ok(fa
        .iter()
        .any(|x| fb.iter().any(|y| linf_distance(x, y) <= eps_phi)))
}

/// A shape given by triangles: the boundary is every edge on exactly one
/// triangle together with its end points; the interior is the rest of the
/// closure.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeRegion {
    interior: BTreeSet<Cell>,
    boundary: BTreeSet<Cell>,
}

impl ShapeRegion {
    pub fn from_triangles<'a>(triangles: impl IntoIterator<Item = &'a Cell>) -> Result<Self> {
        let tris: BTreeSet<Cell> = triangles
            .into_iter()
            .filter(|c| c.dim() == 2)
            .map(Cell::untagged)
            .collect();
        if tris.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let mut edge_count: BTreeMap<Cell, usize> = BTreeMap::new();
        for t in &tris {
            for j in 0..3 {
                *edge_count.entry(t.face(j)?).or_default() += 1;
            }
        }
        let mut boundary = BTreeSet::new();
        for (e, n) in edge_count {
            if n == 1 {
                boundary.extend(e.closure());
            }
        }
        let interior: BTreeSet<Cell> = tris
            .iter()
            .flat_map(Cell::closure)
            .filter(|c| !boundary.contains(c))
            .collect();
        if interior.is_empty() {
            return Err(Error::EmptyInterior);
        }
        Ok(Self { interior, boundary })
    }

    pub fn interior(&self) -> &BTreeSet<Cell> {
        &self.interior
    }

    pub fn boundary(&self) -> &BTreeSet<Cell> {
        &self.boundary
    }

    pub fn closure(&self) -> BTreeSet<Cell> {
        self.interior.union(&self.boundary).cloned().collect()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = &Cell> {
        self.interior.iter().filter(|c| c.dim() == 0)
    }
}
