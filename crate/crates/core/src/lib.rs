//! Shape approximation of image objects.
//!
//! Keypoints on intensity edges are meshed by a Delaunay triangulation, mesh
//! edges are bent into B-splines, and the triangles are organised around a
//! nucleus vertex into nerve and spoke levels. Proximity relations over those
//! cell sets come with executable checks of their theorems.

pub mod bspline;
pub mod complex;
pub mod error;
pub mod geometry;
pub mod nerve;
pub mod pipeline;
pub mod proximity;
pub mod raster;
pub mod render;
pub mod samples;
pub mod triangulate;

pub use complex::{Cell, Complex, ComplexKind, VertexId};
pub use error::{Error, Result};
