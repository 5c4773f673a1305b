//! Keypoint detection, Delaunay meshing and the per-edge B-spline mesh.

mod curvilinear;
mod delaunay;
mod keypoints;
pub mod oracle;

pub use curvilinear::{
    curvilinear, edge_key, hull_containment, parse_edge_key, Containment, CurvedMesh, EdgeWeights,
    CONTAINMENT_TOLERANCE,
};
pub use delaunay::{dedup_points, delaunay, Edge, Mesh};
pub use keypoints::{detect_keypoints, detect_keypoints_with, Keypoint, KeypointConfig};
