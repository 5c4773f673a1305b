use std::path::PathBuf;

use thiserror::Error;

use crate::complex::{Cell, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("face index {index} out of range for a {dim}-cell")]
    FaceIndex { index: usize, dim: usize },

    #[error("a 0-cell has no faces")]
    VertexHasNoFaces,

    #[error("cells must have between 1 and 3 vertices, got {0}")]
    CellSize(usize),

    #[error("cell {0} is not part of the complex")]
    CellNotFound(Cell),

    #[error("vertex {0} is not part of the complex")]
    VertexNotFound(VertexId),

    #[error("cell {0} must have strictly increasing vertices")]
    NotIncreasing(Cell),

    #[error("face map d_{index} is not assigned for {cell}")]
    MissingFaceMap { cell: Cell, index: usize },

    #[error("invalid delta set: {0}")]
    InvalidDeltaSet(String),

    #[error("cannot combine a {left:?} complex with a {right:?} complex")]
    KindMismatch {
        left: crate::complex::ComplexKind,
        right: crate::complex::ComplexKind,
    },

    #[error("identifying vertices collapses {0}, which a simplicial complex cannot hold")]
    KindViolation(Cell),

    #[error("complex has no 2-cells")]
    NoTriangles,

    #[error("no spoke chain reaches level {0}")]
    NoChain(usize),

    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("basis index N_{{{index},{degree}}} out of range for {knots} knots")]
    BasisIndex {
        index: usize,
        degree: usize,
        knots: usize,
    },

    #[error("parameter {0} lies outside the curve domain")]
    Domain(f64),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("found {found} distinct keypoints, at least 3 are required")]
    InsufficientKeypoints { found: usize },

    #[error("degenerate point set: {0}")]
    Degenerate(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("weight vector of length {got} does not fit an edge with {expected} control points")]
    WeightLength { got: usize, expected: usize },

    #[error("proximity queries need non-empty regions")]
    EmptyRegion,

    #[error("shape has an empty interior")]
    EmptyInterior,

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("feature extraction failed: {0}")]
    FeatureExtraction(String),

    #[error("inconsistent input: {0}")]
    Consistency(String),

    #[error("invalid pipeline configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot read image {path}: {message}")]
    ImageRead { path: PathBuf, message: String },

    #[error("{0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command-line tool.
    ///
    /// | code | meaning |
    /// |------|---------|
    /// | 2 | file could not be read or written |
    /// | 3 | too few keypoints or a degenerate point set |
    /// | 4 | invalid configuration |
    /// | 5 | a theorem or oracle check failed |
    /// | 1 | anything else |
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::ImageRead { .. } => 2,
            Error::InsufficientKeypoints { .. } | Error::Degenerate(_) => 3,
            Error::InvalidConfig(_) | Error::Configuration(_) => 4,
            Error::CheckFailed(_) => 5,
            _ => 1,
        }
    }
}
