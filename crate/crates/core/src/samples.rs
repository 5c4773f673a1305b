//! Reference complexes and random inputs used by the CLI checks and tests.

use std::collections::BTreeSet;

use rand::Rng;

use crate::complex::{Cell, Complex, ComplexKind};
use crate::error::Result;
use crate::geometry::Point;
use crate::triangulate::{delaunay, Keypoint, Mesh};

/// Eight triangles on a 3x3 grid of vertices whose diagonals avoid the
/// centre: four triangles meet at the centre and one sits in each corner.
///
/// The centre is vertex 0; the others are numbered row by row:
///
/// ```text
/// 1 2 3
/// 4 0 5
/// 6 7 8
/// ```
pub fn grid_fixture() -> Complex {
    let cells = grid_fixture_red().into_iter().chain(grid_fixture_green());
    Complex::build(cells, ComplexKind::Ordered).expect("fixture is well formed")
}

/// The four triangles around the centre.
pub fn grid_fixture_red() -> BTreeSet<Cell> {
    [
        Cell::triangle(0, 2, 4),
        Cell::triangle(0, 2, 5),
        Cell::triangle(0, 4, 7),
        Cell::triangle(0, 5, 7),
    ]
    .into()
}

/// The four corner triangles.
pub fn grid_fixture_green() -> BTreeSet<Cell> {
    [
        Cell::triangle(1, 2, 4),
        Cell::triangle(2, 3, 5),
        Cell::triangle(4, 6, 7),
        Cell::triangle(5, 7, 8),
    ]
    .into()
}

/// Pixel positions of the grid fixture, 100 px apart.
pub fn grid_fixture_positions() -> Vec<Point> {
    [
        (1.0, 1.0),
        (0.0, 0.0),
        (1.0, 0.0),
        (2.0, 0.0),
        (0.0, 1.0),
        (2.0, 1.0),
        (0.0, 2.0),
        (1.0, 2.0),
        (2.0, 2.0),
    ]
    .iter()
    .map(|&(x, y)| Point::new(50.0 + 100.0 * x, 50.0 + 100.0 * y))
    .collect()
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, extent: f64) -> Vec<Keypoint> {
    (0..n)
        .map(|_| Keypoint::new(rng.gen_range(0.0..extent), rng.gen_range(0.0..extent), 1.0))
        .collect()
}

/// Delaunay mesh of `n` uniform random points in a 256 px square.
pub fn random_mesh<R: Rng>(rng: &mut R, n: usize) -> Result<Mesh> {
    delaunay(&random_points(rng, n, 256.0))
}
