use crate::complex::Cell;
use crate::error::{Error, Result};
use crate::geometry::{point_in_convex, triangle_area, Point};
use crate::raster::{Gradient, GrayImage};

/// A fixed-length description of a cell.
pub type FeatureVector = Vec<f64>;

pub trait FeatureExtractor {
    fn schema(&self) -> &[&'static str];
    fn features(&self, cell: &Cell) -> Result<FeatureVector>;
}

pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn positions_of(positions: &[Point], cell: &Cell) -> Result<Vec<Point>> {
    cell.vertices()
        .iter()
        .map(|v| {
            positions
                .get(v.0 as usize)
                .copied()
                .ok_or_else(|| Error::FeatureExtraction(format!("vertex {v} has no position")))
        })
        .collect()
}

fn centroid(pts: &[Point]) -> Point {
    let n = pts.len() as f64;
    let s = pts.iter().fold(Point::default(), |acc, &p| acc + p);
    s * (1.0 / n)
}

fn area(pts: &[Point]) -> f64 {
    if pts.len() == 3 {
        triangle_area(pts[0], pts[1], pts[2])
    } else {
        0.0
    }
}

/// Intensity, gradient, area and centroid of a cell, each scaled into
/// `[0, 1]` by the image size or value range.
pub struct ImageFeatures<'a> {
    image: &'a GrayImage,
    gradient: Gradient,
    max_gradient: f64,
    positions: &'a [Point],
}

impl<'a> ImageFeatures<'a> {
    pub const SCHEMA: [&'static str; 5] = [
        "mean_intensity",
        "mean_gradient",
        "area",
        "centroid_x",
        "centroid_y",
    ];

    pub fn new(image: &'a GrayImage, positions: &'a [Point]) -> Self {
        let gradient = image.sobel();
        let max_gradient = (0..image.height())
            .flat_map(|y| (0..image.width()).map(move |x| (x, y)))
            .map(|(x, y)| gradient.magnitude(x, y))
            .fold(0.0, f64::max);
        Self {
            image,
            gradient,
            max_gradient,
            positions,
        }
    }

    fn pixel(&self, p: Point) -> (usize, usize) {
        (p.x.round() as usize, p.y.round() as usize)
    }

    fn pixels(&self, cell: &Cell, pts: &[Point]) -> Result<Vec<(usize, usize)>> {
        let (w, h) = (self.image.width() as f64, self.image.height() as f64);
        if pts
            .iter()
            .any(|p| !(0.0..=w - 1.0).contains(&p.x) || !(0.0..=h - 1.0).contains(&p.y))
        {
            return Err(Error::FeatureExtraction(format!(
                "cell {cell} leaves the image"
            )));
        }
        let mut out = match pts.len() {
            1 => vec![self.pixel(pts[0])],
            2 => {
                let steps = pts[0].distance(&pts[1]).ceil().max(1.0) as usize;
                (0..=steps)
                    .map(|i| self.pixel(pts[0] + (pts[1] - pts[0]) * (i as f64 / steps as f64)))
                    .collect()
            }
            _ => {
                let x0 = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min).ceil() as usize;
                let x1 = pts.iter().map(|p| p.x).fold(0.0, f64::max).floor() as usize;
                let y0 = pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min).ceil() as usize;
                let y1 = pts.iter().map(|p| p.y).fold(0.0, f64::max).floor() as usize;
                let inside: Vec<_> = (y0..=y1)
                    .flat_map(|y| (x0..=x1).map(move |x| (x, y)))
                    .filter(|&(x, y)| point_in_convex(pts, Point::new(x as f64, y as f64)))
                    .collect();
                if inside.is_empty() {
                    pts.iter().map(|&p| self.pixel(p)).collect()
                } else {
                    inside
                }
            }
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl FeatureExtractor for ImageFeatures<'_> {
    fn schema(&self) -> &[&'static str] {
        &Self::SCHEMA
    }

    fn features(&self, cell: &Cell) -> Result<FeatureVector> {
        let pts = positions_of(self.positions, cell)?;
        let pixels = self.pixels(cell, &pts)?;
        let n = pixels.len() as f64;
        let intensity = pixels
            .iter()
            .map(|&(x, y)| self.image.get(x, y) as f64)
            .sum::<f64>()
            / n;
        let grad = pixels
            .iter()
            .map(|&(x, y)| self.gradient.magnitude(x, y))
            .sum::<f64>()
            / n;
        let (w, h) = (self.image.width() as f64, self.image.height() as f64);
        let c = centroid(&pts);
        Ok(vec![
            intensity,
            if self.max_gradient > 0.0 {
                grad / self.max_gradient
            } else {
                0.0
            },
            area(&pts) / (w * h),
            c.x / w,
            c.y / h,
        ])
    }
}

/// Area and centroid of a cell, scaled by the extent of the drawing.
pub struct GeometricFeatures<'a> {
    positions: &'a [Point],
    width: f64,
    height: f64,
}

impl<'a> GeometricFeatures<'a> {
    pub const SCHEMA: [&'static str; 3] = ["area", "centroid_x", "centroid_y"];

    pub fn new(positions: &'a [Point], width: f64, height: f64) -> Self {
        Self {
            positions,
            width,
            height,
        }
    }
}

impl FeatureExtractor for GeometricFeatures<'_> {
    fn schema(&self) -> &[&'static str] {
        &Self::SCHEMA
    }

    fn features(&self, cell: &Cell) -> Result<FeatureVector> {
        let pts = positions_of(self.positions, cell)?;
        let c = centroid(&pts);
        Ok(vec![
            area(&pts) / (self.width * self.height),
            c.x / self.width,
            c.y / self.height,
        ])
    }
}

/// Dimension only; usable on complexes without a drawing.
pub struct DimensionFeatures;

impl FeatureExtractor for DimensionFeatures {
    fn schema(&self) -> &[&'static str] {
        &["dimension"]
    }

    fn features(&self, cell: &Cell) -> Result<FeatureVector> {
        Ok(vec![cell.dim() as f64])
    }
}
