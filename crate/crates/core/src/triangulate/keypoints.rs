use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::raster::GrayImage;

/// A pixel position with its gradient magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub score: f64,
}

impl Keypoint {
    pub const fn new(x: f64, y: f64, score: f64) -> Self {
        Self { x, y, score }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

impl From<[f64; 3]> for Keypoint {
    fn from([x, y, score]: [f64; 3]) -> Self {
        Self { x, y, score }
    }
}

impl From<Keypoint> for [f64; 3] {
    fn from(k: Keypoint) -> Self {
        [k.x, k.y, k.score]
    }
}

impl From<Point> for Keypoint {
    fn from(p: Point) -> Self {
        Self::new(p.x, p.y, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeypointConfig {
    pub max_count: usize,
    /// Accepted keypoints suppress weaker candidates within this distance.
    pub nms_radius: f64,
}

impl Default for KeypointConfig {
    fn default() -> Self {
        Self {
            max_count: 100,
            nms_radius: 8.0,
        }
    }
}

const MIN_MAGNITUDE: f64 = 1e-6;

pub fn detect_keypoints(img: &GrayImage, max_count: usize) -> Result<Vec<Keypoint>> {
    detect_keypoints_with(
        img,
        &KeypointConfig {
            max_count,
            ..KeypointConfig::default()
        },
    )
}

/// Local maxima of the Sobel magnitude, strongest first.
///
/// An edge of a step produces two equally strong ridges, one on each side.
/// Only the ridge on the bright side is kept: a pixel survives when the pixel
/// one step along its gradient is not brighter.
pub fn detect_keypoints_with(img: &GrayImage, config: &KeypointConfig) -> Result<Vec<Keypoint>> {
    if config.max_count < 3 {
        return Err(Error::InvalidConfig(format!(
            "max_count must be at least 3, got {}",
            config.max_count
        )));
    }
    if !config.nms_radius.is_finite() || config.nms_radius < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "bad nms radius {}",
            config.nms_radius
        )));
    }
    let (w, h) = (img.width(), img.height());
    let grad = img.sobel();
    let mut candidates = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let m = grad.magnitude(x, y);
            if m <= MIN_MAGNITUDE {
                continue;
            }
            let is_max = (-1i64..=1).all(|dy| {
                (-1i64..=1).all(|dx| {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    (dx == 0 && dy == 0)
                        || nx < 0
                        || ny < 0
                        || nx >= w as i64
                        || ny >= h as i64
                        || grad.magnitude(nx as usize, ny as usize) <= m
                })
            });
            if !is_max {
                continue;
            }
            let (gx, gy) = grad.at(x, y);
            let sx = (gx / m).round() as i64;
            let sy = (gy / m).round() as i64;
            if img.get(x, y) < img.get_clamped(x as i64 + sx, y as i64 + sy) {
                continue;
            }
            candidates.push((m, x, y));
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.2.cmp(&b.2)).then(a.1.cmp(&b.1)));

    let r2 = config.nms_radius * config.nms_radius;
    let mut kept: Vec<Keypoint> = Vec::new();
    for (m, x, y) in candidates {
        if kept.len() == config.max_count {
            break;
        }
        let (px, py) = (x as f64, y as f64);
        if kept
            .iter()
            .all(|k| (k.x - px).powi(2) + (k.y - py).powi(2) > r2)
        {
            kept.push(Keypoint::new(px, py, m));
        }
    }
    if kept.len() < 3 {
        return Err(Error::InsufficientKeypoints { found: kept.len() });
    }
    Ok(kept)
}
