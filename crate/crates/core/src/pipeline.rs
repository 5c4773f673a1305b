//! Image → keypoints → mesh → spline mesh → nucleus → spoke levels.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nerve::{max_nerve_cluster, spoke_decomposition, SpokeDecomposition};
use crate::raster::GrayImage;
use crate::render::{render_svg, Highlight, Mode, RenderOptions};
use crate::triangulate::{
    curvilinear, delaunay, detect_keypoints_with, hull_containment, Containment, CurvedMesh,
    EdgeWeights, KeypointConfig, Mesh,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub max_keypoints: usize,
    pub nms_radius: f64,
    /// `None` picks 2 for hull edges and 3 for shared edges.
    pub spline_degree: Option<usize>,
    pub interior_weight: f64,
    pub samples_per_edge: usize,
    pub mode: Mode,
    pub highlight: Highlight,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            max_keypoints: 100,
            nms_radius: 8.0,
            spline_degree: None,
            interior_weight: 1.0,
            samples_per_edge: 32,
            mode: Mode::Both,
            highlight: Highlight::Spokes,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.max_keypoints < 3 {
            return bad(format!(
                "max_keypoints must be at least 3, got {}",
                self.max_keypoints
            ));
        }
        if !self.nms_radius.is_finite() || self.nms_radius < 0.0 {
            return bad(format!(
                "nms_radius must be a non-negative number, got {}",
                self.nms_radius
            ));
        }
        if let Some(d) = self.spline_degree {
            if d < 2 {
                return bad(format!("spline degree must be at least 2, got {d}"));
            }
        }
        if !self.interior_weight.is_finite() || self.interior_weight <= 0.0 {
            return bad(format!(
                "weight must be positive, got {}",
                self.interior_weight
            ));
        }
        if self.samples_per_edge < 2 {
            return bad(format!(
                "samples_per_edge must be at least 2, got {}",
                self.samples_per_edge
            ));
        }
        Ok(())
    }

    fn render_options(&self) -> RenderOptions {
        RenderOptions {
            mode: self.mode,
            highlight: self.highlight,
            samples_per_edge: self.samples_per_edge,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub mesh: Mesh,
    pub curved: CurvedMesh,
    pub decomposition: SpokeDecomposition,
    pub containment: Containment,
    pub svg: String,
}

impl Artifacts {
    /// Vertices, triangles and edge splines.
    pub fn mesh_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.curved)? + "\n")
    }

    /// The mesh complex with the nucleus and its spoke levels added.
    pub fn decomposition_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self.mesh.to_complex())?;
        let dec = serde_json::to_value(&self.decomposition)?;
        let (Some(obj), serde_json::Value::Object(extra)) = (value.as_object_mut(), dec) else {
            unreachable!("both serialize as objects");
        };
        obj.extend(extra);
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("mesh.json"), self.mesh_json()?)?;
        fs::write(dir.join("decomposition.json"), self.decomposition_json()?)?;
        fs::write(dir.join("overlay.svg"), &self.svg)?;
        Ok(())
    }
}

pub fn run(img: &GrayImage, config: &PipelineConfig) -> Result<Artifacts> {
    config.validate()?;
    let keypoints = detect_keypoints_with(
        img,
        &KeypointConfig {
            max_count: config.max_keypoints,
            nms_radius: config.nms_radius,
        },
    )?;
    log::info!("{} keypoints", keypoints.len());
    let mesh = delaunay(&keypoints)?;
    log::info!(
        "mesh: {} vertices, {} triangles",
        mesh.vertices().len(),
        mesh.triangles().len()
    );
    let curved = curvilinear(
        &mesh,
        &EdgeWeights::Interior(config.interior_weight),
        config.spline_degree,
    )?;
    let containment = hull_containment(&curved, config.samples_per_edge)?;
    if !containment.contained {
        log::warn!("spline samples leave the hull by {}", containment.worst);
    }
    let complex = mesh.to_complex();
    let (nucleus, _) = max_nerve_cluster(&complex)?;
    let decomposition = spoke_decomposition(&complex, nucleus)?;
    log::info!("nucleus {nucleus}, {} spoke levels", decomposition.depth());
    let svg = render_svg(
        &mesh,
        Some(&curved),
        Some(&decomposition),
        &config.render_options(),
        Some(img),
    )?;
    Ok(Artifacts {
        mesh,
        curved,
        decomposition,
        containment,
        svg,
    })
}

/// Runs on an image file and writes `mesh.json`, `decomposition.json` and
/// `overlay.svg` into `out_dir`.
pub fn run_pipeline(img_path: &Path, config: &PipelineConfig, out_dir: &Path) -> Result<Artifacts> {
    config.validate()?;
    let img = GrayImage::load(img_path)?;
    let artifacts = run(&img, config)?;
    artifacts.write_to(out_dir)?;
    Ok(artifacts)
}

/// A white disk on black, the reference blob for end-to-end checks.
pub fn disk_image(size: usize, cx: f64, cy: f64, radius: f64) -> GrayImage {
    GrayImage::from_fn(size, size, |x, y| {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        if dx * dx + dy * dy <= radius * radius {
            1.0
        } else {
            0.0
        }
    })
    .expect("size is positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = PipelineConfig::default();
        c.validate().unwrap();
        assert_eq!(c.max_keypoints, 100);
        assert_eq!(c.samples_per_edge, 32);
        assert_eq!(c.spline_degree, None);
    }

    #[test]
    fn invalid_settings() {
        for c in [
            PipelineConfig {
                max_keypoints: 2,
                ..Default::default()
            },
            PipelineConfig {
                nms_radius: -1.0,
                ..Default::default()
            },
            PipelineConfig {
                spline_degree: Some(1),
                ..Default::default()
            },
            PipelineConfig {
                interior_weight: 0.0,
                ..Default::default()
            },
            PipelineConfig {
                samples_per_edge: 1,
                ..Default::default()
            },
        ] {
            assert_eq!(c.validate().unwrap_err().exit_code(), 4);
        }
    }

    #[test]
    fn disk_nucleus_is_inside() {
        let img = disk_image(128, 64.0, 64.0, 40.0);
        let a = run(&img, &PipelineConfig::default()).unwrap();
        let p = a.mesh.point(a.decomposition.nucleus().0 as usize);
        assert!((p.x - 64.0).hypot(p.y - 64.0) < 40.0);
        assert!(a.containment.contained);
    }

    #[test]
    fn constant_image_exits_with_3() {
        let img = GrayImage::from_fn(32, 32, |_, _| 0.5).unwrap();
        assert_eq!(
            run(&img, &PipelineConfig::default())
                .unwrap_err()
                .exit_code(),
            3
        );
    }

    #[test]
    fn decomposition_json_extends_the_complex() {
        let img = disk_image(96, 48.0, 48.0, 30.0);
        let a = run(&img, &PipelineConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&a.decomposition_json().unwrap()).unwrap();
        for key in ["kind", "X0", "X1", "X2", "nucleus", "levels"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let m: serde_json::Value = serde_json::from_str(&a.mesh_json().unwrap()).unwrap();
        for key in ["vertices", "triangles", "splines"] {
            assert!(m.get(key).is_some(), "{key}");
        }
    }
}
