//! Grayscale rasters and their Sobel gradient.

use std::path::Path;

use crate::error::{Error, Result};

/// Row-major intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidConfig("image is empty".into()));
        }
        if data.len() != width * height {
            return Err(Error::InvalidConfig(format!(
                "{} samples for a {width}x{height} image",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f32) -> Result<Self> {
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, data)
    }

    /// Reads any PNG or PNM file; colour is reduced to luma.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::ImageRead {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let img = image::load_from_memory(&bytes).map_err(|e| Error::ImageRead {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let luma = img.to_luma32f();
        let (w, h) = luma.dimensions();
        Self::new(w as usize, h as usize, luma.into_raw())
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes: Vec<u8> = self
            .data
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect();
        image::GrayImage::from_raw(self.width as u32, self.height as u32, bytes)
            .expect("buffer matches dimensions")
            .save(path)
            .map_err(|e| Error::ImageRead {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    /// Border pixels are replicated.
    pub fn get_clamped(&self, x: i64, y: i64) -> f32 {
        let x = x.clamp(0, self.width as i64 - 1) as usize;
        let y = y.clamp(0, self.height as i64 - 1) as usize;
        self.get(x, y)
    }

    pub fn sobel(&self) -> Gradient {
        let (w, h) = (self.width, self.height);
        let mut gx = vec![0.0; w * h];
        let mut gy = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                let p = |dx: i64, dy: i64| self.get_clamped(x as i64 + dx, y as i64 + dy) as f64;
                let sx =
                    (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
                let sy =
                    (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
                gx[y * w + x] = sx;
                gy[y * w + x] = sy;
            }
        }
        Gradient {
            width: w,
            height: h,
            gx,
            gy,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Gradient {
    width: usize,
    height: usize,
    gx: Vec<f64>,
    gy: Vec<f64>,
}

impl Gradient {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.gx[i], self.gy[i])
    }

    pub fn magnitude(&self, x: usize, y: usize) -> f64 {
        let (gx, gy) = self.at(x, y);
        gx.hypot(gy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sobel_of_a_ramp() {
        let img = GrayImage::from_fn(5, 5, |x, _| x as f32 * 0.1).unwrap();
        let g = img.sobel();
        let (gx, gy) = g.at(2, 2);
        assert!((gx - 0.8).abs() < 1e-6);
        assert_eq!(gy, 0.0);
        // clamped border halves the central difference
        assert!((g.at(0, 2).0 - 0.4).abs() < 1e-6);
    }

    #[test]
    fn constant_image_has_no_gradient() {
        let g = GrayImage::from_fn(4, 3, |_, _| 0.5).unwrap().sobel();
        assert!((0..3).all(|y| (0..4).all(|x| g.magnitude(x, y) == 0.0)));
    }

    #[test]
    fn rejects_bad_buffers() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.png");
        let img = GrayImage::from_fn(6, 4, |x, y| if x > y { 1.0 } else { 0.0 }).unwrap();
        img.save_png(&path).unwrap();
        assert_eq!(GrayImage::load(&path).unwrap(), img);
    }
}
