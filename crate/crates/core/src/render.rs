//! SVG 1.1 overlays of meshes, spline edges and spoke levels.
//!
//! Coordinates are written with three decimals.

use std::fmt::Write as _;
use std::io::Cursor;

use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::complex::Cell;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::nerve::SpokeDecomposition;
use crate::raster::GrayImage;
use crate::triangulate::{CurvedMesh, Mesh};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[value(name = "rect")]
    #[serde(rename = "rect")]
    Rectilinear,
    #[value(name = "curve")]
    #[serde(rename = "curve")]
    Curvilinear,
    #[default]
    Both,
}

impl Mode {
    fn straight(self) -> bool {
        matches!(self, Mode::Rectilinear | Mode::Both)
    }

    fn curved(self) -> bool {
        matches!(self, Mode::Curvilinear | Mode::Both)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Highlight {
    Nerve,
    #[default]
    Spokes,
    Chain,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub mode: Mode,
    pub highlight: Highlight,
    pub samples_per_edge: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Both,
            highlight: Highlight::Spokes,
            samples_per_edge: 32,
        }
    }
}

pub const LEVEL_COLORS: [&str; 6] = [
    "#d62728", "#2ca02c", "#1f77b4", "#9467bd", "#ff7f0e", "#8c564b",
];
pub const NUCLEUS_COLOR: &str = "#ffd700";

fn level_color(k: usize) -> &'static str {
    LEVEL_COLORS[(k - 1) % LEVEL_COLORS.len()]
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn xy(p: Point) -> String {
    format!("{},{}", fmt(p.x), fmt(p.y))
}

fn triangle_index(cell: &Cell, n: usize) -> Result<[usize; 3]> {
    let v = cell.vertices();
    if cell.dim() != 2 || v.iter().any(|v| v.0 as usize >= n) {
        return Err(Error::Consistency(format!("{cell} is not a mesh triangle")));
    }
    Ok([v[0].0 as usize, v[1].0 as usize, v[2].0 as usize])
}

/// Cells to fill, grouped by level, after checking them against the mesh.
fn highlighted(
    mesh: &Mesh,
    dec: &SpokeDecomposition,
    highlight: Highlight,
) -> Result<Vec<(usize, Vec<[usize; 3]>)>> {
    let n = mesh.vertices().len();
    if dec.nucleus().0 as usize >= n {
        return Err(Error::Consistency(format!(
            "nucleus {} is not a mesh vertex",
            dec.nucleus()
        )));
    }
    let mut sorted: Vec<[usize; 3]> = mesh.triangles().to_vec();
    sorted.sort_unstable();
    for cell in dec.levels().iter().skip(1).flatten() {
        let t = triangle_index(cell, n)?;
        if sorted.binary_search(&t).is_err() {
            return Err(Error::Consistency(format!("{cell} is not a mesh triangle")));
        }
    }
    let levels: Vec<(usize, Vec<Cell>)> = match highlight {
        Highlight::None => Vec::new(),
        Highlight::Nerve => vec![(1, dec.spoke_complex(1).iter().cloned().collect())],
        Highlight::Spokes => dec
            .levels()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, l)| (k, l.iter().cloned().collect()))
            .collect(),
        Highlight::Chain => dec
            .spoke_chain(dec.depth())?
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| (k, vec![c]))
            .collect(),
    };
    levels
        .into_iter()
        .filter(|(_, cells)| !cells.is_empty())
        .map(|(k, cells)| {
            Ok((
                k,
                cells
                    .iter()
                    .map(|c| triangle_index(c, n))
                    .collect::<Result<_>>()?,
            ))
        })
        .collect()
}

fn png_data_uri(img: &GrayImage) -> Result<String> {
    let bytes: Vec<u8> = (0..img.height())
        .flat_map(|y| (0..img.width()).map(move |x| (x, y)))
        .map(|(x, y)| (img.get(x, y).clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, bytes)
        .expect("buffer matches dimensions");
    let mut png = Vec::new();
    buf.write_to(&mut Cursor::new(&mut png), image::ImageFormat::Png)
        .map_err(|e| Error::Consistency(format!("cannot encode raster: {e}")))?;
    Ok(format!(
        "data:image/png;base64,{}",
        base64::engine::general_purpose::STANDARD.encode(png)
    ))
}

/// Renders the mesh with optional spline edges, spoke highlighting and
/// background raster.
///
/// Layers, bottom to top: `raster`, `spokes`, `rectilinear`, `curvilinear`,
/// `nucleus`, `legend`.
pub fn render_svg(
    mesh: &Mesh,
    curved: Option<&CurvedMesh>,
    dec: Option<&SpokeDecomposition>,
    opts: &RenderOptions,
    image: Option<&GrayImage>,
) -> Result<String> {
    let (w, h) = match image {
        Some(img) => (img.width() as f64, img.height() as f64),
        None => {
            let pts = mesh.points();
            let mx = pts.iter().map(|p| p.x).fold(0.0, f64::max);
            let my = pts.iter().map(|p| p.y).fold(0.0, f64::max);
            ((mx + 1.0).ceil(), (my + 1.0).ceil())
        }
    };
    let fills = match dec {
        Some(d) => highlighted(mesh, d, opts.highlight)?,
        None => Vec::new(),
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    if let Some(img) = image {
        let _ = writeln!(
            s,
            r#"<g id="raster"><image x="0" y="0" width="{w}" height="{h}" xlink:href="{}"/></g>"#,
            png_data_uri(img)?
        );
    }
    if !fills.is_empty() {
        let _ = writeln!(s, r#"<g id="spokes" fill-opacity="0.55" stroke="none">"#);
        for (k, tris) in &fills {
            for t in tris {
                let [a, b, c] = t.map(|i| xy(mesh.point(i)));
                let _ = writeln!(
                    s,
                    r#"<polygon class="level-{k}" fill="{}" points="{a} {b} {c}"/>"#,
                    level_color(*k)
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }
    if opts.mode.straight() {
        let _ = writeln!(
            s,
            r##"<g id="rectilinear" stroke="#000000" stroke-width="1" fill="none">"##
        );
        for (a, b) in mesh.edges() {
            let (p, q) = (mesh.point(a), mesh.point(b));
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt(p.x),
                fmt(p.y),
                fmt(q.x),
                fmt(q.y)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    if let (true, Some(cm)) = (opts.mode.curved(), curved) {
        let _ = writeln!(
            s,
            r##"<g id="curvilinear" stroke="#0050ff" stroke-width="1" fill="none">"##
        );
        for ((a, b), curve) in cm.splines() {
            let pts = curve.sample(opts.samples_per_edge)?;
            let d: Vec<String> = pts.iter().map(|&p| xy(p)).collect();
            let _ = writeln!(s, r#"<path data-edge="{a}-{b}" d="M {}"/>"#, d.join(" L "));
        }
        let _ = writeln!(s, "</g>");
    }
    if let Some(d) = dec {
        if opts.highlight != Highlight::None {
            let p = mesh.point(d.nucleus().0 as usize);
            let _ = writeln!(
                s,
                r##"<g id="nucleus"><circle cx="{}" cy="{}" r="4" fill="{NUCLEUS_COLOR}" stroke="#000000"/></g>"##,
                fmt(p.x),
                fmt(p.y)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<g id="legend" font-family="sans-serif" font-size="10">"#
    );
    let mut y = 14;
    let mut entry = |s: &mut String, color: &str, label: &str| {
        let _ = writeln!(
            s,
            r#"<rect x="6" y="{}" width="10" height="10" fill="{color}"/>"#,
            y - 9
        );
        let _ = writeln!(s, r#"<text x="20" y="{y}">{label}</text>"#);
        y += 14;
    };
    if dec.is_some() && opts.highlight != Highlight::None {
        entry(&mut s, NUCLEUS_COLOR, "nucleus");
    }
    for (k, _) in &fills {
        let label = if *k == 1 {
            "level 1 (nerve)".to_string()
        } else {
            format!("level {k}")
        };
        entry(&mut s, level_color(*k), &label);
    }
    if opts.mode.straight() {
        entry(&mut s, "#000000", "rectilinear edges");
    }
    if opts.mode.curved() && curved.is_some() {
        entry(&mut s, "#0050ff", "spline edges");
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Complex, VertexId};
    use crate::nerve::spoke_decomposition;
    use crate::samples::{grid_fixture, grid_fixture_positions};
    use crate::triangulate::{curvilinear, EdgeWeights, Keypoint};

    fn fixture_mesh() -> Mesh {
        let k = grid_fixture();
        let verts: Vec<Keypoint> = grid_fixture_positions()
            .into_iter()
            .map(Keypoint::from)
            .collect();
        let tris = k
            .triangles()
            .iter()
            .map(|c| {
                let v = c.vertices();
                [v[0].0 as usize, v[1].0 as usize, v[2].0 as usize]
            })
            .collect();
        Mesh::new(verts, tris).unwrap()
    }

    #[test]
    fn mesh_only_without_decomposition() {
        let svg = render_svg(&fixture_mesh(), None, None, &RenderOptions::default(), None).unwrap();
        assert!(svg.contains(r#"<g id="rectilinear""#));
        assert!(!svg.contains("<polygon"));
        assert!(!svg.contains(r#"id="nucleus""#));
    }

    #[test]
    fn fixture_colours_four_red_and_four_green() {
        let mesh = fixture_mesh();
        let dec = spoke_decomposition(&mesh.to_complex(), VertexId(0)).unwrap();
        let svg = render_svg(&mesh, None, Some(&dec), &RenderOptions::default(), None).unwrap();
        assert_eq!(
            svg.matches(&format!(r#"class="level-1" fill="{}""#, LEVEL_COLORS[0]))
                .count(),
            4
        );
        assert_eq!(
            svg.matches(&format!(r#"class="level-2" fill="{}""#, LEVEL_COLORS[1]))
                .count(),
            4
        );
        assert!(svg.contains(r#"<circle cx="150.000" cy="150.000""#));
        let nerve_only = RenderOptions {
            highlight: Highlight::Nerve,
            ..Default::default()
        };
        let svg = render_svg(&mesh, None, Some(&dec), &nerve_only, None).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 4);
        let chain = RenderOptions {
            highlight: Highlight::Chain,
            ..Default::default()
        };
        let svg = render_svg(&mesh, None, Some(&dec), &chain, None).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 2);
    }

    #[test]
    fn modes_select_layers() {
        let mesh = fixture_mesh();
        let cm = curvilinear(&mesh, &EdgeWeights::default(), None).unwrap();
        let svg = |mode| {
            render_svg(
                &mesh,
                Some(&cm),
                None,
                &RenderOptions {
                    mode,
                    ..Default::default()
                },
                None,
            )
            .unwrap()
        };
        let both = svg(Mode::Both);
        assert!(both.contains(r#"id="rectilinear""#) && both.contains(r#"id="curvilinear""#));
        assert!(!svg(Mode::Rectilinear).contains(r#"id="curvilinear""#));
        assert!(!svg(Mode::Curvilinear).contains(r#"id="rectilinear""#));
    }

    #[test]
    fn paths_follow_the_samples() {
        let mesh = fixture_mesh();
        let cm = curvilinear(&mesh, &EdgeWeights::Interior(3.0), None).unwrap();
        let opts = RenderOptions {
            samples_per_edge: 9,
            ..Default::default()
        };
        let svg = render_svg(&mesh, Some(&cm), None, &opts, None).unwrap();
        for line in svg.lines().filter(|l| l.starts_with("<path")) {
            let key = line.split('"').nth(1).unwrap();
            let edge = crate::triangulate::parse_edge_key(key).unwrap();
            let d = line
                .split("d=\"M ")
                .nth(1)
                .unwrap()
                .trim_end_matches("\"/>");
            let parsed: Vec<Point> = d
                .split(" L ")
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    Point::new(x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            let samples = cm.spline(edge).unwrap().sample(9).unwrap();
            assert_eq!(parsed.len(), samples.len());
            for (a, b) in parsed.iter().zip(&samples) {
                assert!((a.x - b.x).abs() <= 5e-4 && (a.y - b.y).abs() <= 5e-4);
            }
        }
    }

    #[test]
    fn foreign_cells_are_rejected() {
        let mesh = fixture_mesh();
        let other = Complex::build(
            [Cell::triangle(0, 1, 3)],
            crate::complex::ComplexKind::Ordered,
        )
        .unwrap();
        let dec = spoke_decomposition(&other, VertexId(0)).unwrap();
        assert!(matches!(
            render_svg(&mesh, None, Some(&dec), &RenderOptions::default(), None),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn raster_is_embedded() {
        let img = GrayImage::from_fn(300, 300, |x, _| x as f32 / 300.0).unwrap();
        let svg = render_svg(
            &fixture_mesh(),
            None,
            None,
            &RenderOptions::default(),
            Some(&img),
        )
        .unwrap();
        assert!(svg.contains("data:image/png;base64,"));
        assert!(svg.contains(r#"width="300""#));
    }
}
