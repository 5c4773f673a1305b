//! C interface to `delta-shape`.
//!
//! Every fallible function returns a [`DsStatus`]; on failure the message is
//! available from [`ds_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function. Strings returned by the
//! library are released with [`ds_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use delta_shape::complex::VertexId;
use delta_shape::nerve::{max_nerve_cluster, spoke_decomposition};
use delta_shape::pipeline::{self, PipelineConfig};
use delta_shape::render::{Highlight, Mode};
use delta_shape::triangulate::{
    curvilinear, delaunay, hull_containment, CurvedMesh, EdgeWeights, Keypoint, Mesh,
};
use delta_shape::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    InsufficientKeypoints = 4,
    Degenerate = 5,
    InvalidConfig = 6,
    Consistency = 7,
    BufferTooSmall = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsMode {
    Rectilinear = 0,
    Curvilinear = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsHighlight {
    Nerve = 0,
    Spokes = 1,
    Chain = 2,
    None = 3,
}

/// Pipeline settings. `spline_degree` 0 picks the degree per edge.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsPipelineConfig {
    pub max_keypoints: usize,
    pub nms_radius: f64,
    pub spline_degree: u32,
    pub interior_weight: f64,
    pub samples_per_edge: usize,
    pub mode: DsMode,
    pub highlight: DsHighlight,
}

impl From<&DsPipelineConfig> for PipelineConfig {
    fn from(c: &DsPipelineConfig) -> Self {
        PipelineConfig {
            max_keypoints: c.max_keypoints,
            nms_radius: c.nms_radius,
            spline_degree: (c.spline_degree != 0).then_some(c.spline_degree as usize),
            interior_weight: c.interior_weight,
            samples_per_edge: c.samples_per_edge,
            mode: match c.mode {
                DsMode::Rectilinear => Mode::Rectilinear,
                DsMode::Curvilinear => Mode::Curvilinear,
                DsMode::Both => Mode::Both,
            },
            highlight: match c.highlight {
                DsHighlight::Nerve => Highlight::Nerve,
                DsHighlight::Spokes => Highlight::Spokes,
                DsHighlight::Chain => Highlight::Chain,
                DsHighlight::None => Highlight::None,
            },
        }
    }
}

/// A triangulated point set.
pub struct DsMesh(Mesh);

/// A mesh with one B-spline per edge.
pub struct DsCurvedMesh(CurvedMesh);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> DsStatus {
    match e {
        Error::Io(_) | Error::ImageRead { .. } => DsStatus::Io,
        Error::InsufficientKeypoints { .. } => DsStatus::InsufficientKeypoints,
        Error::Degenerate(_) => DsStatus::Degenerate,
        Error::InvalidConfig(_) | Error::Configuration(_) | Error::WeightLength { .. } => {
            DsStatus::InvalidConfig
        }
        Error::Consistency(_) => DsStatus::Consistency,
        Error::InvalidMesh(_)
        | Error::VertexNotFound(_)
        | Error::Domain(_)
        | Error::InvalidCurve(_)
        | Error::InvalidKnots(_) => DsStatus::InvalidArgument,
        _ => DsStatus::Internal,
    }
}

fn fail(status: DsStatus, msg: impl Into<String>) -> DsStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), DsStatus>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(DsStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DsStatus>;
}

impl<T> OrStatus<T> for delta_shape::Result<T> {
    fn or_status(self) -> Result<T, DsStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, DsStatus> {
    p.as_ref()
        .ok_or_else(|| fail(DsStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, DsStatus> {
    p.as_mut()
        .ok_or_else(|| fail(DsStatus::NullPointer, format!("{name} is null")))
}

unsafe fn path_arg<'a>(p: *const c_char, name: &str) -> Result<&'a Path, DsStatus> {
    if p.is_null() {
        return Err(fail(DsStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(DsStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn json_string(s: String, out_ptr: &mut *mut c_char) {
    *out_ptr = CString::new(s).expect("JSON has no nul bytes").into_raw();
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn ds_pipeline_config_default() -> DsPipelineConfig {
    let d = PipelineConfig::default();
    DsPipelineConfig {
        max_keypoints: d.max_keypoints,
        nms_radius: d.nms_radius,
        spline_degree: 0,
        interior_weight: d.interior_weight,
        samples_per_edge: d.samples_per_edge,
        mode: DsMode::Both,
        highlight: DsHighlight::Spokes,
    }
}

/// Delaunay mesh of `n` points given as interleaved `x, y` pairs.
///
/// # Safety
/// `xy` must point to `2 * n` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_from_points(
    xy: *const f64,
    n: usize,
    out_mesh: *mut *mut DsMesh,
) -> DsStatus {
    guard(|| {
        let slot = out(out_mesh, "out_mesh")?;
        *slot = ptr::null_mut();
        if xy.is_null() {
            return Err(fail(DsStatus::NullPointer, "xy is null"));
        }
        let coords = std::slice::from_raw_parts(xy, 2 * n);
        let pts: Vec<Keypoint> = coords
            .chunks(2)
            .map(|c| Keypoint::new(c[0], c[1], 0.0))
            .collect();
        let mesh = delaunay(&pts).or_status()?;
        *slot = Box::into_raw(Box::new(DsMesh(mesh)));
        Ok(())
    })
}

/// Detects keypoints in an image file and meshes them. `config` may be null
/// for the defaults.
///
/// # Safety
/// `path` must be a NUL-terminated string; `config` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_from_image(
    path: *const c_char,
    config: *const DsPipelineConfig,
    out_mesh: *mut *mut DsMesh,
) -> DsStatus {
    guard(|| {
        let slot = out(out_mesh, "out_mesh")?;
        *slot = ptr::null_mut();
        let path = path_arg(path, "path")?;
        let cfg = config
            .as_ref()
            .map(PipelineConfig::from)
            .unwrap_or_default();
        let img = delta_shape::raster::GrayImage::load(path).or_status()?;
        let a = pipeline::run(&img, &cfg).or_status()?;
        *slot = Box::into_raw(Box::new(DsMesh(a.mesh)));
        Ok(())
    })
}

/// # Safety
/// `mesh` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_free(mesh: *mut DsMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_vertex_count(mesh: *const DsMesh, count: *mut usize) -> DsStatus {
    guard(|| {
        *out(count, "count")? = deref(mesh, "mesh")?.0.vertices().len();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_triangle_count(
    mesh: *const DsMesh,
    count: *mut usize,
) -> DsStatus {
    guard(|| {
        *out(count, "count")? = deref(mesh, "mesh")?.0.triangles().len();
        Ok(())
    })
}

/// Copies vertex positions as `x, y` pairs into `xy`, which holds `cap`
/// doubles.
///
/// # Safety
/// `xy` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_vertices(
    mesh: *const DsMesh,
    xy: *mut f64,
    cap: usize,
) -> DsStatus {
    guard(|| {
        let m = &deref(mesh, "mesh")?.0;
        let need = 2 * m.vertices().len();
        if xy.is_null() {
            return Err(fail(DsStatus::NullPointer, "xy is null"));
        }
        if cap < need {
            return Err(fail(
                DsStatus::BufferTooSmall,
                format!("need {need} doubles"),
            ));
        }
        let buf = std::slice::from_raw_parts_mut(xy, need);
        for (dst, v) in buf.chunks_mut(2).zip(m.vertices()) {
            dst[0] = v.x;
            dst[1] = v.y;
        }
        Ok(())
    })
}

/// Copies triangles as increasing vertex index triples into `idx`, which
/// holds `cap` integers.
///
/// # Safety
/// `idx` must point to `cap` writable integers.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_triangles(
    mesh: *const DsMesh,
    idx: *mut u32,
    cap: usize,
) -> DsStatus {
    guard(|| {
        let m = &deref(mesh, "mesh")?.0;
        let need = 3 * m.triangles().len();
        if idx.is_null() {
            return Err(fail(DsStatus::NullPointer, "idx is null"));
        }
        if cap < need {
            return Err(fail(
                DsStatus::BufferTooSmall,
                format!("need {need} integers"),
            ));
        }
        let buf = std::slice::from_raw_parts_mut(idx, need);
        for (dst, t) in buf.chunks_mut(3).zip(m.triangles()) {
            for (d, &v) in dst.iter_mut().zip(t) {
                *d = v as u32;
            }
        }
        Ok(())
    })
}

/// The vertex with the most incident triangles (lowest index on ties) and
/// how many there are.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_max_nerve(
    mesh: *const DsMesh,
    nucleus: *mut u32,
    nerve_size: *mut usize,
) -> DsStatus {
    guard(|| {
        let m = &deref(mesh, "mesh")?.0;
        let (p, nerve) = max_nerve_cluster(&m.to_complex()).or_status()?;
        *out(nucleus, "nucleus")? = p.0;
        *out(nerve_size, "nerve_size")? = nerve.len();
        Ok(())
    })
}

/// Writes the spoke level of every triangle around `nucleus` into `levels`
/// (in triangle order; -1 for triangles not connected to the nucleus) and
/// the deepest level into `depth`.
///
/// # Safety
/// `levels` must point to `cap` writable integers; `depth` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_spoke_levels(
    mesh: *const DsMesh,
    nucleus: u32,
    levels: *mut i32,
    cap: usize,
    depth: *mut usize,
) -> DsStatus {
    guard(|| {
        let m = &deref(mesh, "mesh")?.0;
        let depth = out(depth, "depth")?;
        if levels.is_null() {
            return Err(fail(DsStatus::NullPointer, "levels is null"));
        }
        let n = m.triangles().len();
        if cap < n {
            return Err(fail(DsStatus::BufferTooSmall, format!("need {n} integers")));
        }
        let dec = spoke_decomposition(&m.to_complex(), VertexId(nucleus)).or_status()?;
        let buf = std::slice::from_raw_parts_mut(levels, n);
        for (dst, t) in buf.iter_mut().zip(m.triangles()) {
            let cell = delta_shape::Cell::triangle(t[0] as u32, t[1] as u32, t[2] as u32);
            *dst = dec.level_of(&cell).map_or(-1, |l| l as i32);
        }
        *depth = dec.depth();
        Ok(())
    })
}

/// Mesh as JSON `{"vertices": [[x, y, score]...], "triangles": [[i, j, k]...]}`.
///
/// # Safety
/// Pointers must be valid; free the result with [`ds_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ds_mesh_to_json(mesh: *const DsMesh, json: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let m = &deref(mesh, "mesh")?.0;
        let s = serde_json_string(m)?;
        json_string(s, out(json, "json")?);
        Ok(())
    })
}

fn serde_json_string<T: serde::Serialize>(v: &T) -> Result<String, DsStatus> {
    serde_json::to_string(v).map_err(|e| fail(DsStatus::Internal, e.to_string()))
}

/// Bends every mesh edge into a B-spline. Interior control points get
/// `interior_weight`; `degree` 0 picks 2 or 3 per edge.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_curved_mesh_new(
    mesh: *const DsMesh,
    interior_weight: f64,
    degree: u32,
    out_curved: *mut *mut DsCurvedMesh,
) -> DsStatus {
    guard(|| {
        let slot = out(out_curved, "out_curved")?;
        *slot = ptr::null_mut();
        let m = &deref(mesh, "mesh")?.0;
        if !interior_weight.is_finite() || interior_weight <= 0.0 {
            return Err(fail(
                DsStatus::InvalidConfig,
                "interior_weight must be positive",
            ));
        }
        let degree = (degree != 0).then_some(degree as usize);
        let cm = curvilinear(m, &EdgeWeights::Interior(interior_weight), degree).or_status()?;
        *slot = Box::into_raw(Box::new(DsCurvedMesh(cm)));
        Ok(())
    })
}

/// # Safety
/// `cm` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_curved_mesh_free(cm: *mut DsCurvedMesh) {
    if !cm.is_null() {
        drop(Box::from_raw(cm));
    }
}

/// Samples every spline and reports whether all samples stay within the
/// convex hull of the mesh vertices, and the largest distance outside.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_curved_mesh_hull_containment(
    cm: *const DsCurvedMesh,
    samples_per_edge: usize,
    contained: *mut bool,
    worst: *mut f64,
) -> DsStatus {
    guard(|| {
        let c = hull_containment(&deref(cm, "cm")?.0, samples_per_edge).or_status()?;
        *out(contained, "contained")? = c.contained;
        *out(worst, "worst")? = c.worst;
        Ok(())
    })
}

/// Writes `n` samples of the spline on edge `a-b` as `x, y` pairs.
///
/// # Safety
/// `xy` must point to `2 * n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_curved_mesh_sample_edge(
    cm: *const DsCurvedMesh,
    a: u32,
    b: u32,
    n: usize,
    xy: *mut f64,
) -> DsStatus {
    guard(|| {
        let cm = &deref(cm, "cm")?.0;
        if xy.is_null() {
            return Err(fail(DsStatus::NullPointer, "xy is null"));
        }
        let curve = cm
            .spline((a as usize, b as usize))
            .ok_or_else(|| fail(DsStatus::InvalidArgument, format!("{a}-{b} is not an edge")))?;
        let pts = curve.sample(n).or_status()?;
        let buf = std::slice::from_raw_parts_mut(xy, 2 * n);
        for (dst, p) in buf.chunks_mut(2).zip(pts) {
            dst[0] = p.x;
            dst[1] = p.y;
        }
        Ok(())
    })
}

/// Curved mesh as JSON with a `"splines"` object keyed by `"i-j"`.
///
/// # Safety
/// Pointers must be valid; free the result with [`ds_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ds_curved_mesh_to_json(
    cm: *const DsCurvedMesh,
    json: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let s = serde_json_string(&deref(cm, "cm")?.0)?;
        json_string(s, out(json, "json")?);
        Ok(())
    })
}

/// Runs the whole pipeline on an image file and writes `mesh.json`,
/// `decomposition.json` and `overlay.svg` into `out_dir`. `config` may be
/// null for the defaults.
///
/// # Safety
/// Strings must be NUL-terminated; `config` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ds_pipeline_run(
    image: *const c_char,
    out_dir: *const c_char,
    config: *const DsPipelineConfig,
) -> DsStatus {
    guard(|| {
        let image = path_arg(image, "image")?;
        let out_dir = path_arg(out_dir, "out_dir")?;
        let cfg = config
            .as_ref()
            .map(PipelineConfig::from)
            .unwrap_or_default();
        pipeline::run_pipeline(image, &cfg, out_dir).or_status()?;
        Ok(())
    })
}
