use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use delta_shape::pipeline::disk_image;
use delta_shape_ffi::*;

fn last_error() -> String {
    let p = ds_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn square_mesh() -> *mut DsMesh {
    let xy = [0.0, 0.0, 4.0, 0.0, 4.0, 4.0, 0.0, 4.0, 1.0, 2.0];
    let mut mesh = ptr::null_mut();
    let st = unsafe { ds_mesh_from_points(xy.as_ptr(), 5, &mut mesh) };
    assert_eq!(st, DsStatus::Ok);
    assert!(!mesh.is_null());
    mesh
}

#[test]
fn mesh_round_trip() {
    let mesh = square_mesh();
    unsafe {
        let (mut nv, mut nt) = (0usize, 0usize);
        assert_eq!(ds_mesh_vertex_count(mesh, &mut nv), DsStatus::Ok);
        assert_eq!(ds_mesh_triangle_count(mesh, &mut nt), DsStatus::Ok);
        assert_eq!((nv, nt), (5, 4));

        let mut xy = vec![0.0; 2 * nv];
        assert_eq!(
            ds_mesh_vertices(mesh, xy.as_mut_ptr(), xy.len()),
            DsStatus::Ok
        );
        assert_eq!(&xy[..4], &[0.0, 0.0, 4.0, 0.0]);

        let mut idx = vec![0u32; 3 * nt];
        assert_eq!(
            ds_mesh_triangles(mesh, idx.as_mut_ptr(), 3 * nt - 1),
            DsStatus::BufferTooSmall
        );
        assert!(last_error().contains("12"));
        assert_eq!(
            ds_mesh_triangles(mesh, idx.as_mut_ptr(), idx.len()),
            DsStatus::Ok
        );
        assert!(idx.chunks(3).all(|t| t[0] < t[1] && t[1] < t[2]));
        assert!(idx.iter().all(|&i| (i as usize) < nv));

        let (mut nucleus, mut size) = (u32::MAX, 0usize);
        assert_eq!(
            ds_mesh_max_nerve(mesh, &mut nucleus, &mut size),
            DsStatus::Ok
        );
        assert_eq!(size, 4);
        let p = [xy[2 * nucleus as usize], xy[2 * nucleus as usize + 1]];
        assert_eq!(p, [1.0, 2.0]);

        let mut levels = vec![0i32; nt];
        let mut depth = 0usize;
        assert_eq!(
            ds_mesh_spoke_levels(mesh, nucleus, levels.as_mut_ptr(), nt, &mut depth),
            DsStatus::Ok
        );
        assert_eq!(depth, 1);
        assert!(levels.iter().all(|&l| l == 1));

        let mut json = ptr::null_mut();
        assert_eq!(ds_mesh_to_json(mesh, &mut json), DsStatus::Ok);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        ds_string_free(json);
        assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
        assert_eq!(v["triangles"].as_array().unwrap().len(), 4);

        ds_mesh_free(mesh);
    }
}

#[test]
fn curved_mesh() {
    let mesh = square_mesh();
    unsafe {
        let mut cm = ptr::null_mut();
        assert_eq!(ds_curved_mesh_new(mesh, 2.0, 0, &mut cm), DsStatus::Ok);
        let (mut inside, mut worst) = (false, f64::NAN);
        assert_eq!(
            ds_curved_mesh_hull_containment(cm, 32, &mut inside, &mut worst),
            DsStatus::Ok
        );
        assert!(inside);
        assert!(worst <= 1e-6);

        // vertices keep input order: 0 is (0,0), 1 is (4,0)
        let mut xy = vec![0.0; 2 * 8];
        assert_eq!(
            ds_curved_mesh_sample_edge(cm, 0, 1, 8, xy.as_mut_ptr()),
            DsStatus::Ok
        );
        assert!(xy[0].abs() < 1e-9 && xy[1].abs() < 1e-9);
        assert!((xy[14] - 4.0).abs() < 1e-9 && xy[15].abs() < 1e-9);
        assert_eq!(
            ds_curved_mesh_sample_edge(cm, 0, 9, 8, xy.as_mut_ptr()),
            DsStatus::InvalidArgument
        );

        let mut json = ptr::null_mut();
        assert_eq!(ds_curved_mesh_to_json(cm, &mut json), DsStatus::Ok);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        ds_string_free(json);
        assert!(v["splines"].get("0-1").is_some());

        let mut bad = ptr::null_mut();
        assert_eq!(
            ds_curved_mesh_new(mesh, 0.0, 0, &mut bad),
            DsStatus::InvalidConfig
        );
        assert!(bad.is_null());
        assert_eq!(
            ds_curved_mesh_new(mesh, 1.0, 1, &mut bad),
            DsStatus::InvalidConfig
        );

        ds_curved_mesh_free(cm);
        ds_mesh_free(mesh);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut mesh = ptr::null_mut();
        let line = [0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
        assert_eq!(
            ds_mesh_from_points(line.as_ptr(), 3, &mut mesh),
            DsStatus::Degenerate
        );
        assert!(mesh.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(
            ds_mesh_from_points(ptr::null(), 3, &mut mesh),
            DsStatus::NullPointer
        );
        assert_eq!(
            ds_mesh_from_points(line.as_ptr(), 3, ptr::null_mut()),
            DsStatus::NullPointer
        );
        let mut n = 0usize;
        assert_eq!(
            ds_mesh_vertex_count(ptr::null(), &mut n),
            DsStatus::NullPointer
        );
        assert_eq!(last_error(), "mesh is null");

        let missing = CString::new("/nonexistent/image.png").unwrap();
        assert_eq!(
            ds_mesh_from_image(missing.as_ptr(), ptr::null(), &mut mesh),
            DsStatus::Io
        );
        assert!(last_error().contains("/nonexistent/image.png"));

        // freeing null is a no-op
        ds_mesh_free(ptr::null_mut());
        ds_curved_mesh_free(ptr::null_mut());
        ds_string_free(ptr::null_mut());
    }
}

#[test]
fn pipeline_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let img_path = dir.path().join("disk.png");
    disk_image(128, 64.0, 64.0, 40.0)
        .save_png(&img_path)
        .unwrap();
    let out = dir.path().join("out");
    let img_c = CString::new(img_path.to_str().unwrap()).unwrap();
    let out_c = CString::new(out.to_str().unwrap()).unwrap();
    unsafe {
        let cfg = ds_pipeline_config_default();
        assert_eq!(cfg.max_keypoints, 100);
        assert_eq!(cfg.spline_degree, 0);
        assert_eq!(
            ds_pipeline_run(img_c.as_ptr(), out_c.as_ptr(), &cfg),
            DsStatus::Ok
        );
        for f in ["mesh.json", "decomposition.json", "overlay.svg"] {
            assert!(out.join(f).is_file(), "{f}");
        }

        let mut mesh = ptr::null_mut();
        assert_eq!(
            ds_mesh_from_image(img_c.as_ptr(), ptr::null(), &mut mesh),
            DsStatus::Ok
        );
        let mut n = 0usize;
        ds_mesh_vertex_count(mesh, &mut n);
        assert!(n >= 3);
        ds_mesh_free(mesh);

        let bad = DsPipelineConfig {
            max_keypoints: 2,
            ..cfg
        };
        assert_eq!(
            ds_pipeline_run(img_c.as_ptr(), out_c.as_ptr(), &bad),
            DsStatus::InvalidConfig
        );
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/delta_shape.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "ds_last_error",
        "ds_string_free",
        "ds_pipeline_config_default",
        "ds_mesh_from_points",
        "ds_mesh_from_image",
        "ds_mesh_free",
        "ds_mesh_vertices",
        "ds_mesh_triangles",
        "ds_mesh_max_nerve",
        "ds_mesh_spoke_levels",
        "ds_mesh_to_json",
        "ds_curved_mesh_new",
        "ds_curved_mesh_hull_containment",
        "ds_curved_mesh_sample_edge",
        "ds_curved_mesh_to_json",
        "ds_pipeline_run",
        "DS_STATUS_OK = 0",
        "typedef struct DsMesh DsMesh",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // compile-check the header when a C compiler is available
    if let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    {
        assert!(status.success(), "header does not compile");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = deps.join("libdelta_shape_ffi.a");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    if !lib.is_file() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C program failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "triangles=4 nucleus=4 nerve=4 contained=1 splines=1 degenerate=1"
    );
}
