use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use delta_shape::pipeline::{self, PipelineConfig};
use delta_shape::proximity::{ImageFeatures, SuiteReport, TheoremSuite};
use delta_shape::raster::GrayImage;
use delta_shape::render::{Highlight, Mode};
use delta_shape::samples::{grid_fixture, random_mesh, random_points};
use delta_shape::triangulate::{delaunay, oracle};
use delta_shape::{Error, Result};

/// Shape approximation of image objects with triangulations and spoke
/// decompositions.
///
/// Exit status: 0 ok, 1 other error, 2 I/O, 3 too few keypoints or
/// degenerate input, 4 invalid configuration, 5 failed checks.
#[derive(Parser)]
#[command(name = "delta-shape", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mesh an image and write mesh.json, decomposition.json and overlay.svg.
    Run(RunArgs),
    /// Check the nearness theorems on an image mesh or random meshes.
    Verify(VerifyArgs),
    /// Compare the Delaunay mesher with the brute-force reference.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct RunArgs {
    image: PathBuf,
    #[arg(long, default_value_t = 100)]
    max_keypoints: usize,
    #[arg(long, default_value_t = 8.0)]
    nms_radius: f64,
    /// Spline degree (at least 2); per-edge 2 or 3 when omitted.
    #[arg(long)]
    degree: Option<usize>,
    /// Weight of interior control points.
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    #[arg(long, default_value_t = 32)]
    samples_per_edge: usize,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "spokes")]
    highlight: Highlight,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Image to mesh and check.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    image: Option<PathBuf>,
    /// Check this many random 20-vertex meshes instead.
    #[arg(long)]
    random: Option<usize>,
    /// Nuclei drawn per mesh.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, default_value_t = 12)]
    max_points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(args: RunArgs) -> Result<()> {
    let config = PipelineConfig {
        max_keypoints: args.max_keypoints,
        nms_radius: args.nms_radius,
        spline_degree: args.degree,
        interior_weight: args.weight,
        samples_per_edge: args.samples_per_edge,
        mode: args.mode,
        highlight: args.highlight,
    };
    let a = pipeline::run_pipeline(&args.image, &config, &args.out)?;
    let summary = json!({
        "vertices": a.mesh.vertices().len(),
        "triangles": a.mesh.triangles().len(),
        "nucleus": a.decomposition.nucleus(),
        "levels": a.decomposition.levels().iter().map(|l| l.len()).collect::<Vec<_>>(),
        "containment": a.containment,
        "out": args.out,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<()> {
    let suite = TheoremSuite {
        trials: args.trials,
        seed: args.seed,
        ..TheoremSuite::default()
    };
    let mut report = suite.run(&grid_fixture())?;
    if let Some(path) = &args.image {
        let img = GrayImage::load(path)?;
        let a = pipeline::run(&img, &PipelineConfig::default())?;
        let positions = a.mesh.points();
        let phi = ImageFeatures::new(&img, &positions);
        let suite = TheoremSuite {
            eps_geo: Some(1.0),
            ..suite.clone()
        };
        report.merge(suite.run_with(&a.mesh.to_complex(), Some(&positions), &phi)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for i in 0..args.random.unwrap_or(0) {
        let mesh = random_mesh(&mut rng, 20)?;
        let suite = TheoremSuite {
            seed: args.seed.wrapping_add(i as u64 + 1),
            ..suite.clone()
        };
        report.merge(suite.run(&mesh.to_complex())?);
    }
    print_report(&report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!(
            "{} theorem checks failed",
            report.failures()
        )))
    }
}

fn print_report(report: &SuiteReport) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}

fn oracle_check(args: OracleArgs) -> Result<()> {
    if args.max_points < 3 {
        return Err(Error::InvalidConfig("max_points must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut mismatches = Vec::new();
    for case in 0..args.cases {
        let n = rng.gen_range(3..=args.max_points);
        let pts = random_points(&mut rng, n, 100.0);
        let Ok(mesh) = delaunay(&pts) else { continue };
        let got: std::collections::BTreeSet<[usize; 3]> =
            mesh.triangles().iter().copied().collect();
        if got != oracle::delaunay_triangles(&mesh.points()) {
            mismatches.push(case);
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({"cases": args.cases, "mismatches": mismatches}))?
    );
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!(
            "{} oracle mismatches",
            mismatches.len()
        )))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Verify(a) => verify(a),
        Command::Oracle(a) => oracle_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
