//! `tractrix-lab`: analyses of a front track given as a JSON curve spec.
//!
//! Every subcommand writes a JSON summary (stdout unless `--output`), plus
//! optional CSV tables and SVG figures. Files are replaced atomically.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_INVALID`] for bad flags or input,
//! [`EXIT_NUMERICAL`] when a numerical check fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tractrix_core::dynamics::DEFAULT_STEPS;
use tractrix_core::export::{self, write_atomic};
use tractrix_core::menzin::{menzin_verify_with, ScanOptions};
use tractrix_core::noneuclid::{develop_track, star_for_initial_angle, unit_bicycle_angles};
use tractrix_core::planimeter::measure_traced;
use tractrix_core::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "TRACTRIX_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "tractrix-lab", version, about = "Bicycle tracks, monodromy, hatchet planimeter and Menzin checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rear track for one initial steering angle, with SVG and CSV.
    Trace(TraceArgs),
    /// Monodromy of one traversal as a Möbius map.
    Monodromy(MonodromyArgs),
    /// Hatchet planimeter reading, or an error scan over rod lengths.
    Planimeter(PlanimeterArgs),
    /// Critical wheelbase and Menzin bound (or the spherical/hyperbolic analogue with `--ell`).
    Menzin(MenzinArgs),
    /// Development of the track's curvature into the hyperbolic plane.
    Develop(DevelopArgs),
    /// Area identity on a configuration-space loop.
    Loopcheck(LoopcheckArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Curve spec (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// RK4 steps per traversal.
    #[arg(long, default_value_t = DEFAULT_STEPS, value_parser = steps)]
    pub steps: usize,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true, value_parser = positive)]
    pub ell: f64,
    /// Initial steering angle (radians).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite)]
    pub alpha0: f64,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Per-sample table `t,x,y,alpha,cos_alpha`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonodromyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true, value_parser = positive)]
    pub ell: f64,
}

#[derive(Debug, Args)]
pub struct PlanimeterArgs {
    #[command(flatten)]
    pub common: Common,
    /// Rod length for a single reading.
    #[arg(long, allow_hyphen_values = true, value_parser = positive, required_unless_present = "scan")]
    pub ell: Option<f64>,
    /// Comma-separated rod lengths: run an error scan instead of one reading.
    #[arg(long, value_delimiter = ',', value_parser = positive, conflicts_with = "ell")]
    pub scan: Option<Vec<f64>>,
    /// Track parameter of the base point for a single reading.
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    pub base: f64,
    /// Base points per rod length in a scan.
    #[arg(long, default_value_t = 8, value_parser = count)]
    pub bases: usize,
    /// Draw scan base points uniformly at random from this seed instead of evenly spaced.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `inward-normal`, `through-centroid`, `centroid` or `fixed:<angle>`.
    #[arg(long, default_value = "inward-normal", value_parser = start_convention)]
    pub start: StartConvention,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Scan table; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MenzinArgs {
    #[command(flatten)]
    pub common: Common,
    /// Wheelbase for the spherical or hyperbolic check (required there, rejected in the plane).
    #[arg(long, allow_hyphen_values = true, value_parser = positive)]
    pub ell: Option<f64>,
    /// Multiplicative step of the wheelbase scan.
    #[arg(long, default_value_t = 1.05, value_parser = positive)]
    pub ratio: f64,
    /// Classification table `ell,trace,class`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Rear tracks at attracting fixed points for wheelbases below the critical one.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DevelopArgs {
    /// Curve spec whose curvature function is developed; alternative to `--curvature`.
    #[arg(long, conflicts_with = "curvature", required_unless_present = "curvature")]
    pub input: Option<PathBuf>,
    /// Constant geodesic curvature.
    #[arg(long, allow_hyphen_values = true, value_parser = finite, requires = "length")]
    pub curvature: Option<f64>,
    /// Arc length for `--curvature`.
    #[arg(long, value_parser = positive)]
    pub length: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_STEPS, value_parser = steps)]
    pub steps: usize,
    /// Also compare the stargazing angle of this ideal point with the unit bicycle.
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Hyperboloid coordinates `t,x0,x1,x2`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Poincaré-disk picture.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LoopcheckArgs {
    /// Loop samples (JSON: `ell`, `x`, `y`, `theta`).
    #[arg(long)]
    pub input: PathBuf,
    /// Allowed `|lhs − rhs|` relative to the squared loop scale.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Periodic samples of a configuration loop at `s = j/M`, `j = 0..M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSamples {
    pub ell: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub ell: f64,
    pub alpha0: f64,
    pub steps: usize,
    pub front_length: f64,
    pub front_closed: bool,
    pub final_alpha: f64,
    pub rear_signed_length: f64,
    pub cusp_times: Vec<f64>,
    pub rear_closed: bool,
    /// Green's-theorem area of the rear path, when it closes.
    pub rear_area: Option<f64>,
    /// Area between both tractrix branches and a line front track.
    pub tractrix_area: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DevelopSummary {
    pub length: f64,
    pub steps: usize,
    pub closure_gap: f64,
    pub max_orthonormality_error: f64,
    pub end_point: [f64; 3],
    /// Largest gap between stargazing angles and the unit-bicycle solution.
    pub stargazing_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopcheckSummary {
    #[serde(flatten)]
    pub identity: LoopIdentity,
    /// `|lhs − rhs| / scale²`.
    pub relative_gap: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn finite(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got '{s}'")),
    }
}

fn steps(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("expected an integer of at least 2, got '{s}'")),
    }
}

fn count(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got '{s}'")),
    }
}

fn start_convention(s: &str) -> std::result::Result<StartConvention, String> {
    match s {
        "inward-normal" => Ok(StartConvention::InwardNormal),
        "through-centroid" => Ok(StartConvention::ThroughCentroid),
        "centroid" => Ok(StartConvention::Centroid),
        _ => match s.strip_prefix("fixed:") {
            Some(a) => finite(a).map(|angle| StartConvention::FixedDirection { angle }),
            None => Err(format!("unknown start convention '{s}'")),
        },
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_INVALID;
    }
    let outcome = match &cli.command {
        Command::Trace(a) => trace(a),
        Command::Monodromy(a) => monodromy_cmd(a),
        Command::Planimeter(a) => planimeter(a),
        Command::Menzin(a) => menzin(a),
        Command::Develop(a) => develop(a),
        Command::Loopcheck(a) => loopcheck(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical check failed: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")),
    };
    // The global pool can only be built once per process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_track(path: &Path) -> std::result::Result<(CurveSpec, FrontTrack), Failure> {
    let spec: CurveSpec = read_json(path)?;
    let track = make_curve(&spec)?;
    Ok((spec, track))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit(path, &text)
}

fn emit_file(path: &Option<PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => emit(Some(p), text),
        None => Ok(()),
    }
}

fn trace(a: &TraceArgs) -> Outcome {
    let (spec, track) = load_track(&a.common.input)?;
    let params = BikeParams::new(a.ell).with_steps(a.common.steps);
    let sol = integrate_steering(&track, &params, a.alpha0)?;
    let rear = rear_track(&sol)?;
    let tractrix = match spec.shape {
        ShapeSpec::Line { .. } => Some(tractrix_area(&track, &params, a.alpha0)?),
        _ => None,
    };
    let summary = TraceSummary {
        ell: a.ell,
        alpha0: a.alpha0,
        steps: a.common.steps,
        front_length: track.total_length(),
        front_closed: track.is_closed(),
        final_alpha: sol.final_alpha(),
        rear_signed_length: rear.signed_length,
        cusp_times: rear.cusp_times.clone(),
        rear_closed: rear.closed,
        rear_area: rear.closed.then(|| rear.signed_area()),
        tractrix_area: tractrix,
    };
    emit_file(&a.svg, &export::rear_track_svg(&rear))?;
    emit_file(&a.csv, &export::rear_track_csv(&rear))?;
    emit_json(a.common.output.as_deref(), &summary)
}

fn monodromy_cmd(a: &MonodromyArgs) -> Outcome {
    let (_, track) = load_track(&a.common.input)?;
    let params = BikeParams::new(a.ell).with_geometry(track.geometry()).with_steps(a.common.steps);
    let report = monodromy(&track, &params)?;
    emit_json(a.common.output.as_deref(), &report)
}

fn scan_bases(track: &FrontTrack, count: usize, seed: Option<u64>) -> Vec<f64> {
    let period = track.period();
    match seed {
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..count).map(|_| rng.gen_range(0.0..period)).collect()
        }
        None => (0..count).map(|i| period * i as f64 / count as f64).collect(),
    }
}

fn planimeter(a: &PlanimeterArgs) -> Outcome {
    let (_, track) = load_track(&a.common.input)?;
    if let Some(lengths) = &a.scan {
        let bases = scan_bases(&track, a.bases, a.seed);
        let rows = error_scan(&track, lengths, &bases, a.start)?;
        let path = a.csv.as_deref().or(a.common.output.as_deref());
        return emit(path, &export::scan_csv(&rows));
    }
    let ell = a.ell.expect("clap requires --ell without --scan");
    let (reading, paths) = measure_traced(&track, ell, a.base, a.start, a.common.steps)?;
    emit_file(&a.svg, &export::planimeter_svg(&paths))?;
    emit_json(a.common.output.as_deref(), &reading)?;
    let tol = 1e-6 * reading.exact_area.abs() + 1e-12 * ell * ell;
    if reading.identity_gap.abs() > tol {
        return Err(Failure::Numerical(format!(
            "area identity gap {:.3e} exceeds {tol:.1e}; sharp corners need more --steps",
            reading.identity_gap
        )));
    }
    Ok(())
}

fn menzin(a: &MenzinArgs) -> Outcome {
    let (_, track) = load_track(&a.common.input)?;
    let geometry = track.geometry();
    if geometry != Geometry::Euclidean {
        let ell = a.ell.ok_or_else(|| Failure::Invalid(format!("--ell is required for {geometry} tracks")))?;
        let report = hpz_verify(&track, geometry, ell)?;
        emit_json(a.common.output.as_deref(), &report)?;
        return if report.confirmed {
            Ok(())
        } else {
            Err(Failure::Numerical(format!("hypotheses hold but the monodromy is {}", report.class)))
        };
    }
    if a.ell.is_some() {
        return Err(Failure::Invalid("--ell applies only to spherical or hyperbolic tracks".into()));
    }
    let opts = ScanOptions { ratio: a.ratio, steps: a.common.steps, ..ScanOptions::default() };
    let report = menzin_verify_with(&track, &opts)?;
    emit_file(&a.csv, &export::classification_csv(&report.classification_curve))?;
    if a.svg.is_some() {
        emit_file(&a.svg, &nested_tracks(&track, report.ell0, a.common.steps)?)?;
    }
    emit_json(a.common.output.as_deref(), &report)?;
    if report.bound_check {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("area exceeds πℓ₀² by margin {:.3e}", report.margin)))
    }
}

/// Closed rear tracks at the attracting fixed point for a few wheelbases below `ell0`.
fn nested_tracks(track: &FrontTrack, ell0: f64, steps: usize) -> std::result::Result<String, Failure> {
    let mut rears = Vec::new();
    for f in [0.25, 0.5, 0.75, 0.95] {
        let params = BikeParams::new(f * ell0).with_steps(steps);
        let report = monodromy(track, &params)?;
        let attracting = report.fixed_points().into_iter().find(|fp| fp.multiplier < 1.0);
        if let Some(fp) = attracting {
            let rear = rear_track(&integrate_steering(track, &params, fp.angle)?)?;
            rears.push((f * ell0, rear.points));
        }
    }
    let front: Vec<Point> = track.sample(1024).iter().map(|s| s.position).collect();
    Ok(export::nested_tracks_svg(&front, &rears))
}

fn develop(a: &DevelopArgs) -> Outcome {
    let (curve, track) = match (&a.input, a.curvature) {
        (Some(path), _) => {
            let (_, track) = load_track(path)?;
            (develop_track(&track, a.steps), Some(track))
        }
        (None, Some(k)) => {
            let length = a.length.expect("clap requires --length with --curvature");
            (develop_hyperbolic(|_| k, length, a.steps), None)
        }
        (None, None) => unreachable!("clap requires --input or --curvature"),
    };
    let stargazing_gap = match a.alpha0 {
        Some(alpha0) => {
            let stars = stargazing_angle(&curve, &star_for_initial_angle(alpha0))?;
            let unit = match (&track, a.curvature) {
                (Some(t), _) => unit_bicycle_angles(&curve, |s| t.curvature(s), alpha0),
                (None, Some(k)) => unit_bicycle_angles(&curve, |_| k, alpha0),
                (None, None) => unreachable!(),
            };
            Some(stars.iter().zip(&unit).map(|(s, u)| (s - u).abs()).fold(0.0, f64::max))
        }
        None => None,
    };
    let end = curve.last().p;
    let summary = DevelopSummary {
        length: *curve.times.last().unwrap_or(&0.0),
        steps: curve.times.len().saturating_sub(1),
        closure_gap: curve.closure_gap(),
        max_orthonormality_error: curve.max_orthonormality_error(),
        end_point: [end[0], end[1], end[2]],
        stargazing_gap,
    };
    emit_file(&a.csv, &export::hcurve_csv(&curve))?;
    emit_file(&a.svg, &export::poincare_svg(&curve))?;
    emit_json(a.output.as_deref(), &summary)?;
    if summary.max_orthonormality_error > 1e-9 {
        return Err(Failure::Numerical(format!("frame drifted off the hyperboloid by {:.3e}", summary.max_orthonormality_error)));
    }
    Ok(())
}

fn loopcheck(a: &LoopcheckArgs) -> Outcome {
    let samples: LoopSamples = read_json(&a.input)?;
    let config = ConfigLoop::from_periodic_samples(samples.ell, &samples.x, &samples.y, &samples.theta)?;
    let identity = loop_identity(&config)?;
    let relative_gap = (identity.lhs - identity.rhs).abs() / (identity.scale * identity.scale);
    let summary = LoopcheckSummary { identity, relative_gap, tolerance: a.tol, holds: relative_gap <= a.tol };
    emit_json(a.output.as_deref(), &summary)?;
    if summary.holds {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("identity gap {relative_gap:.3e} exceeds {:.1e}", a.tol)))
    }
}
