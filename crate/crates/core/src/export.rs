//! CSV tables and hand-written SVG figures.
//!
//! Numbers in CSV use `.` as decimal separator and 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::dynamics::RearTrack;
use crate::geom::Point;
use crate::menzin::TracePoint;
use crate::noneuclid::HCurve;
use crate::planimeter::{ScanRow, TracedPaths};

/// Formats a float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn table(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// `t, x, y, alpha, cos_alpha` per sample.
pub fn rear_track_csv(rear: &RearTrack) -> String {
    table(
        &["t", "x", "y", "alpha", "cos_alpha"],
        rear.times.iter().zip(&rear.points).zip(&rear.alpha).map(|((t, p), a)| {
            vec![num(*t), num(p.x), num(p.y), num(*a), num(a.cos())]
        }),
    )
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    table(
        &["ell", "base_param", "alpha", "estimate", "exact", "correction", "residual", "centroid_start"],
        rows.iter().map(|r| {
            vec![
                num(r.ell),
                num(r.base_param),
                num(r.alpha),
                num(r.estimate),
                num(r.exact),
                num(r.correction),
                num(r.residual),
                r.centroid_start.to_string(),
            ]
        }),
    )
}

/// `ell, trace, class` per scan sample.
pub fn classification_csv(samples: &[TracePoint]) -> String {
    table(
        &["ell", "trace", "class"],
        samples.iter().map(|s| vec![num(s.ell), num(s.trace), s.class.to_string()]),
    )
}

/// `t, x0, x1, x2` in hyperboloid coordinates.
pub fn hcurve_csv(curve: &HCurve) -> String {
    table(
        &["t", "x0", "x1", "x2"],
        curve.times.iter().zip(&curve.frames).map(|(t, f)| vec![num(*t), num(f.p[0]), num(f.p[1]), num(f.p[2])]),
    )
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Minimal SVG canvas in world coordinates (y up).
pub struct Svg {
    min: Point,
    max: Point,
    size: f64,
    body: String,
}

impl Svg {
    /// Canvas covering all `points` with a margin.
    pub fn fit<'a>(points: impl IntoIterator<Item = &'a Point>, size: f64) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            if p.x.is_finite() && p.y.is_finite() {
                min = min.inf(p);
                max = max.sup(p);
            }
        }
        if !min.x.is_finite() {
            min = Point::new(-1.0, -1.0);
            max = Point::new(1.0, 1.0);
        }
        let pad = 0.05 * (max - min).amax().max(1e-9);
        Svg { min: min.add_scalar(-pad), max: max.add_scalar(pad), size, body: String::new() }
    }

    fn scale(&self) -> f64 {
        self.size / (self.max - self.min).amax()
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let s = self.scale();
        ((p.x - self.min.x) * s, (self.max.y - p.y) * s)
    }

    pub fn polyline(&mut self, points: &[Point], stroke: &str, width: f64, dash: Option<&str>) {
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        let dash = dash.map(|s| format!(" stroke-dasharray=\"{s}\"")).unwrap_or_default();
        let _ = writeln!(
            self.body,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>"
        );
    }

    pub fn dot(&mut self, p: &Point, r: f64, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r}\" fill=\"{fill}\"/>");
    }

    /// Circle of world radius `radius`.
    pub fn circle(&mut self, c: &Point, radius: f64, stroke: &str) {
        let (x, y) = self.map(c);
        let r = radius * self.scale();
        let _ = writeln!(
            self.body,
            "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r:.3}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1\"/>"
        );
    }

    pub fn text(&mut self, p: &Point, s: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, "  <text x=\"{x:.3}\" y=\"{y:.3}\" font-size=\"12\">{s}</text>");
    }

    pub fn finish(self) -> String {
        let s = self.size;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Front track, rear track and cusps as filled dots.
pub fn rear_track_svg(rear: &RearTrack) -> String {
    let mut svg = Svg::fit(rear.front.iter().chain(&rear.points), 600.0);
    svg.polyline(&rear.front, "#1f77b4", 1.5, None);
    svg.polyline(&rear.points, "#d62728", 1.5, None);
    for &t in &rear.cusp_times {
        let p = interpolate(&rear.times, &rear.points, t);
        svg.dot(&p, 3.5, "#000");
    }
    svg.finish()
}

fn interpolate(times: &[f64], points: &[Point], t: f64) -> Point {
    let i = times.partition_point(|&s| s <= t).clamp(1, times.len() - 1);
    let (t0, t1) = (times[i - 1], times[i]);
    let f = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
    points[i - 1] * (1.0 - f) + points[i] * f
}

/// Tracer path, zig-zag chisel path and closing arc.
pub fn planimeter_svg(paths: &TracedPaths) -> String {
    let mut svg = Svg::fit(paths.tracer.iter().chain(&paths.chisel), 600.0);
    svg.polyline(&paths.tracer[..paths.arc_start.max(1)], "#1f77b4", 1.5, None);
    svg.polyline(&paths.chisel[..paths.arc_start.max(1)], "#d62728", 1.5, None);
    svg.polyline(&paths.chisel[paths.arc_start..], "#2ca02c", 1.5, Some("6 3"));
    if let Some(p) = paths.tracer.first() {
        svg.dot(p, 3.0, "#1f77b4");
    }
    svg.finish()
}

/// A front track with several rear tracks; fixed-point tracks dashed.
pub fn nested_tracks_svg(front: &[Point], rears: &[(f64, Vec<Point>)]) -> String {
    let mut svg = Svg::fit(front.iter().chain(rears.iter().flat_map(|r| r.1.iter())), 600.0);
    svg.polyline(front, "#000", 2.0, None);
    let n = rears.len().max(1) as f64;
    for (i, (_, pts)) in rears.iter().enumerate() {
        let hue = 360.0 * i as f64 / n;
        svg.polyline(pts, &format!("hsl({hue:.0},70%,45%)"), 1.2, Some("4 2"));
    }
    svg.finish()
}

/// Poincaré-disk picture of a developed curve.
pub fn poincare_svg(curve: &HCurve) -> String {
    let unit = [Point::new(-1.0, -1.0), Point::new(1.0, 1.0)];
    let mut svg = Svg::fit(unit.iter(), 600.0);
    svg.circle(&Point::zeros(), 1.0, "#888");
    svg.polyline(&curve.poincare(), "#1f77b4", 1.5, None);
    svg.finish()
}
