use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::track::{BaseCurve, FrontTrack, ParametricCurve, Piecewise, SupportCurve, Trig};
use super::Point;
use crate::error::{Error, Result};
use crate::noneuclid::Geometry;

/// JSON-serializable description of a front track.
///
/// ```json
/// {"kind":"circle","r":1.0,"traversals":1,"orientation":1}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(flatten)]
    pub shape: ShapeSpec,
    #[serde(default = "one_u32")]
    pub traversals: u32,
    #[serde(default = "one_i32")]
    pub orientation: i32,
}

fn one_u32() -> u32 {
    1
}
fn one_i32() -> i32 {
    1
}
fn origin() -> [f64; 2] {
    [0.0, 0.0]
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    Circle {
        r: f64,
        #[serde(default = "origin")]
        center: [f64; 2],
        /// Polar angle of the starting point about the center.
        #[serde(default)]
        start_angle: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default = "origin")]
        center: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    /// `p(φ) = a0 + Σₙ cos[n-1]·cos nφ + sin[n-1]·sin nφ` about `center`.
    FourierSupport {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
        #[serde(default = "origin")]
        center: [f64; 2],
    },
    /// `x(u) = Σₙ x_cos[n] cos nu + x_sin[n] sin nu` (likewise `y`), `n ≥ 0`, `u ∈ [0, 2π]`.
    FourierCurve {
        #[serde(default)]
        x_cos: Vec<f64>,
        #[serde(default)]
        x_sin: Vec<f64>,
        #[serde(default)]
        y_cos: Vec<f64>,
        #[serde(default)]
        y_sin: Vec<f64>,
    },
    Polyline {
        vertices: Vec<[f64; 2]>,
        #[serde(default = "yes")]
        closed: bool,
        #[serde(default)]
        fillet_radius: Option<f64>,
    },
    Samples {
        points: Vec<[f64; 2]>,
        #[serde(default = "yes")]
        closed: bool,
    },
    Line {
        #[serde(default = "origin")]
        start: [f64; 2],
        /// Direction angle in radians.
        #[serde(default)]
        direction: f64,
        length: f64,
    },
    /// Circle of geodesic radius `rho` in the given geometry.
    GeodesicCircle { rho: f64, geometry: Geometry },
}

impl CurveSpec {
    pub fn new(shape: ShapeSpec) -> Self {
        CurveSpec { shape, traversals: 1, orientation: 1 }
    }

    pub fn circle(r: f64) -> Self {
        Self::new(ShapeSpec::Circle { r, center: origin(), start_angle: 0.0 })
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::new(ShapeSpec::Ellipse { a, b, center: origin(), rotation: 0.0 })
    }

    pub fn fourier_support(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self::new(ShapeSpec::FourierSupport { a0, cos, sin, center: origin() })
    }

    pub fn fourier_curve(x_cos: Vec<f64>, x_sin: Vec<f64>, y_cos: Vec<f64>, y_sin: Vec<f64>) -> Self {
        Self::new(ShapeSpec::FourierCurve { x_cos, x_sin, y_cos, y_sin })
    }

    pub fn polyline(vertices: Vec<Point>) -> Self {
        Self::new(ShapeSpec::Polyline {
            vertices: vertices.iter().map(|p| [p.x, p.y]).collect(),
            closed: true,
            fillet_radius: None,
        })
    }

    pub fn line(start: Point, direction: f64, length: f64) -> Self {
        Self::new(ShapeSpec::Line { start: [start.x, start.y], direction, length })
    }

    pub fn geodesic_circle(rho: f64, geometry: Geometry) -> Self {
        Self::new(ShapeSpec::GeodesicCircle { rho, geometry })
    }

    pub fn with_traversals(mut self, traversals: u32) -> Self {
        self.traversals = traversals;
        self
    }

    pub fn with_orientation(mut self, orientation: i32) -> Self {
        self.orientation = orientation;
        self
    }

    /// Moves the center of a circle, ellipse or support curve.
    pub fn with_center(mut self, c: Point) -> Self {
        match &mut self.shape {
            ShapeSpec::Circle { center, .. }
            | ShapeSpec::Ellipse { center, .. }
            | ShapeSpec::FourierSupport { center, .. } => *center = [c.x, c.y],
            _ => {}
        }
        self
    }

    pub fn with_rotation(mut self, angle: f64) -> Self {
        if let ShapeSpec::Ellipse { rotation, .. } = &mut self.shape {
            *rotation = angle;
        }
        self
    }
}

fn pt(p: [f64; 2]) -> Point {
    Point::new(p[0], p[1])
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Builds a unit-speed track from its description.
pub fn make_curve(spec: &CurveSpec) -> Result<FrontTrack> {
    let reversed = match spec.orientation {
        1 => false,
        -1 => true,
        o => return Err(Error::InvalidSpec(format!("orientation must be ±1, got {o}"))),
    };
    let mut geometry = Geometry::Euclidean;
    let base = match &spec.shape {
        ShapeSpec::Circle { r, center, start_angle } => {
            positive("radius", *r)?;
            BaseCurve::Circle { center: pt(*center), radius: *r, phase: *start_angle }
        }
        ShapeSpec::Ellipse { a, b, center, rotation } => {
            positive("semi-axis b", *b)?;
            if !(a >= b) || !a.is_finite() {
                return Err(Error::InvalidSpec(format!("ellipse needs a >= b > 0, got a={a}, b={b}")));
            }
            let (sr, cr) = rotation.sin_cos();
            let x = Trig { cos: vec![center[0], a * cr], sin: vec![0.0, -b * sr] };
            let y = Trig { cos: vec![center[1], a * sr], sin: vec![0.0, b * cr] };
            BaseCurve::Parametric(ParametricCurve::new(x, y)?)
        }
        ShapeSpec::FourierSupport { a0, cos, sin, center } => {
            positive("a0", *a0)?;
            let mut c = vec![*a0];
            c.extend_from_slice(cos);
            let mut s = vec![0.0];
            s.extend_from_slice(sin);
            BaseCurve::Support(SupportCurve::new(pt(*center), Trig { cos: c, sin: s })?)
        }
        ShapeSpec::FourierCurve { x_cos, x_sin, y_cos, y_sin } => {
            let x = Trig { cos: x_cos.clone(), sin: x_sin.clone() };
            let y = Trig { cos: y_cos.clone(), sin: y_sin.clone() };
            BaseCurve::Parametric(ParametricCurve::new(x, y)?)
        }
        ShapeSpec::Polyline { vertices, closed, fillet_radius } => {
            let v: Vec<Point> = vertices.iter().copied().map(pt).collect();
            BaseCurve::Piecewise(Piecewise::from_polyline(&v, *closed, *fillet_radius)?)
        }
        ShapeSpec::Samples { points, closed } => {
            let v: Vec<Point> = points.iter().copied().map(pt).collect();
            BaseCurve::Piecewise(Piecewise::from_polyline(&v, *closed, None)?)
        }
        ShapeSpec::Line { start, direction, length } => {
            positive("length", *length)?;
            BaseCurve::Line { start: pt(*start), angle: *direction, length: *length }
        }
        ShapeSpec::GeodesicCircle { rho, geometry: g } => {
            positive("rho", *rho)?;
            geometry = *g;
            let (curvature, perimeter) = match g {
                Geometry::Euclidean => (1.0 / rho, 2.0 * PI * rho),
                Geometry::Spherical => {
                    if *rho >= PI {
                        return Err(Error::InvalidSpec("spherical radius must be below π".into()));
                    }
                    (1.0 / rho.tan(), 2.0 * PI * rho.sin())
                }
                Geometry::Hyperbolic => (1.0 / rho.tanh(), 2.0 * PI * rho.sinh()),
            };
            BaseCurve::GeodesicCircle { rho: *rho, curvature, perimeter }
        }
    };
    FrontTrack::new(base, spec.traversals, reversed, geometry)
}
