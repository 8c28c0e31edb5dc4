//! Boundary curves and four-sided domains.

mod fit;

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fit::{fit_boundary_curve, FitParams, FittedCurve};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Closed-form curve families.
#[derive(Debug, Clone, PartialEq)]
pub enum Analytic {
    Segment { from: Point, to: Point },
    /// Circular arc, angles in radians, swept from `start` to `end`.
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
    },
    /// Straight chord with a sinusoidal offset along its left normal.
    Wave {
        from: Point,
        to: Point,
        amplitude: f64,
        waves: f64,
    },
    /// Linear in x, cosine ease in y: an S-shaped transition between two
    /// levels.
    CosineRamp { from: Point, to: Point },
}

impl Analytic {
    fn eval(&self, t: f64) -> Point {
        match *self {
            Analytic::Segment { from, to } => from.lerp(to, t),
            Analytic::Arc {
                center,
                radius,
                start,
                end,
            } => {
                let a = start + t * (end - start);
                Point::new(center.x + radius * a.cos(), center.y + radius * a.sin())
            }
            Analytic::Wave {
                from,
                to,
                amplitude,
                waves,
            } => {
                let base = from.lerp(to, t);
                let (dx, dy) = (to.x - from.x, to.y - from.y);
                let len = dx.hypot(dy);
                let off = amplitude * (2.0 * PI * waves * t).sin();
                Point::new(base.x - off * dy / len, base.y + off * dx / len)
            }
            Analytic::CosineRamp { from, to } => Point::new(
                from.x + t * (to.x - from.x),
                from.y + (to.y - from.y) * 0.5 * (1.0 - (PI * t).cos()),
            ),
        }
    }
}

/// Piecewise-linear curve parameterized by normalized cumulative chord
/// length.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
    params: Vec<f64>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a polyline needs at least 2 points"));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("non-finite polyline point {p}")));
        }
        let params = chord_params(&points).ok_or_else(|| {
            Error::DegenerateGeometry("polyline points are all coincident".into())
        })?;
        Ok(Polyline { points, params })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Curve parameter assigned to each vertex.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    fn eval(&self, t: f64) -> Point {
        let n = self.points.len();
        if t <= 0.0 {
            return self.points[0];
        }
        if t >= 1.0 {
            return self.points[n - 1];
        }
        // last vertex whose parameter is <= t
        let k = self.params.partition_point(|&s| s <= t) - 1;
        let k = k.min(n - 2);
        let (t0, t1) = (self.params[k], self.params[k + 1]);
        if t1 <= t0 {
            return self.points[k];
        }
        self.points[k].lerp(self.points[k + 1], (t - t0) / (t1 - t0))
    }
}

/// Normalized cumulative chord length, or `None` when the total length is 0.
pub(crate) fn chord_params(points: &[Point]) -> Option<Vec<f64>> {
    let mut acc = Vec::with_capacity(points.len());
    let mut s = 0.0;
    acc.push(0.0);
    for w in points.windows(2) {
        s += w[0].dist(w[1]);
        acc.push(s);
    }
    if !(s > 0.0) {
        return None;
    }
    let n = acc.len();
    for v in acc.iter_mut() {
        *v /= s;
    }
    acc[n - 1] = 1.0;
    Some(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Analytic,
    Polyline,
    Fitted,
}

/// Parametric boundary curve `t ∈ [0, 1] → (x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCurve {
    Analytic(Analytic),
    Polyline(Polyline),
    Fitted(FittedCurve),
}

impl BoundaryCurve {
    pub fn segment(from: impl Into<Point>, to: impl Into<Point>) -> Self {
        BoundaryCurve::Analytic(Analytic::Segment {
            from: from.into(),
            to: to.into(),
        })
    }

    /// Arc with angles given in radians.
    pub fn arc(center: impl Into<Point>, radius: f64, start: f64, end: f64) -> Self {
        BoundaryCurve::Analytic(Analytic::Arc {
            center: center.into(),
            radius,
            start,
            end,
        })
    }

    pub fn polyline(points: Vec<Point>) -> Result<Self> {
        Polyline::new(points).map(BoundaryCurve::Polyline)
    }

    pub fn kind(&self) -> CurveKind {
        match self {
            BoundaryCurve::Analytic(_) => CurveKind::Analytic,
            BoundaryCurve::Polyline(_) => CurveKind::Polyline,
            BoundaryCurve::Fitted(_) => CurveKind::Fitted,
        }
    }

    pub fn eval(&self, t: f64) -> Point {
        match self {
            BoundaryCurve::Analytic(a) => a.eval(t),
            BoundaryCurve::Polyline(p) => p.eval(t),
            BoundaryCurve::Fitted(f) => f.eval(t),
        }
    }

    pub fn source_points(&self) -> Option<&[Point]> {
        match self {
            BoundaryCurve::Analytic(_) => None,
            BoundaryCurve::Polyline(p) => Some(p.points()),
            BoundaryCurve::Fitted(f) => Some(f.source_points()),
        }
    }

    pub fn start(&self) -> Point {
        self.eval(0.0)
    }

    pub fn end(&self) -> Point {
        self.eval(1.0)
    }
}

/// `curve(t_k)` at `t_k = k/(n−1)`.
pub fn sample_curve(curve: &BoundaryCurve, n: usize) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::invalid(format!("sample count {n} < 2")));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|k| curve.eval(k as f64 / last)).collect())
}

/// Four boundary curves of a topologically rectangular domain.
///
/// Orientation: `south` and `north` run with ξ (left to right), `west` and
/// `east` run with η (bottom to top).
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub south: BoundaryCurve,
    pub east: BoundaryCurve,
    pub north: BoundaryCurve,
    pub west: BoundaryCurve,
    pub names: [String; 4],
}

/// Curve identifiers in collocation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    South,
    East,
    North,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::South, Side::East, Side::North, Side::West];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl DomainSpec {
    pub fn new(
        south: BoundaryCurve,
        east: BoundaryCurve,
        north: BoundaryCurve,
        west: BoundaryCurve,
    ) -> Self {
        DomainSpec {
            south,
            east,
            north,
            west,
            names: ["south", "east", "north", "west"].map(String::from),
        }
    }

    pub fn curve(&self, side: Side) -> &BoundaryCurve {
        match side {
            Side::South => &self.south,
            Side::East => &self.east,
            Side::North => &self.north,
            Side::West => &self.west,
        }
    }

    /// Axis-aligned bounding box `(min, max)` from dense curve samples.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for side in Side::ALL {
            let c = self.curve(side);
            for k in 0..=BBOX_SAMPLES {
                let p = c.eval(k as f64 / BBOX_SAMPLES as f64);
                lo.x = lo.x.min(p.x);
                lo.y = lo.y.min(p.y);
                hi.x = hi.x.max(p.x);
                hi.y = hi.y.max(p.y);
            }
        }
        (lo, hi)
    }

    /// Enclosed area from the shoelace formula over dense boundary samples
    /// traversed counterclockwise (south, east, reversed north, reversed
    /// west).
    pub fn area(&self) -> f64 {
        let n = BBOX_SAMPLES;
        let ts = (0..n).map(|k| k as f64 / n as f64);
        let mut ring: Vec<Point> = Vec::with_capacity(4 * n);
        ring.extend(ts.clone().map(|t| self.south.eval(t)));
        ring.extend(ts.clone().map(|t| self.east.eval(t)));
        ring.extend(ts.clone().map(|t| self.north.eval(1.0 - t)));
        ring.extend(ts.map(|t| self.west.eval(1.0 - t)));
        let mut a = 0.0;
        for k in 0..ring.len() {
            let (p, q) = (ring[k], ring[(k + 1) % ring.len()]);
            a += p.x * q.y - q.x * p.y;
        }
        0.5 * a
    }
}

const BBOX_SAMPLES: usize = 256;

/// Gaps at the four shared corners.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerReport {
    /// south-east, east-north, north-west, west-south.
    pub gaps: [f64; 4],
    pub tol: f64,
    pub pass: bool,
}

impl CornerReport {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }
}

pub const CORNER_LABELS: [&str; 4] = ["south-east", "east-north", "north-west", "west-south"];

pub fn check_corner_compatibility(domain: &DomainSpec, corner_tol: f64) -> CornerReport {
    let gaps = [
        domain.south.end().dist(domain.east.start()),
        domain.east.end().dist(domain.north.end()),
        domain.north.start().dist(domain.west.end()),
        domain.west.start().dist(domain.south.start()),
    ];
    // NaN gaps must fail
    let pass = gaps.iter().all(|g| *g <= corner_tol);
    CornerReport {
        gaps,
        tol: corner_tol,
        pass,
    }
}

/// Reads an ordered `x,y` point list. A non-numeric first line is treated
/// as a header.
pub fn read_points_csv(path: impl AsRef<Path>) -> Result<Vec<Point>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);
    let mut points = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(k + 1, |p| p.line() as usize),
            detail: e.to_string(),
        })?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        let parsed = if rec.len() == 2 {
            rec[0].parse::<f64>().ok().zip(rec[1].parse::<f64>().ok())
        } else {
            None
        };
        match parsed {
            Some((x, y)) => points.push(Point::new(x, y)),
            None if k == 0 => continue,
            None => {
                return Err(Error::Parse {
                    line,
                    detail: format!("expected `x,y`, found {:?}", rec.iter().collect::<Vec<_>>()),
                })
            }
        }
    }
    Ok(points)
}
