//! Smooth boundary curves from ordered point clouds.
//!
//! Each coordinate is regressed against the normalized chord-length
//! parameter `t` with a Gaussian-kernel support vector regression using the
//! squared ε-insensitive loss:
//!
//! ```text
//! primal: min ½‖f‖² + 1/(2·reg) Σ max(0, |yᵢ − f(tᵢ)| − ε)²
//! dual:   max yᵀβ − ε‖β‖₁ − ½ βᵀ(K + reg·I)β,    f = Σ βⱼ k(·, tⱼ)
//! ```
//!
//! The chord between the first and last point is subtracted first, so the
//! kernel part only carries the deviation from a straight line. At ε = 0 the
//! dual is the kernel ridge system `(K + reg·I)β = y`, solved directly.

use nalgebra::{DMatrix, DVector};

use super::{chord_params, Point};
use crate::error::{Error, Result};

/// Width of the endpoint blending ramps in `t`.
const SNAP_RAMP: f64 = 0.05;
const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitParams {
    /// Gaussian kernel width in units of normalized `t`.
    pub kernel_width: f64,
    pub regularization: f64,
    pub epsilon: f64,
    /// Sweep cap for the coordinate-descent solver (ε > 0 only).
    pub max_sweeps: usize,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            kernel_width: 0.2,
            regularization: 1e-6,
            epsilon: 0.0,
            max_sweeps: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedCurve {
    source: Vec<Point>,
    params: Vec<f64>,
    kernel_width: f64,
    coef_x: Vec<f64>,
    coef_y: Vec<f64>,
    /// Endpoint mismatch of the raw regression, removed by the snap ramps.
    start_fix: Point,
    end_fix: Point,
    /// Whether the coordinate-descent solver reached the gap tolerance.
    pub converged: bool,
}

impl FittedCurve {
    pub fn source_points(&self) -> &[Point] {
        &self.source
    }

    /// Parameter assigned to each source point.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn coefficients(&self) -> (&[f64], &[f64]) {
        (&self.coef_x, &self.coef_y)
    }

    fn raw(&self, t: f64) -> Point {
        let first = self.source[0];
        let last = self.source[self.source.len() - 1];
        let mut p = first.lerp(last, t);
        let inv = 1.0 / (self.kernel_width * self.kernel_width);
        for ((&s, &bx), &by) in self.params.iter().zip(&self.coef_x).zip(&self.coef_y) {
            let k = (-(t - s) * (t - s) * inv).exp();
            p.x += bx * k;
            p.y += by * k;
        }
        p
    }

    pub fn eval(&self, t: f64) -> Point {
        let n = self.source.len();
        if t <= 0.0 {
            return self.source[0];
        }
        if t >= 1.0 {
            return self.source[n - 1];
        }
        let p = self.raw(t);
        let w0 = 1.0 - smooth_step(t / SNAP_RAMP);
        let w1 = 1.0 - smooth_step((1.0 - t) / SNAP_RAMP);
        Point::new(
            p.x + w0 * self.start_fix.x + w1 * self.end_fix.x,
            p.y + w0 * self.start_fix.y + w1 * self.end_fix.y,
        )
    }
}

/// C∞ transition from 0 (u ≤ 0) to 1 (u ≥ 1).
fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

pub fn fit_boundary_curve(points: &[Point], params: &FitParams) -> Result<FittedCurve> {
    if points.len() < 4 {
        return Err(Error::invalid(format!(
            "curve fitting needs at least 4 points, got {}",
            points.len()
        )));
    }
    if !(params.kernel_width > 0.0) || !(params.regularization > 0.0) || !(params.epsilon >= 0.0)
    {
        return Err(Error::invalid(format!(
            "fit parameters out of range: {params:?}"
        )));
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::invalid(format!("non-finite input point {p}")));
    }
    let ts = chord_params(points)
        .ok_or_else(|| Error::DegenerateGeometry("all input points coincide".into()))?;

    let n = points.len();
    let inv = 1.0 / (params.kernel_width * params.kernel_width);
    let gram = DMatrix::from_fn(n, n, |i, j| (-(ts[i] - ts[j]).powi(2) * inv).exp());

    let first = points[0];
    let last = points[n - 1];
    let detrended = |coord: fn(Point) -> f64| -> DVector<f64> {
        DVector::from_iterator(
            n,
            points
                .iter()
                .zip(&ts)
                .map(|(p, &t)| coord(*p) - coord(first.lerp(last, t))),
        )
    };
    let rx = detrended(|p| p.x);
    let ry = detrended(|p| p.y);

    let (coef_x, ok_x) = solve_dual(&gram, &rx, params)?;
    let (coef_y, ok_y) = solve_dual(&gram, &ry, params)?;

    let mut curve = FittedCurve {
        source: points.to_vec(),
        params: ts,
        kernel_width: params.kernel_width,
        coef_x,
        coef_y,
        start_fix: Point::default(),
        end_fix: Point::default(),
        converged: ok_x && ok_y,
    };
    let (r0, r1) = (curve.raw(0.0), curve.raw(1.0));
    curve.start_fix = Point::new(first.x - r0.x, first.y - r0.y);
    curve.end_fix = Point::new(last.x - r1.x, last.y - r1.y);
    Ok(curve)
}

fn solve_dual(gram: &DMatrix<f64>, y: &DVector<f64>, params: &FitParams) -> Result<(Vec<f64>, bool)> {
    let n = y.len();
    let reg = params.regularization;
    if params.epsilon == 0.0 {
        let q = gram + DMatrix::identity(n, n) * reg;
        let chol = q.cholesky().ok_or_else(|| {
            Error::DegenerateGeometry("kernel system is not positive definite".into())
        })?;
        return Ok((chol.solve(y).iter().copied().collect(), true));
    }

    let eps = params.epsilon;
    let mut beta = vec![0.0; n];
    // kb = K·β
    let mut kb = vec![0.0; n];
    for _ in 0..params.max_sweeps {
        for i in 0..n {
            let qii = gram[(i, i)] + reg;
            let z = y[i] - (kb[i] + reg * beta[i]) + qii * beta[i];
            let new = soft_threshold(z, eps) / qii;
            let delta = new - beta[i];
            if delta != 0.0 {
                beta[i] = new;
                for (j, v) in kb.iter_mut().enumerate() {
                    *v += delta * gram[(j, i)];
                }
            }
        }
        if duality_gap(&beta, &kb, y.as_slice(), reg, eps) <= GAP_TOL {
            return Ok((beta, true));
        }
    }
    Ok((beta, false))
}

fn soft_threshold(z: f64, eps: f64) -> f64 {
    if z > eps {
        z - eps
    } else if z < -eps {
        z + eps
    } else {
        0.0
    }
}

fn duality_gap(beta: &[f64], kb: &[f64], y: &[f64], reg: f64, eps: f64) -> f64 {
    let quad: f64 = beta.iter().zip(kb).map(|(b, k)| b * k).sum();
    let loss: f64 = y
        .iter()
        .zip(kb)
        .map(|(yi, fi)| ((yi - fi).abs() - eps).max(0.0).powi(2))
        .sum();
    let primal = 0.5 * quad + loss / (2.0 * reg);
    let dual = y.iter().zip(beta).map(|(a, b)| a * b).sum::<f64>()
        - eps * beta.iter().map(|b| b.abs()).sum::<f64>()
        - 0.5 * quad
        - 0.5 * reg * beta.iter().map(|b| b * b).sum::<f64>();
    primal - dual
}
