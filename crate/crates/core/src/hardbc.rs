//! Post-training boundary projection: boundary nodes are snapped onto the
//! exact curves and the snap corrections are spread into the interior by
//! inverse-squared-distance weighting.

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::mesh::{uniform_comp_grid, Provenance, StructuredMesh};
use crate::training::boundary_owner;

/// Distance below which an interior node counts as sitting on a boundary
/// node and takes its correction unchanged.
pub const COINCIDENCE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// `Σ δ_j / d_j² / Σ 1 / d_j²`.
    #[default]
    InverseSquare,
    /// Weights `d_j²` taken literally from the unnormalized coefficient;
    /// far boundary nodes dominate. Kept for comparison only.
    Literal,
}

/// Exact curve sample for every boundary node, as `(storage index, point)`.
pub fn boundary_samples(mesh: &StructuredMesh, domain: &DomainSpec) -> Result<Vec<(usize, Point)>> {
    let grid = uniform_comp_grid(mesh.ni(), mesh.nj())?;
    let mut out = Vec::with_capacity(2 * (mesh.ni() + mesh.nj()));
    for j in 0..mesh.nj() {
        for i in 0..mesh.ni() {
            if let Some((side, t)) = boundary_owner(&grid, i, j) {
                out.push((j * mesh.ni() + i, domain.curve(side).eval(t)));
            }
        }
    }
    Ok(out)
}

/// Largest distance from a boundary node to its curve sample.
pub fn max_boundary_deviation(mesh: &StructuredMesh, domain: &DomainSpec) -> Result<f64> {
    Ok(boundary_samples(mesh, domain)?
        .iter()
        .map(|&(k, target)| mesh.coords()[k].dist(target))
        .fold(0.0, f64::max))
}

pub fn apply_hard_bc(mesh: &StructuredMesh, domain: &DomainSpec) -> Result<StructuredMesh> {
    apply_hard_bc_with(mesh, domain, Weighting::InverseSquare)
}

pub fn apply_hard_bc_with(
    mesh: &StructuredMesh,
    domain: &DomainSpec,
    weighting: Weighting,
) -> Result<StructuredMesh> {
    let samples = boundary_samples(mesh, domain)?;
    let pre = mesh.coords();
    // (pre-snap position, correction) per boundary node
    let bnodes: Vec<(Point, Point)> = samples
        .iter()
        .map(|&(k, target)| (pre[k], Point::new(target.x - pre[k].x, target.y - pre[k].y)))
        .collect();
    if let Some((p, _)) = bnodes.iter().find(|(p, d)| !p.is_finite() || !d.is_finite()) {
        return Err(Error::DegenerateGeometry(format!(
            "non-finite boundary sample near {p}"
        )));
    }
    let mut coords = pre.to_vec();
    for &(k, target) in &samples {
        coords[k] = target;
    }
    for j in 1..mesh.nj() - 1 {
        for i in 1..mesh.ni() - 1 {
            let k = j * mesh.ni() + i;
            let d = correction(pre[k], &bnodes, weighting);
            coords[k] = Point::new(pre[k].x + d.x, pre[k].y + d.y);
        }
    }
    StructuredMesh::new(mesh.ni(), mesh.nj(), coords, Provenance::PinnHardBc)
}

fn correction(p: Point, bnodes: &[(Point, Point)], weighting: Weighting) -> Point {
    let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
    for &(b, delta) in bnodes {
        let d2 = (p.x - b.x).powi(2) + (p.y - b.y).powi(2);
        if d2.sqrt() < COINCIDENCE_TOL {
            return delta;
        }
        let w = match weighting {
            Weighting::InverseSquare => 1.0 / d2,
            Weighting::Literal => d2,
        };
        sx += w * delta.x;
        sy += w * delta.y;
        sw += w;
    }
    Point::new(sx / sw, sy / sw)
}
