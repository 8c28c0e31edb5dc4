use serde::{Deserialize, Serialize};

use super::StructuredMesh;
use crate::error::{Error, Result};
use crate::geometry::Point;

const MIN_EDGE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    /// Mean over cells of the smallest interior angle, degrees.
    pub avg_min_angle: f64,
    /// Mean over cells of the largest interior angle, degrees.
    pub avg_max_angle: f64,
    /// Mean absolute cell area.
    pub avg_cell_area: f64,
    pub inverted_cells: usize,
    pub generation_time: f64,
}

fn shoelace(c: &[Point; 4]) -> f64 {
    let mut a = 0.0;
    for k in 0..4 {
        let (p, q) = (c[k], c[(k + 1) % 4]);
        a += p.x * q.y - q.x * p.y;
    }
    0.5 * a
}

/// Turn direction at each vertex: `(v_k − v_{k−1}) × (v_{k+1} − v_k)`.
fn turns(c: &[Point; 4]) -> [f64; 4] {
    std::array::from_fn(|k| {
        let (p, v, n) = (c[(k + 3) % 4], c[k], c[(k + 1) % 4]);
        (v.x - p.x) * (n.y - v.y) - (v.y - p.y) * (n.x - v.x)
    })
}

fn cell_angles(c: &[Point; 4], i: usize, j: usize) -> Result<[f64; 4]> {
    let area = shoelace(c);
    let turn = turns(c);
    let mut out = [0.0; 4];
    for k in 0..4 {
        let (p, v, n) = (c[(k + 3) % 4], c[k], c[(k + 1) % 4]);
        let (ax, ay) = (p.x - v.x, p.y - v.y);
        let (bx, by) = (n.x - v.x, n.y - v.y);
        let (la, lb) = (ax.hypot(ay), bx.hypot(by));
        if !(la >= MIN_EDGE && lb >= MIN_EDGE) {
            return Err(Error::DegenerateCell { i, j });
        }
        let cos = ((ax * bx + ay * by) / (la * lb)).clamp(-1.0, 1.0);
        let mut angle = cos.acos().to_degrees();
        // a vertex turning against the cell orientation is reflex
        if area != 0.0 && turn[k] != 0.0 && turn[k].signum() != area.signum() {
            angle = 360.0 - angle;
        }
        out[k] = angle;
    }
    Ok(out)
}

/// Interior angles (degrees) of every cell, cells in storage order.
pub fn included_angles(mesh: &StructuredMesh) -> Result<Vec<[f64; 4]>> {
    let mut all = Vec::with_capacity(mesh.num_cells());
    for j in 0..mesh.nj() - 1 {
        for i in 0..mesh.ni() - 1 {
            all.push(cell_angles(&mesh.cell(i, j), i, j)?);
        }
    }
    Ok(all)
}

/// Signed shoelace area of every cell; positive for counterclockwise cells.
pub fn cell_areas(mesh: &StructuredMesh) -> Vec<f64> {
    let mut all = Vec::with_capacity(mesh.num_cells());
    for j in 0..mesh.nj() - 1 {
        for i in 0..mesh.ni() - 1 {
            all.push(shoelace(&mesh.cell(i, j)));
        }
    }
    all
}

fn is_inverted(c: &[Point; 4], area: f64) -> bool {
    if area <= 0.0 {
        return true;
    }
    let t = turns(c);
    let pos = t.iter().filter(|v| **v > 0.0).count();
    let neg = t.iter().filter(|v| **v < 0.0).count();
    pos > 0 && neg > 0
}

pub fn quality_report(mesh: &StructuredMesh, elapsed: f64) -> Result<QualityReport> {
    let angles = included_angles(mesh)?;
    let areas = cell_areas(mesh);
    let n = angles.len() as f64;
    let (mut sum_min, mut sum_max, mut sum_area) = (0.0, 0.0, 0.0);
    let mut inverted = 0;
    let mut k = 0;
    for j in 0..mesh.nj() - 1 {
        for i in 0..mesh.ni() - 1 {
            let a = angles[k];
            sum_min += a.iter().copied().fold(f64::INFINITY, f64::min);
            sum_max += a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            sum_area += areas[k].abs();
            if is_inverted(&mesh.cell(i, j), areas[k]) {
                inverted += 1;
            }
            k += 1;
        }
    }
    Ok(QualityReport {
        avg_min_angle: sum_min / n,
        avg_max_angle: sum_max / n,
        avg_cell_area: sum_area / n,
        inverted_cells: inverted,
        generation_time: elapsed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Provenance, StructuredMesh};
    use proptest::prelude::*;

    fn quad(pts: [(f64, f64); 4]) -> StructuredMesh {
        // storage order (0,0) (1,0) (0,1) (1,1) from topological order
        let p = pts.map(Point::from);
        StructuredMesh::new(2, 2, vec![p[0], p[1], p[3], p[2]], Provenance::Tfi).unwrap()
    }

    fn uniform_square(n: usize) -> StructuredMesh {
        let h = 1.0 / (n - 1) as f64;
        let coords = (0..n)
            .flat_map(|j| (0..n).map(move |i| Point::new(i as f64 * h, j as f64 * h)))
            .collect();
        StructuredMesh::new(n, n, coords, Provenance::Tfi).unwrap()
    }

    #[test]
    fn unit_square_angles() {
        let a = included_angles(&quad([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        for v in a[0] {
            assert!((v - 90.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parallelogram_angles() {
        let a = included_angles(&quad([(0.0, 0.0), (1.0, 0.0), (1.5, 1.0), (0.5, 1.0)])).unwrap();
        let acute = (0.5 / 1.25f64.sqrt()).acos().to_degrees();
        let expected = [acute, 180.0 - acute, acute, 180.0 - acute];
        for (v, e) in a[0].iter().zip(expected) {
            assert!((v - e).abs() < 1e-9);
        }
        assert!((acute - 63.4349).abs() < 1e-3);
    }

    #[test]
    fn right_trapezoid_angles() {
        let a = included_angles(&quad([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 2.0)])).unwrap();
        let expected = [90.0, 90.0, 135.0, 45.0];
        for (v, e) in a[0].iter().zip(expected) {
            assert!((v - e).abs() < 1e-9, "{v} vs {e}");
        }
    }

    #[test]
    fn zero_length_edge_names_the_cell() {
        let m = quad([(0.0, 0.0), (0.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(matches!(
            included_angles(&m),
            Err(Error::DegenerateCell { i: 0, j: 0 })
        ));
    }

    #[test]
    fn areas() {
        let m = quad([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(cell_areas(&m), vec![1.0]);
        let cw = quad([(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        assert_eq!(cell_areas(&cw), vec![-1.0]);
        for a in cell_areas(&uniform_square(11)) {
            assert!((a - 0.01).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_report() {
        let r = quality_report(&uniform_square(3), 0.0).unwrap();
        assert_eq!(r.avg_min_angle, 90.0);
        assert_eq!(r.avg_max_angle, 90.0);
        assert_eq!(r.avg_cell_area, 0.25);
        assert_eq!(r.inverted_cells, 0);
    }

    #[test]
    fn one_clockwise_cell_is_inverted() {
        let mut m = uniform_square(3);
        // node (1,0) pushed left of node (0,0) folds cell (0,0) only
        *m.node_mut(1, 0) = Point::new(-0.5, 0.2);
        let areas = cell_areas(&m);
        assert!(areas[0] < 0.0);
        let r = quality_report(&m, 0.0).unwrap();
        assert_eq!(r.inverted_cells, 1);
    }

    #[test]
    fn bow_tie_is_inverted() {
        // self-crossing with a positive net area
        let m = quad([(0.0, 0.0), (2.0, 0.0), (0.0, 1.0), (1.0, 1.2)]);
        let r = quality_report(&m, 0.0).unwrap();
        assert_eq!(r.inverted_cells, 1);
    }

    fn random_convex_quad(params: [f64; 8]) -> [Point; 4] {
        // perturbed square corners stay convex for perturbations < 0.25
        let base = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        std::array::from_fn(|k| {
            Point::new(base[k].0 + params[2 * k], base[k].1 + params[2 * k + 1])
        })
    }

    proptest! {
        #[test]
        fn convex_angles_sum_to_360(p in prop::array::uniform8(-0.24f64..0.24)) {
            let c = random_convex_quad(p);
            let a = cell_angles(&c, 0, 0).unwrap();
            prop_assert!((a.iter().sum::<f64>() - 360.0).abs() < 1e-9);
        }

        #[test]
        fn area_is_rigid_motion_invariant(
            p in prop::array::uniform8(-0.24f64..0.24),
            theta in 0.0f64..std::f64::consts::TAU,
            tx in -10.0f64..10.0,
            ty in -10.0f64..10.0,
        ) {
            let c = random_convex_quad(p);
            let (s, co) = theta.sin_cos();
            let moved = c.map(|q| Point::new(co * q.x - s * q.y + tx, s * q.x + co * q.y + ty));
            prop_assert!((shoelace(&c) - shoelace(&moved)).abs() < 1e-12);
        }
    }

    #[test]
    fn report_is_reproducible() {
        let mut m = uniform_square(6);
        *m.node_mut(2, 3) = Point::new(0.43, 0.57);
        let a = quality_report(&m, 0.0).unwrap();
        let b = quality_report(&m, 0.0).unwrap();
        assert_eq!(a, b);
    }
}
