//! Transfinite interpolation (bilinear Coons patch) of the four boundary
//! curves. This is the algebraic baseline every other generator is compared
//! against.

use crate::error::{Error, Result};
use crate::geometry::{check_corner_compatibility, DomainSpec, Point, Side};
use crate::mesh::{uniform_comp_grid, Provenance, StructuredMesh};

/// Corner tolerance required before blending.
pub const TFI_CORNER_TOL: f64 = 1e-6;

/// Coons patch evaluated at the uniform `ni × nj` lattice. Curve parameters
/// are the normalized grid indices, and boundary nodes are taken directly
/// from the curves so they lie on them exactly.
pub fn tfi_generate(domain: &DomainSpec, ni: usize, nj: usize) -> Result<StructuredMesh> {
    let grid = uniform_comp_grid(ni, nj)?;
    let report = check_corner_compatibility(domain, TFI_CORNER_TOL);
    if !report.pass {
        return Err(Error::IncompatibleCorners {
            max_gap: report.max_gap(),
            tol: TFI_CORNER_TOL,
        });
    }
    let south: Vec<Point> = (0..ni).map(|i| domain.south.eval(grid.xi(i))).collect();
    let north: Vec<Point> = (0..ni).map(|i| domain.north.eval(grid.xi(i))).collect();
    let west: Vec<Point> = (0..nj).map(|j| domain.west.eval(grid.eta(j))).collect();
    let east: Vec<Point> = (0..nj).map(|j| domain.east.eval(grid.eta(j))).collect();
    let c00 = domain.curve(Side::South).start();
    let c10 = domain.curve(Side::South).end();
    let c01 = domain.curve(Side::North).start();
    let c11 = domain.curve(Side::North).end();

    let mut coords = Vec::with_capacity(ni * nj);
    for j in 0..nj {
        let e = grid.eta(j);
        for i in 0..ni {
            let x = grid.xi(i);
            // same corner ownership as the training collocation points
            let p = if j == 0 {
                south[i]
            } else if i == ni - 1 {
                east[j]
            } else if j == nj - 1 {
                north[i]
            } else if i == 0 {
                west[j]
            } else {
                let blend = |f: fn(Point) -> f64| {
                    (1.0 - x) * f(west[j]) + x * f(east[j]) + (1.0 - e) * f(south[i])
                        + e * f(north[i])
                        - ((1.0 - x) * (1.0 - e) * f(c00)
                            + x * (1.0 - e) * f(c10)
                            + (1.0 - x) * e * f(c01)
                            + x * e * f(c11))
                };
                Point::new(blend(|p| p.x), blend(|p| p.y))
            };
            coords.push(p);
        }
    }
    StructuredMesh::new(ni, nj, coords, Provenance::Tfi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundaryCurve;
    use crate::mesh::included_angles;
    use crate::presets;
    use proptest::prelude::*;

    #[test]
    fn unit_square_is_uniform() {
        let m = tfi_generate(&presets::unit_square(), 3, 3).unwrap();
        for j in 0..3 {
            for i in 0..3 {
                let p = m.node(i, j);
                assert!((p.x - i as f64 / 2.0).abs() < 1e-15);
                assert!((p.y - j as f64 / 2.0).abs() < 1e-15);
            }
        }
        for cell in included_angles(&m).unwrap() {
            for a in cell {
                assert!((a - 90.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn identity_curves_reproduce_the_grid() {
        let m = tfi_generate(&presets::unit_square(), 7, 4).unwrap();
        let g = uniform_comp_grid(7, 4).unwrap();
        for (p, (xi, eta)) in m.coords().iter().zip(g.nodes()) {
            assert!((p.x - xi).abs() < 1e-15 && (p.y - eta).abs() < 1e-15);
        }
    }

    #[test]
    fn annulus_boundary_nodes_lie_on_curves() {
        let (r0, r1) = (1.0, 2.0);
        let m = tfi_generate(&presets::quarter_annulus(r0, r1), 9, 13).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        for j in 0..13 {
            let th = half_pi * j as f64 / 12.0;
            let inner = m.node(0, j);
            let outer = m.node(8, j);
            assert!((inner.x.hypot(inner.y) - r0).abs() < 1e-12);
            assert!((outer.x.hypot(outer.y) - r1).abs() < 1e-12);
            assert!((inner.y.atan2(inner.x) - th).abs() < 1e-12);
        }
        for i in 0..9 {
            let r = r0 + (r1 - r0) * i as f64 / 8.0;
            assert!(m.node(i, 0).dist(Point::new(r, 0.0)) < 1e-12);
            assert!(m.node(i, 12).dist(Point::new(0.0, r)) < 1e-12);
        }
    }

    #[test]
    fn open_corner_is_rejected() {
        let mut d = presets::unit_square();
        d.east = BoundaryCurve::segment((1.0, 0.001), (1.0, 1.0));
        assert!(matches!(
            tfi_generate(&d, 3, 3),
            Err(Error::IncompatibleCorners { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn affine_equivariance(
            a in prop::array::uniform4(-2.0f64..2.0),
            b in prop::array::uniform2(-5.0f64..5.0),
            bumps in prop::array::uniform8(-0.3f64..0.3),
        ) {
            // straight edges keep their parameterization under affine maps
            let f = |p: Point| Point::new(a[0] * p.x + a[1] * p.y + b[0], a[2] * p.x + a[3] * p.y + b[1]);
            let c = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
            let corners: [Point; 4] = std::array::from_fn(|k| {
                Point::new(c[k].0 + bumps[2 * k], c[k].1 + bumps[2 * k + 1])
            });
            let build = |g: &dyn Fn(Point) -> Point| {
                let k = corners.map(g);
                DomainSpec::new(
                    BoundaryCurve::segment(k[0], k[1]),
                    BoundaryCurve::segment(k[1], k[2]),
                    BoundaryCurve::segment(k[3], k[2]),
                    BoundaryCurve::segment(k[0], k[3]),
                )
            };
            let base = tfi_generate(&build(&|p| p), 6, 5).unwrap();
            let mapped = tfi_generate(&build(&f), 6, 5).unwrap();
            for (p, q) in base.coords().iter().zip(mapped.coords()) {
                let r = f(*p);
                prop_assert!((r.x - q.x).abs() < 1e-10 && (r.y - q.y).abs() < 1e-10);
            }
        }
    }
}
