//! Built-in analytic test domains.

use std::f64::consts::FRAC_PI_2;

use crate::geometry::{Analytic, BoundaryCurve, DomainSpec, Point};

pub const PRESET_NAMES: [&str; 5] = [
    "unit_square",
    "quarter_annulus",
    "wavy_channel",
    "s_duct",
    "polyline_L",
];

/// `[0, 1]²` with identity-parameterized edges.
pub fn unit_square() -> DomainSpec {
    DomainSpec::new(
        BoundaryCurve::segment((0.0, 0.0), (1.0, 0.0)),
        BoundaryCurve::segment((1.0, 0.0), (1.0, 1.0)),
        BoundaryCurve::segment((0.0, 1.0), (1.0, 1.0)),
        BoundaryCurve::segment((0.0, 0.0), (0.0, 1.0)),
    )
}

/// First-quadrant annulus sector. ξ runs radially, η runs with the angle.
pub fn quarter_annulus(r0: f64, r1: f64) -> DomainSpec {
    DomainSpec::new(
        BoundaryCurve::segment((r0, 0.0), (r1, 0.0)),
        BoundaryCurve::arc((0.0, 0.0), r1, 0.0, FRAC_PI_2),
        BoundaryCurve::segment((0.0, r0), (0.0, r1)),
        BoundaryCurve::arc((0.0, 0.0), r0, 0.0, FRAC_PI_2),
    )
}

/// Channel `[0, 2] × [0, 1]` whose walls carry `waves` sine periods.
pub fn wavy_channel(amplitude: f64, waves: f64) -> DomainSpec {
    let wave = |y: f64| {
        BoundaryCurve::Analytic(Analytic::Wave {
            from: Point::new(0.0, y),
            to: Point::new(2.0, y),
            amplitude,
            waves,
        })
    };
    DomainSpec::new(
        wave(0.0),
        BoundaryCurve::segment((2.0, 0.0), (2.0, 1.0)),
        wave(1.0),
        BoundaryCurve::segment((0.0, 0.0), (0.0, 1.0)),
    )
}

/// Unit-height duct that shifts up by `offset` over a length of 3.
pub fn s_duct(offset: f64) -> DomainSpec {
    let ramp = |y: f64| {
        BoundaryCurve::Analytic(Analytic::CosineRamp {
            from: Point::new(0.0, y),
            to: Point::new(3.0, y + offset),
        })
    };
    DomainSpec::new(
        ramp(0.0),
        BoundaryCurve::segment((3.0, offset), (3.0, offset + 1.0)),
        ramp(1.0),
        BoundaryCurve::segment((0.0, 0.0), (0.0, 1.0)),
    )
}

/// L-shaped region with the re-entrant corner on the north polyline.
pub fn polyline_l() -> DomainSpec {
    let p = Point::new;
    DomainSpec::new(
        BoundaryCurve::polyline(vec![p(0.0, 0.0), p(2.0, 0.0)]).expect("valid polyline"),
        BoundaryCurve::polyline(vec![p(2.0, 0.0), p(2.0, 1.0)]).expect("valid polyline"),
        BoundaryCurve::polyline(vec![p(0.0, 2.0), p(1.0, 2.0), p(1.0, 1.0), p(2.0, 1.0)])
            .expect("valid polyline"),
        BoundaryCurve::polyline(vec![p(0.0, 0.0), p(0.0, 2.0)]).expect("valid polyline"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::check_corner_compatibility;

    #[test]
    fn presets_are_corner_compatible() {
        for d in [
            unit_square(),
            quarter_annulus(1.0, 2.0),
            wavy_channel(0.1, 2.0),
            s_duct(1.0),
            polyline_l(),
        ] {
            let r = check_corner_compatibility(&d, 1e-12);
            assert!(r.pass, "{:?}", r.gaps);
            assert!(d.area() > 0.0);
        }
    }

    #[test]
    fn quarter_annulus_area() {
        let a = quarter_annulus(1.0, 2.0).area();
        let exact = std::f64::consts::PI * 3.0 / 4.0;
        assert!((a - exact).abs() < 1e-3, "{a}");
    }
}
