//! Exact derivatives for the network map.
//!
//! * [`HyperDual`] gives exact first and mixed second input derivatives in
//!   one forward pass per seed pair.
//! * [`Tape`] / [`Var`] record primitive real operations for reverse-mode
//!   parameter gradients.
//!
//! Both share the [`Scalar`] abstraction, so `HyperDual<Var>` records the
//! arithmetic of every hyper-dual component on the tape.

mod hyperdual;
mod scalar;
mod tape;

pub use hyperdual::{HyperDual, SINGULARITY_GUARD};
pub use scalar::Scalar;
pub use tape::{Slot, Tape, Var};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    type Hd = HyperDual<f64>;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cube_at_two() {
        let x = Hd::seeded(2.0, 1.0, 1.0);
        let y = x * x * x;
        assert_eq!((y.re, y.d1, y.d2, y.d12), (8.0, 12.0, 12.0, 12.0));
        let p = x.powi(3);
        assert_eq!((p.re, p.d1, p.d2, p.d12), (8.0, 12.0, 12.0, 12.0));
    }

    #[test]
    fn tanh_at_zero() {
        let y = Hd::seeded(0.0, 1.0, 0.0).tanh();
        assert_eq!((y.re, y.d1, y.d2, y.d12), (0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn mixed_partial_of_product() {
        let x = Hd::seeded(2.0, 1.0, 0.0);
        let y = Hd::seeded(3.0, 0.0, 1.0);
        let p = x * y;
        assert_eq!(p.re, 6.0);
        assert_eq!(p.d1, 3.0);
        assert_eq!(p.d2, 2.0);
        assert_eq!(p.d12, 1.0);
    }

    #[test]
    fn singular_operations_name_the_op() {
        let zero = Hd::seeded(0.0, 1.0, 1.0);
        let one = Hd::seeded(1.0, 0.0, 0.0);
        match one.checked_div(zero) {
            Err(Error::Domain { op, .. }) => assert_eq!(op, "div"),
            other => panic!("expected domain error, got {other:?}"),
        }
        match Hd::seeded(std::f64::consts::FRAC_PI_2, 1.0, 1.0).tan() {
            Err(Error::Domain { op, .. }) => assert_eq!(op, "tan"),
            other => panic!("expected domain error, got {other:?}"),
        }
        match zero.cot() {
            Err(Error::Domain { op, .. }) => assert_eq!(op, "cot"),
            other => panic!("expected domain error, got {other:?}"),
        }
        match (-one).pow(one) {
            Err(Error::Domain { op, .. }) => assert_eq!(op, "pow"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    /// Closed-form (f, f', f'') library checked along a single seed
    /// direction (d1 = d2 = 1), where d12 must equal f''.
    #[test]
    fn unary_library_matches_closed_forms() {
        let x0 = 0.37_f64;
        let sig = |x: f64| 1.0 / (1.0 + (-x).exp());
        #[allow(clippy::type_complexity)]
        let cases: Vec<(&str, Box<dyn Fn(Hd) -> Hd>, f64, f64, f64)> = vec![
            (
                "tanh",
                Box::new(|h: Hd| h.tanh()),
                x0.tanh(),
                1.0 - x0.tanh().powi(2),
                -2.0 * x0.tanh() * (1.0 - x0.tanh().powi(2)),
            ),
            (
                "sigmoid",
                Box::new(|h: Hd| h.sigmoid()),
                sig(x0),
                sig(x0) * (1.0 - sig(x0)),
                sig(x0) * (1.0 - sig(x0)) * (1.0 - 2.0 * sig(x0)),
            ),
            ("sin", Box::new(|h: Hd| h.sin()), x0.sin(), x0.cos(), -x0.sin()),
            ("cos", Box::new(|h: Hd| h.cos()), x0.cos(), -x0.sin(), -x0.cos()),
            (
                "tan",
                Box::new(|h: Hd| h.tan().unwrap()),
                x0.tan(),
                1.0 / x0.cos().powi(2),
                2.0 * x0.sin() / x0.cos().powi(3),
            ),
            (
                "cot",
                Box::new(|h: Hd| h.cot().unwrap()),
                1.0 / x0.tan(),
                -1.0 / x0.sin().powi(2),
                2.0 * x0.cos() / x0.sin().powi(3),
            ),
            ("exp", Box::new(|h: Hd| h.exp()), x0.exp(), x0.exp(), x0.exp()),
            (
                "ln",
                Box::new(|h: Hd| h.ln().unwrap()),
                x0.ln(),
                1.0 / x0,
                -1.0 / (x0 * x0),
            ),
            (
                "recip",
                Box::new(|h: Hd| Hd::seeded(1.0, 0.0, 0.0).checked_div(h).unwrap()),
                1.0 / x0,
                -1.0 / (x0 * x0),
                2.0 / x0.powi(3),
            ),
            (
                "x^2.5",
                Box::new(|h: Hd| h.pow(Hd::seeded(2.5, 0.0, 0.0)).unwrap()),
                x0.powf(2.5),
                2.5 * x0.powf(1.5),
                3.75 * x0.powf(0.5),
            ),
            (
                "x^5",
                Box::new(|h: Hd| h.powi(5)),
                x0.powi(5),
                5.0 * x0.powi(4),
                20.0 * x0.powi(3),
            ),
        ];
        for (name, f, v, d, dd) in cases {
            let y = f(Hd::seeded(x0, 1.0, 1.0));
            assert!(close(y.re, v, 1e-12), "{name} value");
            assert!(close(y.d1, d, 1e-12), "{name} d1");
            assert!(close(y.d2, d, 1e-12), "{name} d2");
            assert!(close(y.d12, dd, 1e-12), "{name} d12 {} vs {}", y.d12, dd);
        }
    }

    #[test]
    fn bivariate_composition_matches_hand_derivatives() {
        // f(x, y) = tanh(x·y) + x²·y³ at (0.3, -0.8)
        let (x0, y0) = (0.3_f64, -0.8_f64);
        let f = |x: Hd, y: Hd| (x * y).tanh() + x.powi(2) * y.powi(3);
        let t = (x0 * y0).tanh();
        let sech2 = 1.0 - t * t;
        let fx = y0 * sech2 + 2.0 * x0 * y0.powi(3);
        let fy = x0 * sech2 + 3.0 * x0 * x0 * y0 * y0;
        let fxx = -2.0 * t * sech2 * y0 * y0 + 2.0 * y0.powi(3);
        let fyy = -2.0 * t * sech2 * x0 * x0 + 6.0 * x0 * x0 * y0;
        let fxy = sech2 - 2.0 * t * sech2 * x0 * y0 + 6.0 * x0 * y0 * y0;

        let r = f(Hd::seeded(x0, 1.0, 0.0), Hd::seeded(y0, 0.0, 1.0));
        assert!(close(r.d1, fx, 1e-12));
        assert!(close(r.d2, fy, 1e-12));
        assert!(close(r.d12, fxy, 1e-12));
        let rxx = f(Hd::seeded(x0, 1.0, 1.0), Hd::seeded(y0, 0.0, 0.0));
        assert!(close(rxx.d12, fxx, 1e-12));
        let ryy = f(Hd::seeded(x0, 0.0, 0.0), Hd::seeded(y0, 1.0, 1.0));
        assert!(close(ryy.d12, fyy, 1e-12));
    }

    #[test]
    fn taped_hyperdual_matches_plain_hyperdual() {
        let tape = Tape::new();
        let w = tape.param(0.7);
        let x = Hd::seeded(0.2, 1.0, 1.0).lift(w);
        let y = (x * HyperDual::real(w)).tanh().sigmoid();
        let plain = (Hd::seeded(0.2, 1.0, 1.0) * Hd::seeded(0.7, 0.0, 0.0))
            .tanh()
            .sigmoid();
        assert_eq!(y.re.value(), plain.re);
        assert_eq!(y.d1.value(), plain.d1);
        assert_eq!(y.d12.value(), plain.d12);
    }

    proptest! {
        #[test]
        fn product_rule_holds(
            a in prop::array::uniform4(-3.0f64..3.0),
            b in prop::array::uniform4(-3.0f64..3.0),
        ) {
            let u = Hd::new(a[0], a[1], a[2], a[3]);
            let v = Hd::new(b[0], b[1], b[2], b[3]);
            let p = u * v;
            let expected = u.re * v.d12 + u.d1 * v.d2 + u.d2 * v.d1 + u.d12 * v.re;
            prop_assert!((p.d12 - expected).abs() <= 1e-12);
        }

        #[test]
        fn unary_chain_rule_holds(a in prop::array::uniform4(-2.0f64..2.0)) {
            let u = Hd::new(a[0], a[1], a[2], a[3]);
            let t = u.re.tanh();
            let (f1, f2) = (1.0 - t * t, -2.0 * t * (1.0 - t * t));
            let r = u.tanh();
            let expected = f2 * u.d1 * u.d2 + f1 * u.d12;
            prop_assert!((r.d12 - expected).abs() <= 1e-12);
        }

        /// d(f(w))/dw through the d12 channel of a taped hyper-dual
        /// against a central difference of the plain evaluation.
        #[test]
        fn gradient_through_second_derivative(w0 in -1.5f64..1.5, x0 in -1.0f64..1.0) {
            let d12_of = |w: f64| {
                let x = Hd::seeded(x0, 1.0, 1.0);
                (x * Hd::seeded(w, 0.0, 0.0)).tanh().sin().d12
            };
            let tape = Tape::new();
            let w = tape.param(w0);
            let x = Hd::seeded(x0, 1.0, 1.0).lift(w);
            let out = (x * HyperDual::real(w)).tanh().sin().d12;
            let g = tape.backprop(out.slot()).unwrap()[0];
            let h = 1e-5;
            let fd = (d12_of(w0 + h) - d12_of(w0 - h)) / (2.0 * h);
            prop_assert!((g - fd).abs() <= 1e-4 * fd.abs().max(1.0), "{g} vs {fd}");
        }
    }
}
