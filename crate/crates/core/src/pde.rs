//! Governing-equation residuals of a map `(ξ, η) ↦ (x, y)`, evaluated on
//! its second-order jet.
//!
//! Every residual is generic over [`Scalar`] so the same code serves plain
//! evaluation and taped evaluation during training.

use serde::{Deserialize, Serialize};

use crate::autodiff::{HyperDual, Scalar};
use crate::error::{Error, Result};

/// Value, first and second partials of `(x, y)` with respect to `(ξ, η)`.
/// The single mixed partial stands for both orders of differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderJet<S = f64> {
    pub x: S,
    pub y: S,
    pub x_xi: S,
    pub x_eta: S,
    pub y_xi: S,
    pub y_eta: S,
    pub x_xixi: S,
    pub x_etaeta: S,
    pub x_xieta: S,
    pub y_xixi: S,
    pub y_etaeta: S,
    pub y_xieta: S,
}

/// Tolerance for agreement between the three seeded passes.
pub const PASS_CONSISTENCY_TOL: f64 = 1e-12;

impl<S: Scalar> SecondOrderJet<S> {
    /// Assembles a jet from the outputs `[x, y]` of three forward passes
    /// seeded `(ξ,ξ)`, `(η,η)` and `(ξ,η)`.
    pub fn from_passes(
        xixi: [HyperDual<S>; 2],
        etaeta: [HyperDual<S>; 2],
        xieta: [HyperDual<S>; 2],
    ) -> Result<Self> {
        for k in 0..2 {
            let checks = [
                (xixi[k].re, xieta[k].re),
                (etaeta[k].re, xieta[k].re),
                (xixi[k].d1, xieta[k].d1),
                (etaeta[k].d2, xieta[k].d2),
            ];
            for (a, b) in checks {
                let (a, b) = (a.value(), b.value());
                if !((a - b).abs() <= PASS_CONSISTENCY_TOL * a.abs().max(b.abs()).max(1.0)) {
                    return Err(Error::Domain {
                        op: "jet",
                        detail: format!("seeded passes disagree: {a} vs {b}"),
                    });
                }
            }
        }
        let [x, y] = xieta;
        Ok(SecondOrderJet {
            x: x.re,
            y: y.re,
            x_xi: x.d1,
            x_eta: x.d2,
            y_xi: y.d1,
            y_eta: y.d2,
            x_xixi: xixi[0].d12,
            x_etaeta: etaeta[0].d12,
            x_xieta: x.d12,
            y_xixi: xixi[1].d12,
            y_etaeta: etaeta[1].d12,
            y_xieta: y.d12,
        })
    }

    pub fn map(self, f: impl Fn(S) -> S) -> Self {
        SecondOrderJet {
            x: f(self.x),
            y: f(self.y),
            x_xi: f(self.x_xi),
            x_eta: f(self.x_eta),
            y_xi: f(self.y_xi),
            y_eta: f(self.y_eta),
            x_xixi: f(self.x_xixi),
            x_etaeta: f(self.x_etaeta),
            x_xieta: f(self.x_xieta),
            y_xixi: f(self.y_xixi),
            y_etaeta: f(self.y_etaeta),
            y_xieta: f(self.y_xieta),
        }
    }

    /// Jet of `((x − ox)/scale, (y − oy)/scale)`.
    pub fn normalized(self, ox: f64, oy: f64, scale: f64) -> Self {
        let inv = 1.0 / scale;
        let mut j = self.map(|v| v * inv);
        j.x = (self.x - ox) * inv;
        j.y = (self.y - oy) * inv;
        j
    }

    /// Swaps the roles of `x`/`y` and of `ξ`/`η` simultaneously.
    pub fn swapped(self) -> Self {
        SecondOrderJet {
            x: self.y,
            y: self.x,
            x_xi: self.y_eta,
            x_eta: self.y_xi,
            y_xi: self.x_eta,
            y_eta: self.x_xi,
            x_xixi: self.y_etaeta,
            x_etaeta: self.y_xixi,
            x_xieta: self.y_xieta,
            y_xixi: self.x_etaeta,
            y_etaeta: self.x_xixi,
            y_xieta: self.x_xieta,
        }
    }

    pub fn values(&self) -> [S; 12] {
        [
            self.x,
            self.y,
            self.x_xi,
            self.x_eta,
            self.y_xi,
            self.y_eta,
            self.x_xixi,
            self.x_etaeta,
            self.x_xieta,
            self.y_xixi,
            self.y_etaeta,
            self.y_xieta,
        ]
    }
}

impl SecondOrderJet<f64> {
    /// Jet of the identity map `x = ξ, y = η` at `(ξ, η)`.
    pub fn identity(xi: f64, eta: f64) -> Self {
        SecondOrderJet {
            x: xi,
            y: eta,
            x_xi: 1.0,
            y_eta: 1.0,
            ..Self::zero()
        }
    }

    pub fn zero() -> Self {
        SecondOrderJet {
            x: 0.0,
            y: 0.0,
            x_xi: 0.0,
            x_eta: 0.0,
            y_xi: 0.0,
            y_eta: 0.0,
            x_xixi: 0.0,
            x_etaeta: 0.0,
            x_xieta: 0.0,
            y_xixi: 0.0,
            y_etaeta: 0.0,
            y_xieta: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLame")]
pub struct LameConstants {
    pub lambda: f64,
    pub mu: f64,
}

#[derive(Deserialize)]
struct RawLame {
    lambda: f64,
    mu: f64,
}

impl TryFrom<RawLame> for LameConstants {
    type Error = Error;
    fn try_from(r: RawLame) -> Result<Self> {
        LameConstants::new(r.lambda, r.mu)
    }
}

impl LameConstants {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && lambda + mu > 0.0) || !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::invalid(format!(
                "Lamé constants need mu > 0 and lambda + mu > 0, got lambda={lambda}, mu={mu}"
            )));
        }
        Ok(LameConstants { lambda, mu })
    }

    pub fn scaled(self, t: f64) -> Result<Self> {
        Self::new(self.lambda * t, self.mu * t)
    }
}

impl Default for LameConstants {
    fn default() -> Self {
        LameConstants {
            lambda: 1.0,
            mu: 0.35,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Governing {
    NavierLame,
    Laplace,
    Hyperbolic,
    MongeAmpere,
}

impl Governing {
    pub const ALL: [Governing; 4] = [
        Governing::Hyperbolic,
        Governing::MongeAmpere,
        Governing::Laplace,
        Governing::NavierLame,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Governing::NavierLame => "navier_lame",
            Governing::Laplace => "laplace",
            Governing::Hyperbolic => "hyperbolic",
            Governing::MongeAmpere => "monge_ampere",
        }
    }
}

/// Which cross-metric term the Laplace residual uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplaceForm {
    /// `g12 = x_ξ x_η + y_ξ y_η`.
    #[default]
    Winslow,
    /// `x_ξ x_η + y_ξ x_η`, kept for comparison.
    AsPrinted,
}

pub fn navier_lame_residual<S: Scalar>(j: &SecondOrderJet<S>, k: &LameConstants) -> (S, S) {
    let (l, m) = (k.lambda, k.mu);
    let r1 = (j.x_xixi + j.y_xieta) * l + (j.x_xixi * 2.0 + j.x_etaeta + j.y_xieta) * m;
    let r2 = (j.x_xieta + j.y_xixi + j.y_etaeta * 2.0) * m + (j.x_xieta + j.y_etaeta) * l;
    (r1, r2)
}

pub fn laplace_residual<S: Scalar>(j: &SecondOrderJet<S>, form: LaplaceForm) -> (S, S) {
    let g11 = j.x_xi * j.x_xi + j.y_xi * j.y_xi;
    let g22 = j.x_eta * j.x_eta + j.y_eta * j.y_eta;
    let g12 = match form {
        LaplaceForm::Winslow => j.x_xi * j.x_eta + j.y_xi * j.y_eta,
        LaplaceForm::AsPrinted => j.x_xi * j.x_eta + j.y_xi * j.x_eta,
    };
    let r1 = j.x_xixi * g22 - j.x_xieta * g12 * 2.0 + j.x_etaeta * g11;
    let r2 = j.y_xixi * g22 - j.y_xieta * g12 * 2.0 + j.y_etaeta * g11;
    (r1, r2)
}

/// Orthogonality and cell-area conditions with reference area `s`.
pub fn hyperbolic_residual<S: Scalar>(j: &SecondOrderJet<S>, s: f64) -> (S, S) {
    let r1 = j.x_xi * j.x_eta + j.y_xi * j.y_eta;
    let r2 = j.x_xi * j.y_eta - j.y_xi * j.x_eta - s;
    (r1, r2)
}

pub fn monge_ampere_residual<S: Scalar>(j: &SecondOrderJet<S>) -> (S, S) {
    let r1 = j.x_xixi * j.x_etaeta - j.x_xieta * j.x_xieta - j.x_xi * j.x_xi + j.x_eta * j.x_eta;
    let r2 = j.y_xixi * j.y_etaeta - j.y_xieta * j.y_xieta - j.y_xi * j.y_xi + j.y_eta * j.y_eta;
    (r1, r2)
}

/// A governing equation together with its coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub governing: Governing,
    pub lame: LameConstants,
    pub laplace_form: LaplaceForm,
    /// Reference area for the hyperbolic system.
    pub reference_area: f64,
}

impl Residual {
    pub fn eval<S: Scalar>(&self, j: &SecondOrderJet<S>) -> (S, S) {
        match self.governing {
            Governing::NavierLame => navier_lame_residual(j, &self.lame),
            Governing::Laplace => laplace_residual(j, self.laplace_form),
            Governing::Hyperbolic => hyperbolic_residual(j, self.reference_area),
            Governing::MongeAmpere => monge_ampere_residual(j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k() -> LameConstants {
        LameConstants::default()
    }

    fn affine(c: [f64; 6], xi: f64, eta: f64) -> SecondOrderJet {
        SecondOrderJet {
            x: c[0] + c[1] * xi + c[2] * eta,
            y: c[3] + c[4] * xi + c[5] * eta,
            x_xi: c[1],
            x_eta: c[2],
            y_xi: c[4],
            y_eta: c[5],
            ..SecondOrderJet::zero()
        }
    }

    #[test]
    fn identity_solves_navier_lame() {
        assert_eq!(navier_lame_residual(&SecondOrderJet::identity(0.3, 0.7), &k()), (0.0, 0.0));
    }

    #[test]
    fn navier_lame_single_second_partial() {
        let j = SecondOrderJet {
            x_xixi: 2.0,
            ..SecondOrderJet::zero()
        };
        let (r1, r2) = navier_lame_residual(&j, &k());
        assert!((r1 - 3.4).abs() < 1e-15);
        assert_eq!(r2, 0.0);
    }

    #[test]
    fn lame_validation() {
        assert!(LameConstants::new(1.0, 0.0).is_err());
        assert!(LameConstants::new(-1.0, 0.5).is_err());
        assert!(LameConstants::new(-0.2, 0.35).is_ok());
        let parsed: std::result::Result<LameConstants, _> =
            serde_json::from_str(r#"{"lambda": 1.0, "mu": -1.0}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn laplace_examples() {
        assert_eq!(laplace_residual(&SecondOrderJet::identity(0.1, 0.2), LaplaceForm::Winslow), (0.0, 0.0));
        // x = ξ², y = η at ξ = 0.5
        let j = SecondOrderJet {
            x: 0.25,
            y: 0.5,
            x_xi: 1.0,
            y_eta: 1.0,
            x_xixi: 2.0,
            ..SecondOrderJet::zero()
        };
        let (r1, r2) = laplace_residual(&j, LaplaceForm::Winslow);
        assert!((r1 - 2.0).abs() < 1e-15 && r2 == 0.0);
    }

    #[test]
    fn as_printed_laplace_differs_from_winslow() {
        let j = SecondOrderJet {
            x_xi: 1.0,
            x_eta: 0.5,
            y_xi: 0.2,
            y_eta: 1.0,
            x_xieta: 1.0,
            ..SecondOrderJet::zero()
        };
        let (w, _) = laplace_residual(&j, LaplaceForm::Winslow);
        let (p, _) = laplace_residual(&j, LaplaceForm::AsPrinted);
        // g12 is 0.7 vs 0.6
        assert!((w - -1.4).abs() < 1e-15);
        assert!((p - -1.2).abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_examples() {
        let id = SecondOrderJet::identity(0.5, 0.5);
        assert_eq!(hyperbolic_residual(&id, 1.0), (0.0, 0.0));
        assert_eq!(hyperbolic_residual(&id, 0.5), (0.0, 0.5));
        let twice = SecondOrderJet {
            x_xi: 2.0,
            y_eta: 2.0,
            ..SecondOrderJet::zero()
        };
        assert_eq!(hyperbolic_residual(&twice, 4.0), (0.0, 0.0));
        assert_eq!(hyperbolic_residual(&SecondOrderJet::zero(), 0.3), (0.0, -0.3));
    }

    #[test]
    fn monge_ampere_examples() {
        assert_eq!(monge_ampere_residual(&SecondOrderJet::identity(0.2, 0.9)), (-1.0, 1.0));
        assert_eq!(monge_ampere_residual(&SecondOrderJet::zero()), (0.0, 0.0));
    }

    #[test]
    fn zero_jet_residuals() {
        let z = SecondOrderJet::zero();
        assert_eq!(navier_lame_residual(&z, &k()), (0.0, 0.0));
        assert_eq!(laplace_residual(&z, LaplaceForm::Winslow), (0.0, 0.0));
    }

    fn random_jet(rng: &mut ChaCha8Rng) -> SecondOrderJet {
        let v: [f64; 12] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        SecondOrderJet {
            x: v[0],
            y: v[1],
            x_xi: v[2],
            x_eta: v[3],
            y_xi: v[4],
            y_eta: v[5],
            x_xixi: v[6],
            x_etaeta: v[7],
            x_xieta: v[8],
            y_xixi: v[9],
            y_etaeta: v[10],
            y_xieta: v[11],
        }
    }

    /// Jet of `R·(x, y)` for a rotation by `th`.
    fn rotate(j: &SecondOrderJet, th: f64) -> SecondOrderJet {
        let (s, c) = th.sin_cos();
        let pairs = [
            (j.x, j.y),
            (j.x_xi, j.y_xi),
            (j.x_eta, j.y_eta),
            (j.x_xixi, j.y_xixi),
            (j.x_etaeta, j.y_etaeta),
            (j.x_xieta, j.y_xieta),
        ];
        let r = pairs.map(|(a, b)| (c * a - s * b, s * a + c * b));
        SecondOrderJet {
            x: r[0].0,
            y: r[0].1,
            x_xi: r[1].0,
            y_xi: r[1].1,
            x_eta: r[2].0,
            y_eta: r[2].1,
            x_xixi: r[3].0,
            y_xixi: r[3].1,
            x_etaeta: r[4].0,
            y_etaeta: r[4].1,
            x_xieta: r[5].0,
            y_xieta: r[5].1,
        }
    }

    #[test]
    fn laplace_magnitude_is_rotation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let j = random_jet(&mut rng);
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let (a1, a2) = laplace_residual(&j, LaplaceForm::Winslow);
            let (b1, b2) = laplace_residual(&rotate(&j, th), LaplaceForm::Winslow);
            assert!((a1.hypot(a2) - b1.hypot(b2)).abs() < 1e-12);
        }
    }

    #[test]
    fn monge_ampere_swap_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let j = random_jet(&mut rng);
            let (r1, r2) = monge_ampere_residual(&j);
            let (s1, s2) = monge_ampere_residual(&j.swapped());
            // swapping ξ/η flips the sign of the first-derivative terms
            let flip = |r: f64, f: f64, g: f64| r + 2.0 * (f * f - g * g);
            assert!((s1 - flip(r2, j.y_xi, j.y_eta)).abs() < 1e-12);
            assert!((s2 - flip(r1, j.x_xi, j.x_eta)).abs() < 1e-12);
        }
    }

    #[test]
    fn monge_ampere_field_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let j = random_jet(&mut rng);
            let f = SecondOrderJet {
                x: j.y,
                y: j.x,
                x_xi: j.y_xi,
                x_eta: j.y_eta,
                y_xi: j.x_xi,
                y_eta: j.x_eta,
                x_xixi: j.y_xixi,
                x_etaeta: j.y_etaeta,
                x_xieta: j.y_xieta,
                y_xixi: j.x_xixi,
                y_etaeta: j.x_etaeta,
                y_xieta: j.x_xieta,
            };
            let (r1, r2) = monge_ampere_residual(&j);
            assert_eq!(monge_ampere_residual(&f), (r2, r1));
        }
    }

    #[test]
    fn homogeneity_in_lame_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let j = random_jet(&mut rng);
            let t = rng.random_range(0.1..10.0);
            let (a1, a2) = navier_lame_residual(&j, &k());
            let (b1, b2) = navier_lame_residual(&j, &k().scaled(t).unwrap());
            assert!((b1 - t * a1).abs() <= 1e-12 * b1.abs().max(1.0));
            assert!((b2 - t * a2).abs() <= 1e-12 * b2.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn affine_jets_solve_navier_lame_and_laplace(
            c in prop::array::uniform6(-10.0f64..10.0),
            xi in 0.0f64..1.0,
            eta in 0.0f64..1.0,
        ) {
            let j = affine(c, xi, eta);
            let (a, b) = navier_lame_residual(&j, &k());
            prop_assert!(a.abs() <= 1e-12 && b.abs() <= 1e-12);
            let (a, b) = laplace_residual(&j, LaplaceForm::Winslow);
            prop_assert!(a.abs() <= 1e-12 && b.abs() <= 1e-12);
        }
    }

    /// `x = a sin(bξ + cη) + d ξ²η + e η³`, `y = p cos(qξ − rη) + s ξη²`,
    /// differentiated by hand.
    struct Analytic {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        e: f64,
        p: f64,
        q: f64,
        r: f64,
        s: f64,
    }

    impl Analytic {
        fn random(rng: &mut ChaCha8Rng) -> Self {
            let mut u = || rng.random_range(-1.5..1.5);
            Analytic {
                a: u(),
                b: u(),
                c: u(),
                d: u(),
                e: u(),
                p: u(),
                q: u(),
                r: u(),
                s: u(),
            }
        }

        fn symbolic(&self, xi: f64, eta: f64) -> SecondOrderJet {
            let Analytic { a, b, c, d, e, p, q, r, s } = *self;
            let (sn, cs) = (b * xi + c * eta).sin_cos();
            let (sm, cm) = (q * xi - r * eta).sin_cos();
            SecondOrderJet {
                x: a * sn + d * xi * xi * eta + e * eta.powi(3),
                y: p * cm + s * xi * eta * eta,
                x_xi: a * b * cs + 2.0 * d * xi * eta,
                x_eta: a * c * cs + d * xi * xi + 3.0 * e * eta * eta,
                y_xi: -p * q * sm + s * eta * eta,
                y_eta: p * r * sm + 2.0 * s * xi * eta,
                x_xixi: -a * b * b * sn + 2.0 * d * eta,
                x_etaeta: -a * c * c * sn + 6.0 * e * eta,
                x_xieta: -a * b * c * sn + 2.0 * d * xi,
                y_xixi: -p * q * q * cm,
                y_etaeta: -p * r * r * cm + 2.0 * s * xi,
                y_xieta: p * q * r * cm + 2.0 * s * eta,
            }
        }

        fn hyper(&self, xi: HyperDual<f64>, eta: HyperDual<f64>) -> [HyperDual<f64>; 2] {
            let k = |v: f64| HyperDual::real(v);
            let arg = xi.scale(self.b) + eta.scale(self.c);
            let x = arg.sin().scale(self.a) + xi * xi * eta.scale(self.d) + eta.powi(3).scale(self.e);
            let arg2 = xi.scale(self.q) - eta.scale(self.r);
            let y = arg2.cos().scale(self.p) + xi * eta * eta * k(self.s);
            [x, y]
        }
    }

    fn jet_of(m: &Analytic, xi: f64, eta: f64) -> SecondOrderJet {
        let pass = |a: (f64, f64), b: (f64, f64)| {
            m.hyper(HyperDual::seeded(xi, a.0, b.0), HyperDual::seeded(eta, a.1, b.1))
        };
        let (e1, e2) = ((1.0, 0.0), (0.0, 1.0));
        SecondOrderJet::from_passes(pass(e1, e1), pass(e2, e2), pass(e1, e2)).unwrap()
    }

    /// Residuals written out longhand from symbolic partials.
    fn oracle(j: &SecondOrderJet, which: Governing, s: f64) -> (f64, f64) {
        let (l, m) = (1.0, 0.35);
        match which {
            Governing::NavierLame => (
                l * j.x_xixi + l * j.y_xieta + 2.0 * m * j.x_xixi + m * j.x_etaeta + m * j.y_xieta,
                m * j.x_xieta + m * j.y_xixi + 2.0 * m * j.y_etaeta + l * j.x_xieta + l * j.y_etaeta,
            ),
            Governing::Laplace => {
                let alpha = j.x_eta.powi(2) + j.y_eta.powi(2);
                let beta = j.x_xi * j.x_eta + j.y_xi * j.y_eta;
                let gamma = j.x_xi.powi(2) + j.y_xi.powi(2);
                (
                    alpha * j.x_xixi - 2.0 * beta * j.x_xieta + gamma * j.x_etaeta,
                    alpha * j.y_xixi - 2.0 * beta * j.y_xieta + gamma * j.y_etaeta,
                )
            }
            Governing::Hyperbolic => (
                j.x_xi * j.x_eta + j.y_xi * j.y_eta,
                j.x_xi * j.y_eta - j.x_eta * j.y_xi - s,
            ),
            Governing::MongeAmpere => (
                j.x_xixi * j.x_etaeta - j.x_xieta.powi(2) - j.x_xi.powi(2) + j.x_eta.powi(2),
                j.y_xixi * j.y_etaeta - j.y_xieta.powi(2) - j.y_xi.powi(2) + j.y_eta.powi(2),
            ),
        }
    }

    #[test]
    fn residuals_match_symbolic_oracle_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let scale = |a: f64, b: f64| a.abs().max(b.abs()).max(1e-3);
        for _ in 0..100 {
            let m = Analytic::random(&mut rng);
            let (xi, eta) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            let sym = m.symbolic(xi, eta);
            let jet = jet_of(&m, xi, eta);
            for (a, b) in jet.values().iter().zip(sym.values()) {
                assert!((a - b).abs() <= 1e-12 * scale(*a, b), "{a} vs {b}");
            }
            for g in Governing::ALL {
                let r = Residual {
                    governing: g,
                    lame: k(),
                    laplace_form: LaplaceForm::Winslow,
                    reference_area: 0.7,
                };
                let (r1, r2) = r.eval(&jet);
                let (o1, o2) = oracle(&sym, g, 0.7);
                assert!((r1 - o1).abs() <= 1e-8 * scale(r1, o1), "{g:?}: {r1} vs {o1}");
                assert!((r2 - o2).abs() <= 1e-8 * scale(r2, o2), "{g:?}: {r2} vs {o2}");
            }
        }
    }

    #[test]
    fn normalization_scales_derivatives() {
        let j = SecondOrderJet::identity(0.5, 0.25).normalized(1.0, -1.0, 2.0);
        assert_eq!((j.x, j.y, j.x_xi, j.y_eta), (-0.25, 0.625, 0.5, 0.5));
    }
}
