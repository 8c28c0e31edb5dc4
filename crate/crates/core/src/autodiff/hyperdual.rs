use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Pole guard for division, `tan` and `cot`.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// Hyper-dual number `re + d1·ε₁ + d2·ε₂ + d12·ε₁ε₂` with `ε₁² = ε₂² = 0`.
///
/// Seeding an input with `d1 = aᵢ`, `d2 = bᵢ` yields, for any smooth
/// composition `f`, the directional derivatives `∂ₐf` in `d1`, `∂_bf` in
/// `d2` and the mixed second derivative `∂ₐ∂_bf` in `d12`, all exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDual<S> {
    pub re: S,
    pub d1: S,
    pub d2: S,
    pub d12: S,
}

impl<S: Scalar> HyperDual<S> {
    pub fn new(re: S, d1: S, d2: S, d12: S) -> Self {
        HyperDual { re, d1, d2, d12 }
    }

    /// Constant carried in the context of `like`.
    pub fn constant(like: S, v: f64) -> Self {
        let z = like.constant_like(0.0);
        HyperDual {
            re: like.constant_like(v),
            d1: z,
            d2: z,
            d12: z,
        }
    }

    /// Lifts a real into the hyper-dual algebra with no derivative parts.
    pub fn real(re: S) -> Self {
        let z = re.constant_like(0.0);
        HyperDual {
            re,
            d1: z,
            d2: z,
            d12: z,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        HyperDual {
            re: self.re * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
            d12: self.d12 * c,
        }
    }

    pub fn shift(self, c: f64) -> Self {
        HyperDual {
            re: self.re + c,
            ..self
        }
    }

    /// Applies a smooth scalar function given `f(re)`, `f'(re)`, `f''(re)`.
    pub fn chain(self, f: S, df: S, d2f: S) -> Self {
        HyperDual {
            re: f,
            d1: df * self.d1,
            d2: df * self.d2,
            d12: d2f * self.d1 * self.d2 + df * self.d12,
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        let b = rhs.re.value();
        if !(b.abs() >= SINGULARITY_GUARD) {
            return Err(Error::Domain {
                op: "div",
                detail: format!("denominator {b:e} within {SINGULARITY_GUARD:e} of zero"),
            });
        }
        Ok(self * rhs.recip_unchecked())
    }

    fn recip_unchecked(self) -> Self {
        let one = self.re.constant_like(1.0);
        let inv = one.div(self.re);
        let inv2 = inv * inv;
        let inv3 = inv2 * inv;
        self.chain(inv, -inv2, inv3 * 2.0)
    }

    pub fn tanh(self) -> Self {
        let t = self.re.tanh();
        let dt = (t * t - 1.0) * -1.0;
        let d2t = t * dt * -2.0;
        self.chain(t, dt, d2t)
    }

    pub fn sigmoid(self) -> Self {
        let s = self.re.sigmoid();
        let ds = s * (s * -1.0 + 1.0);
        let d2s = ds * (s * -2.0 + 1.0);
        self.chain(s, ds, d2s)
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.re.sin(), self.re.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (self.re.sin(), self.re.cos());
        self.chain(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e, e)
    }

    pub fn tan(self) -> Result<Self> {
        let c = self.re.value().cos();
        if !(c.abs() >= SINGULARITY_GUARD) {
            return Err(Error::Domain {
                op: "tan",
                detail: format!("cos({}) within {SINGULARITY_GUARD:e} of zero", self.re.value()),
            });
        }
        let t = self.re.tan();
        let dt = t * t + 1.0;
        let d2t = t * dt * 2.0;
        Ok(self.chain(t, dt, d2t))
    }

    pub fn cot(self) -> Result<Self> {
        let s = self.re.value().sin();
        if !(s.abs() >= SINGULARITY_GUARD) {
            return Err(Error::Domain {
                op: "cot",
                detail: format!("sin({}) within {SINGULARITY_GUARD:e} of zero", self.re.value()),
            });
        }
        let c = self.re.cos().div(self.re.sin());
        let dc = (c * c + 1.0) * -1.0;
        let d2c = c * dc * -2.0;
        Ok(self.chain(c, dc, d2c))
    }

    pub fn ln(self) -> Result<Self> {
        let x = self.re.value();
        if !(x > 0.0) {
            return Err(Error::Domain {
                op: "ln",
                detail: format!("argument {x} is not positive"),
            });
        }
        let one = self.re.constant_like(1.0);
        let inv = one.div(self.re);
        Ok(self.chain(self.re.ln(), inv, -(inv * inv)))
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => HyperDual::constant(self.re, 1.0),
            1 => self,
            _ if n < 0 => {
                let p = self.powi(-n);
                p.recip_unchecked()
            }
            _ => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }

    /// `self^exponent = exp(exponent · ln self)`, defined for positive bases.
    pub fn pow(self, exponent: Self) -> Result<Self> {
        let x = self.re.value();
        if !(x > 0.0) {
            return Err(Error::Domain {
                op: "pow",
                detail: format!("base {x} is not positive"),
            });
        }
        Ok((exponent * self.ln()?).exp())
    }

    pub fn relu(self) -> Self {
        if self.re.value() > 0.0 {
            self
        } else {
            HyperDual::constant(self.re, 0.0)
        }
    }

    pub fn leaky_relu(self, slope: f64) -> Self {
        if self.re.value() > 0.0 {
            self
        } else {
            self.scale(slope)
        }
    }

    pub fn elu(self, alpha: f64) -> Self {
        if self.re.value() > 0.0 {
            self
        } else {
            let e = self.re.exp() * alpha;
            self.chain(e - alpha, e, e)
        }
    }
}

impl<S: Scalar> Add for HyperDual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        HyperDual {
            re: self.re + rhs.re,
            d1: self.d1 + rhs.d1,
            d2: self.d2 + rhs.d2,
            d12: self.d12 + rhs.d12,
        }
    }
}

impl<S: Scalar> Sub for HyperDual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        HyperDual {
            re: self.re - rhs.re,
            d1: self.d1 - rhs.d1,
            d2: self.d2 - rhs.d2,
            d12: self.d12 - rhs.d12,
        }
    }
}

impl<S: Scalar> Mul for HyperDual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        HyperDual {
            re: self.re * rhs.re,
            d1: self.re * rhs.d1 + self.d1 * rhs.re,
            d2: self.re * rhs.d2 + self.d2 * rhs.re,
            d12: self.re * rhs.d12 + self.d1 * rhs.d2 + self.d2 * rhs.d1 + self.d12 * rhs.re,
        }
    }
}

impl<S: Scalar> Neg for HyperDual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        HyperDual {
            re: -self.re,
            d1: -self.d1,
            d2: -self.d2,
            d12: -self.d12,
        }
    }
}

impl HyperDual<f64> {
    /// Seeds a variable with directional components `a` and `b`.
    pub fn seeded(re: f64, a: f64, b: f64) -> Self {
        HyperDual {
            re,
            d1: a,
            d2: b,
            d12: 0.0,
        }
    }

    /// Moves an `f64` hyper-dual into the context of `like`.
    pub fn lift<S: Scalar>(self, like: S) -> HyperDual<S> {
        HyperDual {
            re: like.constant_like(self.re),
            d1: like.constant_like(self.d1),
            d2: like.constant_like(self.d2),
            d12: like.constant_like(self.d12),
        }
    }
}
