use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Real-number abstraction shared by plain `f64` evaluation and taped
/// evaluation ([`Var`](super::Var)).
///
/// Division and the transcendental functions are raw: domain checks live in
/// [`HyperDual`](super::HyperDual), which inspects [`Scalar::value`] before
/// calling them.
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    /// Numeric value, used for branching and finiteness checks.
    fn value(&self) -> f64;

    /// A constant living in the same evaluation context as `self`.
    fn constant_like(&self, v: f64) -> Self;

    fn div(self, rhs: Self) -> Self;
    fn tanh(self) -> Self;
    fn sigmoid(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;

    /// `Σ a[i]·b[i]`. Panics if the lengths differ or are zero.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        assert!(!a.is_empty() && a.len() == b.len(), "dot: bad lengths");
        let mut acc = a[0] * b[0];
        for (x, y) in a.iter().zip(b).skip(1) {
            acc = acc + *x * *y;
        }
        acc
    }
}

pub(crate) fn sigmoid_f64(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Scalar for f64 {
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn constant_like(&self, v: f64) -> Self {
        v
    }
    #[inline]
    fn div(self, rhs: Self) -> Self {
        self / rhs
    }
    #[inline]
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    #[inline]
    fn sigmoid(self) -> Self {
        sigmoid_f64(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn tan(self) -> Self {
        f64::tan(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn dot(a: &[Self], b: &[Self]) -> Self {
        assert!(!a.is_empty() && a.len() == b.len(), "dot: bad lengths");
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
}
