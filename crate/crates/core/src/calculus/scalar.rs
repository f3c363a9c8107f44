use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Number-like values the jet machinery can carry: plain reals, complex
/// numbers, and jets themselves (nesting a jet inside a jet raises the
/// available derivative order).
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_f64(v: f64) -> Self;
    fn nan() -> Self;

    /// Magnitude of the leading (innermost) value.
    fn magnitude(&self) -> f64;
    /// Leading value when the type is real-valued, `None` for complex carriers.
    fn real_value(&self) -> Option<f64>;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn powi(self, k: i32) -> Self;
    fn powf(self, k: f64) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn scale(self, k: f64) -> Self {
        self * Self::from_f64(k)
    }

    fn recip(self) -> Self {
        Self::one() / self
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn nan() -> Self {
        f64::NAN
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn real_value(&self) -> Option<f64> {
        Some(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
    fn powf(self, k: f64) -> Self {
        f64::powf(self, k)
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

impl Scalar for Complex64 {
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn nan() -> Self {
        Complex64::new(f64::NAN, f64::NAN)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn real_value(&self) -> Option<f64> {
        None
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn tan(self) -> Self {
        Complex64::tan(self)
    }
    fn powi(self, k: i32) -> Self {
        Complex64::powi(&self, k)
    }
    fn powf(self, k: f64) -> Self {
        Complex64::powf(self, k)
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}
