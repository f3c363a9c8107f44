use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Values that composite Simpson can accumulate.
pub trait Integrand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn all_finite(&self) -> bool;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Fixed-size bundle of integrands sharing one set of abscissae.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bundle<const K: usize>(pub [f64; K]);

impl<const K: usize> Add for Bundle<K> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const K: usize> Mul<f64> for Bundle<K> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in &mut self.0 {
            *a *= rhs;
        }
        self
    }
}

impl<const K: usize> Integrand for Bundle<K> {
    fn zero() -> Self {
        Bundle([0.0; K])
    }
    fn all_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// Composite Simpson rule on `[a, b]` with `n` subintervals (odd `n` is
/// rounded up to the next even count). Reversed limits give the negated
/// integral.
pub fn simpson<V: Integrand>(f: impl Fn(f64) -> V, a: f64, b: f64, n: usize) -> Result<V> {
    if n < 2 {
        return Err(Error::TooFewIntervals(n));
    }
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = V::zero();
    for k in 0..=n {
        let x = if k == n { b } else { a + k as f64 * h };
        let v = f(x);
        if !v.all_finite() {
            return Err(Error::NonFinite {
                what: "integrand",
                at: x,
            });
        }
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc = acc + v * w;
    }
    Ok(acc * (h / 3.0))
}

/// Scalar convenience wrapper over [`simpson`].
pub fn quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    simpson(f, a, b, n)
}

/// Running sum with Neumaier compensation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    correction: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.correction += (self.sum - t) + v;
        } else {
            self.correction += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.correction
    }
}
