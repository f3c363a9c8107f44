//! Second-order jets in `N` variables.
//!
//! A [`Jet`] carries a value together with its exact gradient and Hessian at
//! a point. Arithmetic applies the Leibniz and chain rules, so composite
//! expressions are differentiated to rounding accuracy with no truncation
//! error. The carrier type `T` may itself be a jet; `Jet<Jet<f64, 2>, 2>`
//! exposes derivatives up to fourth order in two variables, which is how the
//! profile families supply third derivatives on demand.
//!
//! Derivatives are stored as true partials (not Taylor coefficients):
//! `hess[i][j] = ∂²/∂x_i∂x_j`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::Scalar;

/// Denominators with `|b| < DIV_GUARD * (1 + |a|)` make a quotient non-finite.
pub const DIV_GUARD: f64 = 1e-12;

/// Returns `true` when `num / den` should be treated as a singular quotient.
pub fn guarded(num: f64, den: f64) -> bool {
    !(den.abs() >= DIV_GUARD * (1.0 + num.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T = f64, const N: usize = 2> {
    pub value: T,
    pub grad: [T; N],
    pub hess: [[T; N]; N],
}

/// Two-variable jet over jets: derivatives to order four in `(s, t)`.
pub type HyperJet = Jet<Jet<f64, 2>, 2>;

impl<T: Scalar, const N: usize> Jet<T, N> {
    pub fn constant(value: T) -> Self {
        Jet {
            value,
            grad: [T::zero(); N],
            hess: [[T::zero(); N]; N],
        }
    }

    /// Independent variable number `index` evaluated at `value`.
    pub fn variable(value: T, index: usize) -> Self {
        let mut j = Self::constant(value);
        j.grad[index] = T::one();
        j
    }

    pub fn non_finite() -> Self {
        Jet {
            value: T::nan(),
            grad: [T::nan(); N],
            hess: [[T::nan(); N]; N],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(Scalar::is_finite)
            && self.hess.iter().flatten().all(Scalar::is_finite)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
            && self.grad.iter().all(Scalar::is_zero)
            && self.hess.iter().flatten().all(Scalar::is_zero)
    }

    /// Composition `F(self)` given `F`, `F'`, `F''` evaluated at `self.value`.
    pub fn chain(&self, f0: T, f1: T, f2: T) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..N {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..N {
            for j in 0..N {
                out.hess[i][j] = f1 * self.hess[i][j] + f2 * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    /// Applies `op` to every stored entry.
    pub fn map(&self, op: impl Fn(T) -> T) -> Self {
        let mut out = *self;
        out.value = op(self.value);
        for i in 0..N {
            out.grad[i] = op(self.grad[i]);
            for j in 0..N {
                out.hess[i][j] = op(self.hess[i][j]);
            }
        }
        out
    }

    /// Re-indexes the variables into an `M`-variable jet: variable `i` of
    /// `self` becomes variable `slots[i]` of the result.
    pub fn embed<const M: usize>(&self, slots: [usize; N]) -> Jet<T, M> {
        let mut out = Jet::<T, M>::constant(self.value);
        for i in 0..N {
            out.grad[slots[i]] = self.grad[i];
            for j in 0..N {
                out.hess[slots[i]][slots[j]] = self.hess[i][j];
            }
        }
        out
    }

    /// Partial derivative for a multi-index of total order at most two.
    pub fn partial(&self, orders: [usize; N]) -> Option<T> {
        let total: usize = orders.iter().sum();
        match total {
            0 => Some(self.value),
            1 => orders.iter().position(|&o| o == 1).map(|i| self.grad[i]),
            2 => {
                if let Some(i) = orders.iter().position(|&o| o == 2) {
                    Some(self.hess[i][i])
                } else {
                    let mut idx = orders.iter().enumerate().filter(|(_, &o)| o == 1).map(|(i, _)| i);
                    let (i, j) = (idx.next()?, idx.next()?);
                    Some(self.hess[i][j])
                }
            }
            _ => None,
        }
    }

    fn guard_failed(num: &T, den: &T) -> bool {
        guarded(num.magnitude(), den.magnitude())
    }
}

impl<const N: usize> Jet<f64, N> {
    /// Same jet carried by complex numbers.
    pub fn to_complex(&self) -> Jet<num_complex::Complex64, N> {
        let mut out = Jet::<num_complex::Complex64, N>::constant(self.value.into());
        for i in 0..N {
            out.grad[i] = self.grad[i].into();
            for j in 0..N {
                out.hess[i][j] = self.hess[i][j].into();
            }
        }
        out
    }
}

/// Accessors for the two-variable `(s, t)` layout: one spatial variable
/// (`ζ` or `η`) and time.
impl<T: Scalar> Jet<T, 2> {
    pub fn new(value: T, d1: T, dt: T, d11: T, d1t: T, dtt: T) -> Self {
        Jet {
            value,
            grad: [d1, dt],
            hess: [[d11, d1t], [d1t, dtt]],
        }
    }

    pub fn d1(&self) -> T {
        self.grad[0]
    }
    pub fn dt(&self) -> T {
        self.grad[1]
    }
    pub fn d11(&self) -> T {
        self.hess[0][0]
    }
    pub fn d1t(&self) -> T {
        self.hess[0][1]
    }
    pub fn dtt(&self) -> T {
        self.hess[1][1]
    }
}

impl<T: Scalar, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        out.value = self.value + rhs.value;
        for i in 0..N {
            out.grad[i] = self.grad[i] + rhs.grad[i];
            for j in 0..N {
                out.hess[i][j] = self.hess[i][j] + rhs.hess[i][j];
            }
        }
        out
    }
}

impl<T: Scalar, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        out.value = self.value - rhs.value;
        for i in 0..N {
            out.grad[i] = self.grad[i] - rhs.grad[i];
            for j in 0..N {
                out.hess[i][j] = self.hess[i][j] - rhs.hess[i][j];
            }
        }
        out
    }
}

impl<T: Scalar, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl<T: Scalar, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self, &rhs);
        let mut out = Self::constant(a.value * b.value);
        for i in 0..N {
            out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
        }
        for i in 0..N {
            for j in 0..N {
                out.hess[i][j] = a.hess[i][j] * b.value
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i]
                    + a.value * b.hess[i][j];
            }
        }
        out
    }
}

impl<T: Scalar, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if Self::guard_failed(&self.value, &rhs.value) {
            return Self::non_finite();
        }
        let v = rhs.value;
        let inv = T::one() / v;
        let recip = rhs.chain(inv, -(inv * inv), (inv * inv * inv).scale(2.0));
        self * recip
    }
}

impl<T: Scalar, const N: usize> Scalar for Jet<T, N> {
    fn from_f64(v: f64) -> Self {
        Self::constant(T::from_f64(v))
    }

    fn nan() -> Self {
        Self::non_finite()
    }

    fn magnitude(&self) -> f64 {
        self.value.magnitude()
    }

    fn real_value(&self) -> Option<f64> {
        self.value.real_value()
    }

    fn is_finite(&self) -> bool {
        Jet::is_finite(self)
    }

    fn is_zero(&self) -> bool {
        Jet::is_zero(self)
    }

    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    fn ln(self) -> Self {
        if matches!(self.value.real_value(), Some(v) if !(v > 0.0)) {
            return Self::non_finite();
        }
        let v = self.value;
        let inv = T::one() / v;
        self.chain(v.ln(), inv, -(inv * inv))
    }

    fn sqrt(self) -> Self {
        match self.value.real_value() {
            Some(v) if v < 0.0 || v.is_nan() => return Self::non_finite(),
            Some(v) if v == 0.0 => {
                // The zero function has a smooth root; anything else is a
                // cusp whose derivatives do not exist.
                if self.is_zero() {
                    return self;
                }
                let mut out = Self::non_finite();
                out.value = self.value.sqrt();
                return out;
            }
            _ => {}
        }
        let s = self.value.sqrt();
        let half_inv = (T::one() / s).scale(0.5);
        let second = -(half_inv / self.value).scale(0.5);
        self.chain(s, half_inv, second)
    }

    fn sin(self) -> Self {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(s, c, -s)
    }

    fn cos(self) -> Self {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(c, -s, -c)
    }

    fn tan(self) -> Self {
        if matches!(self.value.real_value(), Some(v) if v.cos().abs() < DIV_GUARD) {
            return Self::non_finite();
        }
        let tn = self.value.tan();
        let sec2 = T::one() + tn * tn;
        self.chain(tn, sec2, (tn * sec2).scale(2.0))
    }

    fn powi(self, k: i32) -> Self {
        match k {
            0 => Self::one(),
            1 => self,
            _ => {
                if k < 0 && self.value.is_zero() {
                    return Self::non_finite();
                }
                let v = self.value;
                let kf = f64::from(k);
                self.chain(
                    v.powi(k),
                    v.powi(k - 1).scale(kf),
                    v.powi(k - 2).scale(kf * (kf - 1.0)),
                )
            }
        }
    }

    fn powf(self, k: f64) -> Self {
        if k.fract() == 0.0 && k.abs() < f64::from(i32::MAX) {
            return self.powi(k as i32);
        }
        if matches!(self.value.real_value(), Some(v) if !(v > 0.0)) {
            return Self::non_finite();
        }
        let v = self.value;
        self.chain(
            v.powf(k),
            v.powf(k - 1.0).scale(k),
            v.powf(k - 2.0).scale(k * (k - 1.0)),
        )
    }

    fn scale(self, k: f64) -> Self {
        self.map(|v| v.scale(k))
    }
}

/// Seeds a [`HyperJet`] for the spatial variable at `s`.
pub fn hyper_space(s: f64) -> HyperJet {
    Jet {
        value: Jet::variable(s, 0),
        grad: [Jet::one(), Jet::zero()],
        hess: [[Jet::zero(); 2]; 2],
    }
}

/// Seeds a [`HyperJet`] for time at `t`.
pub fn hyper_time(t: f64) -> HyperJet {
    Jet {
        value: Jet::variable(t, 1),
        grad: [Jet::zero(), Jet::one()],
        hess: [[Jet::zero(); 2]; 2],
    }
}
