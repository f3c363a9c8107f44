//! The arbitrary separation profiles `p(ζ, t)` and `q(η, t)`.
//!
//! Built-in families are written once, generically over [`Scalar`], so the
//! same formula yields plain values, second-order jets, or the nested jets
//! that carry third and fourth derivatives.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::calculus::{hyper_space, hyper_time, HyperJet, Jet, Scalar};
use crate::error::{Error, Result};

/// One term `A · exp(K s + L t + θ⁰)` of an exponential sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub rate: f64,
    pub offset: f64,
}

impl ExpTerm {
    pub fn new(amplitude: f64, wavenumber: f64, rate: f64, offset: f64) -> Self {
        ExpTerm {
            amplitude,
            wavenumber,
            rate,
            offset,
        }
    }
}

pub type CustomFn = dyn Fn(HyperJet, HyperJet) -> HyperJet + Send + Sync;

/// Caller-supplied profile, evaluated on nested jets so every derivative the
/// auxiliary relations need is available.
#[derive(Clone)]
pub struct CustomProfile {
    pub name: String,
    eval: Arc<CustomFn>,
}

impl CustomProfile {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(HyperJet, HyperJet) -> HyperJet + Send + Sync + 'static,
    ) -> Self {
        CustomProfile {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile").field("name", &self.name).finish_non_exhaustive()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::ExpSum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    let sign = match (i, t.amplitude < 0.0) {
                        (0, true) => "-",
                        (0, false) => "",
                        (_, true) => " - ",
                        (_, false) => " + ",
                    };
                    let a = t.amplitude.abs();
                    let coeff = if a == 1.0 { String::new() } else { format!("{a}*") };
                    write!(f, "{sign}{coeff}exp({})", linear_form(t.wavenumber, t.rate, t.offset))?;
                }
                Ok(())
            }
            Profile::BreatherP => write!(f, "1 + exp(s*cos(t)^2)"),
            Profile::BreatherQ => write!(f, "exp(s + cos(t)^2)"),
            Profile::TanCos { .. } => write!(f, "1 + exp(tan(s)*cos(t) + 1)"),
            Profile::InstantonP { .. } => write!(f, "exp(s + 2t + 1) + exp(s + t + 1) + exp(-1/(s^3 + 1) + 2t + 1)"),
            Profile::InstantonQ => write!(f, "exp(s + 2t + 1) + exp(s + t + 1)"),
            Profile::Custom(c) => write!(f, "custom '{}'", c.name),
        }
    }
}

/// `k*s + l*t + c` with zero terms dropped and signs folded in.
fn linear_form(k: f64, l: f64, c: f64) -> String {
    let mut out = String::new();
    for (v, var) in [(k, "s"), (l, "t"), (c, "")] {
        if v == 0.0 {
            continue;
        }
        let mag = v.abs();
        let body = match (var, mag == 1.0) {
            ("", _) => format!("{mag}"),
            (var, true) => var.to_string(),
            (var, false) => format!("{mag}{var}"),
        };
        match (out.is_empty(), v < 0.0) {
            (true, true) => out.push_str(&format!("-{body}")),
            (true, false) => out.push_str(&body),
            (false, true) => out.push_str(&format!(" - {body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFamily {
    ExpSum,
    BreatherP,
    BreatherQ,
    TanCos,
    InstantonP,
    InstantonQ,
    Custom,
}

/// Default exclusion half-width around `tan` poles.
pub const TAN_POLE_MARGIN: f64 = 0.1;
/// Default exclusion half-width around the `s = −1` pole of the instanton profile.
pub const INSTANTON_POLE_MARGIN: f64 = 0.05;

#[derive(Debug, Clone)]
pub enum Profile {
    /// `Σ A_i exp(K_i s + L_i t + θ⁰_i)`
    ExpSum(Vec<ExpTerm>),
    /// `1 + exp(s cos²t)`
    BreatherP,
    /// `exp(s + cos²t)`
    BreatherQ,
    /// `1 + exp(tan(s) cos t + 1)`
    TanCos { pole_margin: f64 },
    /// `e^{s+2t+1} + e^{s+t+1} + e^{−(s³+1)⁻¹+2t+1}`
    InstantonP { pole_margin: f64 },
    /// `e^{s+2t+1} + e^{s+t+1}`
    InstantonQ,
    Custom(CustomProfile),
}

impl Profile {
    pub fn exp_sum(terms: impl IntoIterator<Item = ExpTerm>) -> Result<Self> {
        let p = Profile::ExpSum(terms.into_iter().collect());
        p.validate()?;
        Ok(p)
    }

    /// Single term `exp(k s + l t + θ)`.
    pub fn exponential(k: f64, l: f64, offset: f64) -> Self {
        Profile::ExpSum(vec![ExpTerm::new(1.0, k, l, offset)])
    }

    pub fn tan_cos() -> Self {
        Profile::TanCos {
            pole_margin: TAN_POLE_MARGIN,
        }
    }

    pub fn instanton_p() -> Self {
        Profile::InstantonP {
            pole_margin: INSTANTON_POLE_MARGIN,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(HyperJet, HyperJet) -> HyperJet + Send + Sync + 'static,
    ) -> Self {
        Profile::Custom(CustomProfile::new(name, eval))
    }

    pub fn family(&self) -> ProfileFamily {
        match self {
            Profile::ExpSum(_) => ProfileFamily::ExpSum,
            Profile::BreatherP => ProfileFamily::BreatherP,
            Profile::BreatherQ => ProfileFamily::BreatherQ,
            Profile::TanCos { .. } => ProfileFamily::TanCos,
            Profile::InstantonP { .. } => ProfileFamily::InstantonP,
            Profile::InstantonQ => ProfileFamily::InstantonQ,
            Profile::Custom(_) => ProfileFamily::Custom,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::ExpSum(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidSpec("exponential sum needs at least one term".into()));
                }
                let finite = terms
                    .iter()
                    .all(|t| [t.amplitude, t.wavenumber, t.rate, t.offset].iter().all(|v| v.is_finite()));
                if !finite {
                    return Err(Error::InvalidSpec("exponential sum parameters must be finite".into()));
                }
            }
            Profile::TanCos { pole_margin } | Profile::InstantonP { pole_margin } => {
                if !(*pole_margin >= 0.0 && pole_margin.is_finite()) {
                    return Err(Error::InvalidSpec(format!("pole margin {pole_margin} must be >= 0")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Evaluates a built-in family on any scalar carrier; `None` for
    /// [`Profile::Custom`], whose evaluator only accepts [`HyperJet`]s.
    pub fn eval<T: Scalar>(&self, s: T, t: T) -> Option<T> {
        let one = T::one();
        let c = T::from_f64;
        let v = match self {
            Profile::ExpSum(terms) => terms.iter().fold(T::zero(), |acc, term| {
                let arg = s.scale(term.wavenumber) + t.scale(term.rate) + c(term.offset);
                acc + arg.exp().scale(term.amplitude)
            }),
            Profile::BreatherP => {
                let cos = t.cos();
                one + (s * cos * cos).exp()
            }
            Profile::BreatherQ => {
                let cos = t.cos();
                (s + cos * cos).exp()
            }
            Profile::TanCos { .. } => one + (s.tan() * t.cos() + one).exp(),
            Profile::InstantonP { .. } => {
                let two_t = t.scale(2.0);
                let pole = -(s.powi(3) + one).recip();
                (s + two_t + one).exp() + (s + t + one).exp() + (pole + two_t + one).exp()
            }
            Profile::InstantonQ => (s + t.scale(2.0) + one).exp() + (s + t + one).exp(),
            Profile::Custom(_) => return None,
        };
        Some(v)
    }

    /// Derivatives to fourth order in `(s, t)`: `h.value` is the jet of the
    /// profile, `h.grad[0]` the jet of `∂s`, `h.grad[1]` the jet of `∂t`.
    pub fn hyper(&self, s: f64, t: f64) -> HyperJet {
        match self {
            Profile::Custom(c) => (c.eval)(hyper_space(s), hyper_time(t)),
            _ => self
                .eval(hyper_space(s), hyper_time(t))
                .expect("built-in family"),
        }
    }

    /// Second-order jet in `(s, t)`.
    pub fn jet(&self, s: f64, t: f64) -> Jet {
        match self {
            Profile::Custom(_) => self.hyper(s, t).value,
            _ => self
                .eval(Jet::variable(s, 0), Jet::variable(t, 1))
                .expect("built-in family"),
        }
    }

    pub fn value(&self, s: f64, t: f64) -> f64 {
        match self {
            Profile::Custom(_) => self.hyper(s, t).value.value,
            _ => self.eval(s, t).expect("built-in family"),
        }
    }

    /// Whether `s` lies inside the exclusion band of one of the family's poles.
    pub fn near_pole(&self, s: f64) -> bool {
        match self {
            Profile::TanCos { pole_margin } => {
                let offset = (s - FRAC_PI_2).rem_euclid(PI);
                offset.min(PI - offset) < pole_margin.max(f64::EPSILON)
            }
            Profile::InstantonP { pole_margin } => (s + 1.0).abs() < pole_margin.max(f64::EPSILON),
            _ => false,
        }
    }
}
