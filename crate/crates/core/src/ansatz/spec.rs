use crate::error::{Error, Result};

use super::functions::CoefficientFunctions;
use super::profile::Profile;

/// The constants of `f = a0 + a1 p + a2 q + a3 p q`, with the determinant
/// `a0 a3 − a1 a2` computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCoefficients {
    a: [f64; 4],
    det: f64,
}

impl SeparationCoefficients {
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let a = [a0, a1, a2, a3];
        if !a.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSpec(format!("coefficients {a:?} must be finite")));
        }
        Ok(SeparationCoefficients {
            a,
            det: a0 * a3 - a1 * a2,
        })
    }

    pub fn a(&self) -> [f64; 4] {
        self.a
    }

    pub fn det(&self) -> f64 {
        self.det
    }
}

/// Branch sign `δ = ±1` of the amplitude square roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidSpec(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

/// Everything that determines one separated solution.
#[derive(Debug, Clone)]
pub struct SolutionSpec {
    coeffs: SeparationCoefficients,
    p: Profile,
    q: Profile,
    funcs: CoefficientFunctions,
    delta1: Sign,
    delta2: Sign,
}

impl SolutionSpec {
    pub fn new(coeffs: SeparationCoefficients, p: Profile, q: Profile) -> Result<Self> {
        p.validate()?;
        q.validate()?;
        Ok(SolutionSpec {
            coeffs,
            p,
            q,
            funcs: CoefficientFunctions::default(),
            delta1: Sign::Plus,
            delta2: Sign::Plus,
        })
    }

    pub fn with_funcs(mut self, funcs: CoefficientFunctions) -> Result<Self> {
        if !funcs.all_finite() {
            return Err(Error::InvalidSpec("coefficient functions must be finite".into()));
        }
        self.funcs = funcs;
        Ok(self)
    }

    pub fn with_signs(mut self, delta1: Sign, delta2: Sign) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    pub fn coeffs(&self) -> &SeparationCoefficients {
        &self.coeffs
    }

    pub fn p(&self) -> &Profile {
        &self.p
    }

    pub fn q(&self) -> &Profile {
        &self.q
    }

    pub fn funcs(&self) -> &CoefficientFunctions {
        &self.funcs
    }

    pub fn delta1(&self) -> Sign {
        self.delta1
    }

    pub fn delta2(&self) -> Sign {
        self.delta2
    }

    /// Whether `(ζ, η)` falls inside a pole exclusion band of either profile.
    pub fn near_pole(&self, zeta: f64, eta: f64) -> bool {
        self.p.near_pole(zeta) || self.q.near_pole(eta)
    }
}
