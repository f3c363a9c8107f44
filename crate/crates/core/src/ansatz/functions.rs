use serde::{Deserialize, Serialize};

use crate::calculus::{Jet, Scalar};

/// A real function of time: either a constant or one of a few closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeFunction {
    Constant(f64),
    Form(TimeForm),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeForm {
    /// `a + b t`
    Linear { a: f64, b: f64 },
    /// `offset + amplitude cos(omega t + phase)`
    Cos {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `offset + amplitude exp(rate t)`
    Exp {
        amplitude: f64,
        rate: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl TimeFunction {
    pub fn eval<T: Scalar>(&self, t: T) -> T {
        match self {
            TimeFunction::Constant(c) => T::from_f64(*c),
            TimeFunction::Form(TimeForm::Linear { a, b }) => t.scale(*b) + T::from_f64(*a),
            TimeFunction::Form(TimeForm::Cos {
                amplitude,
                omega,
                phase,
                offset,
            }) => (t.scale(*omega) + T::from_f64(*phase)).cos().scale(*amplitude) + T::from_f64(*offset),
            TimeFunction::Form(TimeForm::Exp {
                amplitude,
                rate,
                offset,
            }) => t.scale(*rate).exp().scale(*amplitude) + T::from_f64(*offset),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    /// Time jet in the `(s, t)` layout (no spatial dependence).
    pub fn jet(&self, t: f64) -> Jet {
        self.eval(Jet::variable(t, 1))
    }

    pub fn is_finite(&self) -> bool {
        let params: Vec<f64> = match self {
            TimeFunction::Constant(c) => vec![*c],
            TimeFunction::Form(TimeForm::Linear { a, b }) => vec![*a, *b],
            TimeFunction::Form(TimeForm::Cos {
                amplitude,
                omega,
                phase,
                offset,
            }) => vec![*amplitude, *omega, *phase, *offset],
            TimeFunction::Form(TimeForm::Exp {
                amplitude,
                rate,
                offset,
            }) => vec![*amplitude, *rate, *offset],
        };
        params.iter().all(|v| v.is_finite())
    }
}

impl From<f64> for TimeFunction {
    fn from(c: f64) -> Self {
        TimeFunction::Constant(c)
    }
}

/// Dispersion/nonlinearity `β(t)`, gain `γ(t)` and the free separation
/// functions `c0, c3, c4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoefficientFunctions {
    pub beta: TimeFunction,
    pub gamma: TimeFunction,
    pub c0: TimeFunction,
    pub c3: TimeFunction,
    pub c4: TimeFunction,
}

impl Default for CoefficientFunctions {
    fn default() -> Self {
        CoefficientFunctions {
            beta: 1.0.into(),
            gamma: 0.0.into(),
            c0: 1.0.into(),
            c3: 0.0.into(),
            c4: 0.0.into(),
        }
    }
}

impl CoefficientFunctions {
    pub fn with_gamma(mut self, gamma: impl Into<TimeFunction>) -> Self {
        self.gamma = gamma.into();
        self
    }

    pub fn with_beta(mut self, beta: impl Into<TimeFunction>) -> Self {
        self.beta = beta.into();
        self
    }

    pub fn with_c0(mut self, c0: impl Into<TimeFunction>) -> Self {
        self.c0 = c0.into();
        self
    }

    pub fn with_c3(mut self, c3: impl Into<TimeFunction>) -> Self {
        self.c3 = c3.into();
        self
    }

    pub fn with_c4(mut self, c4: impl Into<TimeFunction>) -> Self {
        self.c4 = c4.into();
        self
    }

    pub fn all_finite(&self) -> bool {
        [&self.beta, &self.gamma, &self.c0, &self.c3, &self.c4]
            .iter()
            .all(|f| f.is_finite())
    }
}
