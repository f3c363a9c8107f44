//! TOML spec files.
//!
//! ```toml
//! [coeffs]
//! a0 = 1
//! a1 = 1
//! a2 = 1
//! a3 = 2
//!
//! [p]
//! family = "exp_sum"
//! terms = [{ wavenumber = 1, rate = 1, offset = 1 }]
//!
//! [q]
//! family = "breather_q"
//!
//! [funcs]                 # optional; defaults beta = 1, c0 = 1, others 0
//! gamma = { form = "cos", amplitude = 0.1, omega = 2 }
//!
//! [signs]                 # optional; defaults +1
//! delta1 = -1
//!
//! [policy]                # optional; defaults c1 = c2 = 0
//! c1 = 0
//! ```
//!
//! Families: `exp_sum`, `breather_p`, `breather_q`, `tan_cos`,
//! `instanton_p`, `instanton_q`. `tan_cos` and `instanton_p` take an
//! optional `pole_margin`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ansatz::{
    CoefficientFunctions, ExpTerm, Profile, SeparationCoefficients, Sign, SolutionSpec, TimeFunction,
    INSTANTON_POLE_MARGIN, TAN_POLE_MARGIN,
};
use crate::auxiliary::SeparationPolicy;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    coeffs: Coeffs,
    p: ProfileSection,
    q: ProfileSection,
    #[serde(default)]
    funcs: CoefficientFunctions,
    #[serde(default)]
    signs: Signs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    policy: Option<Policy>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Coeffs {
    a0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum ProfileSection {
    ExpSum {
        terms: Vec<Term>,
    },
    BreatherP,
    BreatherQ,
    TanCos {
        #[serde(default = "tan_margin")]
        pole_margin: f64,
    },
    InstantonP {
        #[serde(default = "instanton_margin")]
        pole_margin: f64,
    },
    InstantonQ,
}

fn tan_margin() -> f64 {
    TAN_POLE_MARGIN
}

fn instanton_margin() -> f64 {
    INSTANTON_POLE_MARGIN
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    #[serde(default = "one")]
    amplitude: f64,
    wavenumber: f64,
    #[serde(default)]
    rate: f64,
    #[serde(default)]
    offset: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Signs {
    delta1: i64,
    delta2: i64,
}

impl Default for Signs {
    fn default() -> Self {
        Signs { delta1: 1, delta2: 1 }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Policy {
    c1: TimeFunction,
    c2: TimeFunction,
}

impl Default for Policy {
    fn default() -> Self {
        let p = SeparationPolicy::default();
        Policy { c1: p.c1, c2: p.c2 }
    }
}

/// A parsed spec file.
#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub spec: SolutionSpec,
    pub policy: SeparationPolicy,
}

impl ProfileSection {
    fn into_profile(self) -> Result<Profile> {
        let p = match self {
            ProfileSection::ExpSum { terms } => {
                return Profile::exp_sum(
                    terms
                        .into_iter()
                        .map(|t| ExpTerm::new(t.amplitude, t.wavenumber, t.rate, t.offset)),
                )
            }
            ProfileSection::BreatherP => Profile::BreatherP,
            ProfileSection::BreatherQ => Profile::BreatherQ,
            ProfileSection::TanCos { pole_margin } => Profile::TanCos { pole_margin },
            ProfileSection::InstantonP { pole_margin } => Profile::InstantonP { pole_margin },
            ProfileSection::InstantonQ => Profile::InstantonQ,
        };
        p.validate()?;
        Ok(p)
    }

    fn from_profile(p: &Profile) -> Result<Self> {
        Ok(match p {
            Profile::ExpSum(terms) => ProfileSection::ExpSum {
                terms: terms
                    .iter()
                    .map(|t| Term {
                        amplitude: t.amplitude,
                        wavenumber: t.wavenumber,
                        rate: t.rate,
                        offset: t.offset,
                    })
                    .collect(),
            },
            Profile::BreatherP => ProfileSection::BreatherP,
            Profile::BreatherQ => ProfileSection::BreatherQ,
            Profile::TanCos { pole_margin } => ProfileSection::TanCos {
                pole_margin: *pole_margin,
            },
            Profile::InstantonP { pole_margin } => ProfileSection::InstantonP {
                pole_margin: *pole_margin,
            },
            Profile::InstantonQ => ProfileSection::InstantonQ,
            Profile::Custom(c) => return Err(Error::NotSerializable(format!("custom profile '{}'", c.name))),
        })
    }
}

pub fn parse_spec(text: &str) -> Result<SpecDocument> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    let c = doc.coeffs;
    let coeffs = SeparationCoefficients::new(c.a0, c.a1, c.a2, c.a3)?;
    let spec = SolutionSpec::new(coeffs, doc.p.into_profile()?, doc.q.into_profile()?)?
        .with_funcs(doc.funcs)?
        .with_signs(Sign::try_from(doc.signs.delta1)?, Sign::try_from(doc.signs.delta2)?);
    let policy = doc.policy.unwrap_or_default();
    if !(policy.c1.is_finite() && policy.c2.is_finite()) {
        return Err(Error::InvalidSpec("policy functions must be finite".into()));
    }
    Ok(SpecDocument {
        spec,
        policy: SeparationPolicy {
            c1: policy.c1,
            c2: policy.c2,
        },
    })
}

pub fn load_spec(path: &Path) -> Result<SpecDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Serializes a spec; custom profiles cannot be written.
pub fn write_spec(spec: &SolutionSpec, policy: &SeparationPolicy) -> Result<String> {
    let [a0, a1, a2, a3] = spec.coeffs().a();
    let doc = Document {
        coeffs: Coeffs { a0, a1, a2, a3 },
        p: ProfileSection::from_profile(spec.p())?,
        q: ProfileSection::from_profile(spec.q())?,
        funcs: spec.funcs().clone(),
        signs: Signs {
            delta1: spec.delta1().value() as i64,
            delta2: spec.delta2().value() as i64,
        },
        policy: Some(Policy {
            c1: policy.c1.clone(),
            c2: policy.c2.clone(),
        }),
    };
    toml::to_string(&doc).map_err(|e| Error::NotSerializable(e.to_string()))
}
