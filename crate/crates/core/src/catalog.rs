//! Named excitation cases with fixed parameters.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use crate::ansatz::{ExpTerm, Profile, SeparationCoefficients, SolutionSpec, Window};
use crate::error::{Error, Result};

pub const CASE_NAMES: [&str; 6] = [
    "dromion",
    "solitoff",
    "resonant",
    "breather",
    "periodic",
    "double_instanton",
];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: SolutionSpec,
    pub window: Window,
    pub reference_times: Vec<f64>,
    /// Times at which `U ≡ 0`.
    pub degenerate_times: Vec<f64>,
    /// Temporal period of `U`, when the case has one.
    pub period: Option<f64>,
    /// `f` is known to vanish inside the default window.
    pub known_singular: bool,
    pub notes: Vec<&'static str>,
}

fn coeffs(a0: f64, a1: f64, a2: f64, a3: f64) -> SeparationCoefficients {
    SeparationCoefficients::new(a0, a1, a2, a3).expect("finite catalog coefficients")
}

fn exp_sum(terms: &[(f64, f64, f64, f64)]) -> Profile {
    Profile::exp_sum(terms.iter().map(|&(a, k, l, c)| ExpTerm::new(a, k, l, c))).expect("valid catalog profile")
}

fn spec(a: SeparationCoefficients, p: Profile, q: Profile) -> SolutionSpec {
    SolutionSpec::new(a, p, q).expect("valid catalog spec")
}

/// Builds the named case. Rebuilding yields identical parameters.
pub fn build_case(name: &str) -> Result<CatalogEntry> {
    let entry = match name {
        "dromion" => CatalogEntry {
            name: "dromion",
            spec: spec(
                coeffs(1.0, 1.0, 1.0, 2.0),
                Profile::exponential(1.0, 1.0, 1.0),
                Profile::exponential(1.0, 1.0, 1.0),
            ),
            window: Window::square(8.0),
            reference_times: vec![0.0],
            degenerate_times: vec![],
            period: None,
            known_singular: false,
            notes: vec![
                "single localized hump",
                "symmetric under y -> -y",
                "closed case: r = -zeta, s = -eta, p0 = q0 = 3/8",
            ],
        },
        "solitoff" => CatalogEntry {
            name: "solitoff",
            spec: spec(
                coeffs(2.0, 0.0, 2.0, 2.0),
                exp_sum(&[(1.0, 1.0, 1.0, 1.0), (1.0, 2.0, 1.0, 1.0)]),
                exp_sum(&[(1.0, 1.0, -1.0, 1.0), (1.0, 2.0, -1.0, 1.0)]),
            ),
            window: Window::square(8.0),
            reference_times: vec![0.0],
            degenerate_times: vec![],
            period: None,
            known_singular: false,
            notes: vec!["half-line soliton ending in the plane"],
        },
        "resonant" => CatalogEntry {
            name: "resonant",
            spec: spec(
                coeffs(2.0, -1.0, 2.0, 0.0),
                exp_sum(&[(-1.0, -1.0, 1.0, 1.0), (1.0, 2.0, 1.0, 1.0)]),
                exp_sum(&[(-1.0, -1.0, -1.0, 1.0), (1.0, 2.0, -1.0, 1.0)]),
            ),
            window: Window::square(8.0),
            reference_times: vec![0.0],
            degenerate_times: vec![],
            period: None,
            known_singular: true,
            notes: vec![
                "resonant solitoffs changing direction in time",
                "f = 2 - p + 2q changes sign inside [-8, 8]^2",
            ],
        },
        "breather" => CatalogEntry {
            name: "breather",
            spec: spec(coeffs(2.0, 1.0, 2.0, 2.0), Profile::BreatherP, Profile::BreatherQ),
            window: Window::square(8.0),
            reference_times: vec![0.0, 0.7, 0.9, 3.0],
            degenerate_times: vec![FRAC_PI_2],
            period: Some(PI),
            known_singular: false,
            notes: vec!["period pi", "U vanishes at t = pi/2 + k pi"],
        },
        "periodic" => CatalogEntry {
            name: "periodic",
            spec: spec(coeffs(2.0, 1.0, 2.0, 2.0), Profile::tan_cos(), Profile::tan_cos()),
            window: Window::diamond(FRAC_PI_2 - 0.1),
            reference_times: vec![0.0, FRAC_PI_4, FRAC_PI_3, 2.0 * FRAC_PI_3, 3.0 * FRAC_PI_4, PI],
            degenerate_times: vec![FRAC_PI_2],
            period: Some(PI),
            known_singular: false,
            notes: vec![
                "period pi",
                "U(x, y, t + pi) = U(-x, -y, t)",
                "window clips |zeta|, |eta| < pi/2 - 0.1 away from the tan poles",
            ],
        },
        "double_instanton" => CatalogEntry {
            name: "double_instanton",
            spec: spec(
                coeffs(2.0, 1.0, 2.0, 2.0),
                Profile::instanton_p(),
                Profile::InstantonQ,
            ),
            window: Window::new(-12.0, 4.0, -12.0, 4.0).expect("valid window"),
            reference_times: vec![0.0, 3.0, 6.0],
            degenerate_times: vec![],
            period: None,
            known_singular: false,
            notes: vec![
                "two bonded peaks decaying in time",
                "max U about 0.6, 0.006, 1.5e-5 at t = 0, 3, 6",
                "pole at zeta = -1 masked",
            ],
        },
        other => {
            return Err(Error::UnknownCase {
                name: other.to_string(),
                valid: CASE_NAMES.join(", "),
            })
        }
    };
    Ok(entry)
}

/// All entries in listing order.
pub fn all_cases() -> Vec<CatalogEntry> {
    CASE_NAMES.iter().map(|n| build_case(n).expect("known name")).collect()
}
