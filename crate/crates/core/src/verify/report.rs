use std::fmt::Write as _;

use crate::ansatz::CoordinatePoint;
use crate::calculus::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub enum Applicability {
    Applicable,
    NotApplicable(String),
}

/// Counts of samples excluded from, or annotated in, a residual scan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ResidualFlags {
    /// Local `U ≡ 0`; the sample is kept.
    pub degenerate: usize,
    /// `det p_ζ q_η < 0`.
    pub sign_violation: usize,
    /// Inside a pole band or outside the window shape.
    pub masked: usize,
    /// `|f|` below the division guard.
    pub singular: usize,
    pub nonfinite: usize,
}

impl ResidualFlags {
    pub fn merge(&mut self, other: &ResidualFlags) {
        self.degenerate += other.degenerate;
        self.sign_violation += other.sign_violation;
        self.masked += other.masked;
        self.singular += other.singular;
        self.nonfinite += other.nonfinite;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub check_name: String,
    pub applicability: Applicability,
    /// Largest absolute residual.
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Largest residual relative to the magnitude of the terms it balances.
    pub max_rel: Option<f64>,
    pub worst_point: Option<CoordinatePoint>,
    pub samples: usize,
    pub flags: ResidualFlags,
}

/// One scanned point.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Outcome {
    Sample {
        pt: CoordinatePoint,
        abs: f64,
        rel: Option<f64>,
        degenerate: bool,
        sign_violation: bool,
    },
    Masked,
    Singular,
    NonFinite,
    SignViolation,
}

impl ResidualReport {
    pub fn not_applicable(check_name: impl Into<String>, reason: impl Into<String>) -> Self {
        ResidualReport {
            check_name: check_name.into(),
            applicability: Applicability::NotApplicable(reason.into()),
            max_abs: 0.0,
            mean_abs: 0.0,
            max_rel: None,
            worst_point: None,
            samples: 0,
            flags: ResidualFlags::default(),
        }
    }

    /// Reduces outcomes in their given order, so the result does not depend
    /// on how they were computed.
    pub(crate) fn reduce(check_name: impl Into<String>, outcomes: &[Outcome]) -> Self {
        let mut report = ResidualReport {
            check_name: check_name.into(),
            applicability: Applicability::Applicable,
            max_abs: 0.0,
            mean_abs: 0.0,
            max_rel: None,
            worst_point: None,
            samples: 0,
            flags: ResidualFlags::default(),
        };
        let mut sum = CompensatedSum::default();
        let mut worst = f64::NEG_INFINITY;
        for o in outcomes {
            match *o {
                Outcome::Sample {
                    pt,
                    abs,
                    rel,
                    degenerate,
                    sign_violation,
                } => {
                    report.samples += 1;
                    sum.add(abs);
                    report.max_abs = report.max_abs.max(abs);
                    if let Some(r) = rel {
                        report.max_rel = Some(report.max_rel.map_or(r, |m| m.max(r)));
                    }
                    let key = rel.unwrap_or(abs);
                    if key > worst {
                        worst = key;
                        report.worst_point = Some(pt);
                    }
                    report.flags.degenerate += degenerate as usize;
                    report.flags.sign_violation += sign_violation as usize;
                }
                Outcome::Masked => report.flags.masked += 1,
                Outcome::Singular => report.flags.singular += 1,
                Outcome::NonFinite => report.flags.nonfinite += 1,
                Outcome::SignViolation => report.flags.sign_violation += 1,
            }
        }
        if report.samples > 0 {
            report.mean_abs = sum.total() / report.samples as f64;
        }
        report
    }

    pub fn is_applicable(&self) -> bool {
        self.applicability == Applicability::Applicable
    }

    /// The number compared against tolerances: relative when available.
    pub fn metric(&self) -> f64 {
        self.max_rel.unwrap_or(self.max_abs)
    }

    /// `None` when not applicable; a scan without samples fails.
    pub fn passes(&self, tol: f64) -> Option<bool> {
        match self.applicability {
            Applicability::NotApplicable(_) => None,
            Applicability::Applicable => Some(self.samples > 0 && self.metric() < tol),
        }
    }

    /// `key: value` lines, each key prefixed with the check name.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let n = &self.check_name;
        match &self.applicability {
            Applicability::Applicable => writeln!(out, "{n}.applicable: true").unwrap(),
            Applicability::NotApplicable(reason) => {
                writeln!(out, "{n}.applicable: false").unwrap();
                writeln!(out, "{n}.reason: {reason}").unwrap();
            }
        }
        writeln!(out, "{n}.samples: {}", self.samples).unwrap();
        writeln!(out, "{n}.max_abs: {:.6e}", self.max_abs).unwrap();
        writeln!(out, "{n}.mean_abs: {:.6e}", self.mean_abs).unwrap();
        if let Some(r) = self.max_rel {
            writeln!(out, "{n}.max_rel: {r:.6e}").unwrap();
        }
        if let Some(p) = self.worst_point {
            writeln!(out, "{n}.worst_point: {:.6} {:.6} {:.6}", p.x, p.y, p.t).unwrap();
        }
        let f = &self.flags;
        writeln!(out, "{n}.flags.degenerate: {}", f.degenerate).unwrap();
        writeln!(out, "{n}.flags.sign_violation: {}", f.sign_violation).unwrap();
        writeln!(out, "{n}.flags.masked: {}", f.masked).unwrap();
        writeln!(out, "{n}.flags.singular: {}", f.singular).unwrap();
        writeln!(out, "{n}.flags.nonfinite: {}", f.nonfinite).unwrap();
        out
    }
}
