use rayon::prelude::*;

use crate::calculus::guarded;
use crate::error::{Error, Result};

use super::coords::{CoordinatePoint, Window};
use super::eval::ProfileJets;
use super::spec::SolutionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    /// `U ≡ 0` on the whole window.
    Degenerate,
    /// `det · p_ζ · q_η < 0` somewhere.
    SignViolating,
    /// `f` vanishes or changes sign inside the window.
    Singular,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Admissible => "admissible",
            Verdict::Degenerate => "degenerate",
            Verdict::SignViolating => "sign-violating",
            Verdict::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    pub samples: usize,
    pub min_abs_f: f64,
    pub min_abs_f_at: Option<CoordinatePoint>,
    /// Grid cells (lower-left indices) whose corner values of `f` change sign.
    pub sign_change_cells: Vec<(usize, usize)>,
    pub guard_points: usize,
    pub sign_violations: usize,
    pub degenerate_points: usize,
    pub pole_points: usize,
    pub nonfinite_points: usize,
    pub witnesses: Vec<CoordinatePoint>,
}

#[derive(Debug, Clone, Copy)]
struct ScanSample {
    pub pt: CoordinatePoint,
    pub f: f64,
    pub amplitude: f64,
    pub degenerate: bool,
    pub pole: bool,
    pub finite: bool,
    pub in_window: bool,
}

fn scan_grid(spec: &SolutionSpec, window: &Window, t: f64, nx: usize, ny: usize) -> Vec<ScanSample> {
    (0..ny)
        .into_par_iter()
        .flat_map_iter(|iy| {
            let y = window.y_at(iy, ny);
            (0..nx).map(move |ix| {
                let x = window.x_at(ix, nx);
                let pt = CoordinatePoint::new(x, y, t);
                let jets = ProfileJets::at(spec, &pt);
                let f = jets.f(spec);
                ScanSample {
                    pt,
                    f,
                    amplitude: jets.amplitude_factor(spec),
                    degenerate: jets.is_degenerate(spec),
                    pole: spec.near_pole(pt.zeta(), pt.eta()),
                    finite: jets.is_finite() && f.is_finite(),
                    in_window: window.admits(x, y),
                }
            })
        })
        .collect()
}

const MAX_WITNESSES: usize = 8;

/// Scans `nx × ny` samples of the window at time `t` for the admissibility
/// conditions of the separated solution: `f ≠ 0` and `det · p_ζ · q_η > 0`.
pub fn check_admissibility(
    spec: &SolutionSpec,
    window: &Window,
    t: f64,
    samples: (usize, usize),
) -> Result<AdmissibilityReport> {
    let (nx, ny) = samples;
    if nx < 2 || ny < 2 {
        return Err(Error::GridTooSmall { min: 2, got: nx.min(ny) });
    }
    let grid = scan_grid(spec, window, t, nx, ny);
    let usable = |s: &ScanSample| s.in_window && s.finite && !s.pole;

    let mut report = AdmissibilityReport {
        verdict: Verdict::Admissible,
        samples: 0,
        min_abs_f: f64::INFINITY,
        min_abs_f_at: None,
        sign_change_cells: Vec::new(),
        guard_points: 0,
        sign_violations: 0,
        degenerate_points: 0,
        pole_points: 0,
        nonfinite_points: 0,
        witnesses: Vec::new(),
    };
    let mut singular_w = Vec::new();
    let mut violation_w = Vec::new();

    for s in &grid {
        if !s.in_window {
            continue;
        }
        if s.pole {
            report.pole_points += 1;
            continue;
        }
        if !s.finite {
            report.nonfinite_points += 1;
            continue;
        }
        report.samples += 1;
        if s.f.abs() < report.min_abs_f {
            report.min_abs_f = s.f.abs();
            report.min_abs_f_at = Some(s.pt);
        }
        if guarded(2.0 * s.amplitude.abs().sqrt(), s.f) {
            report.guard_points += 1;
            singular_w.push(s.pt);
        }
        if s.degenerate {
            report.degenerate_points += 1;
        } else if s.amplitude < 0.0 {
            report.sign_violations += 1;
            violation_w.push(s.pt);
        }
    }

    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let corners = [
                &grid[iy * nx + ix],
                &grid[iy * nx + ix + 1],
                &grid[(iy + 1) * nx + ix],
                &grid[(iy + 1) * nx + ix + 1],
            ];
            if !corners.iter().all(|c| usable(c)) {
                continue;
            }
            let pos = corners.iter().any(|c| c.f > 0.0);
            let neg = corners.iter().any(|c| c.f < 0.0);
            if pos && neg {
                report.sign_change_cells.push((ix, iy));
                singular_w.push(corners[0].pt);
            }
        }
    }

    report.verdict = if !singular_w.is_empty() {
        report.witnesses = singular_w;
        Verdict::Singular
    } else if report.sign_violations > 0 {
        report.witnesses = violation_w;
        Verdict::SignViolating
    } else if report.samples > 0 && report.degenerate_points == report.samples {
        report.witnesses = grid.iter().filter(|s| usable(s)).map(|s| s.pt).take(1).collect();
        Verdict::Degenerate
    } else {
        Verdict::Admissible
    };
    report.witnesses.truncate(MAX_WITNESSES);
    Ok(report)
}
