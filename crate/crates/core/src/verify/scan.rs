use std::fmt::Write as _;

use crate::ansatz::{check_admissibility, CoordinatePoint, SolutionSpec, Window};
use crate::error::Result;

/// Where `f = a0 + a1 p + a2 q + a3 p q` comes close to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularityScan {
    pub samples: usize,
    pub min_abs_f: f64,
    pub min_abs_f_at: Option<CoordinatePoint>,
    pub sign_change_cells: Vec<(usize, usize)>,
    pub guard_points: usize,
    /// Samples inside profile pole bands.
    pub pole_points: usize,
    pub nonfinite_points: usize,
}

impl SingularityScan {
    pub fn is_clear(&self) -> bool {
        self.sign_change_cells.is_empty() && self.guard_points == 0
    }

    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        writeln!(out, "scan.samples: {}", self.samples).unwrap();
        writeln!(out, "scan.min_abs_f: {:.6e}", self.min_abs_f).unwrap();
        if let Some(p) = self.min_abs_f_at {
            writeln!(out, "scan.min_abs_f_at: {:.6} {:.6}", p.x, p.y).unwrap();
        }
        writeln!(out, "scan.sign_change_cells: {}", self.sign_change_cells.len()).unwrap();
        writeln!(out, "scan.guard_points: {}", self.guard_points).unwrap();
        writeln!(out, "scan.pole_points: {}", self.pole_points).unwrap();
        writeln!(out, "scan.nonfinite_points: {}", self.nonfinite_points).unwrap();
        out
    }
}

/// Brute-force scan of `f` over an `nx × ny` grid at time `t`.
pub fn singularity_scan(spec: &SolutionSpec, window: &Window, t: f64, samples: (usize, usize)) -> Result<SingularityScan> {
    let r = check_admissibility(spec, window, t, samples)?;
    Ok(SingularityScan {
        samples: r.samples,
        min_abs_f: r.min_abs_f,
        min_abs_f_at: r.min_abs_f_at,
        sign_change_cells: r.sign_change_cells,
        guard_points: r.guard_points,
        pole_points: r.pole_points,
        nonfinite_points: r.nonfinite_points,
    })
}
