//! Residual checks of the assembled solution: the Hirota bilinear form, the
//! rotated-coordinate PDE system, and singularity scans.

mod bilinear;
mod hirota;
mod pde;
mod report;
mod scan;

pub use bilinear::{bilinear_line1, bilinear_line2, bilinear_residuals};
pub use hirota::{hirota, JET_ORDER};
pub use pde::{pde_convergence, pde_line1, pde_line2, pde_residuals, Convergence};
pub use report::{Applicability, ResidualFlags, ResidualReport};
pub use scan::{singularity_scan, SingularityScan};

use rayon::prelude::*;

use crate::ansatz::{CoordinatePoint, Window};
use crate::auxiliary::{Auxiliaries, ConsistencyReport};
use crate::calculus::{Stencil, DEFAULT_STEP};
use crate::error::{Error, Result};
use report::Outcome;

/// Largest `c1`/`c2` variation for which the envelope equation is checked.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Probes per axis for the consistency gate.
pub const CONSISTENCY_PROBES: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    pub samples: (usize, usize),
    /// Check the envelope equation even when the separation is inconsistent.
    pub force: bool,
    pub consistency_tol: f64,
    pub stencil: Stencil,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions {
            samples: (64, 64),
            force: false,
            consistency_tol: CONSISTENCY_TOL,
            stencil: Stencil::new(2, 4, DEFAULT_STEP).expect("valid default stencil"),
        }
    }
}

impl ResidualOptions {
    pub fn with_samples(mut self, nx: usize, ny: usize) -> Self {
        self.samples = (nx, ny);
        self
    }

    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }
}

/// `c1`, `c2` consistency over the window's `ζ` and `η` ranges.
pub fn window_consistency(aux: &Auxiliaries, window: &Window, t: f64) -> ConsistencyReport {
    let ((z0, z1), (e0, e1)) = window.rotated_extent();
    let probes = |a: f64, b: f64| -> Vec<f64> {
        (0..CONSISTENCY_PROBES)
            .map(|k| a + (b - a) * k as f64 / (CONSISTENCY_PROBES - 1) as f64)
            .collect()
    };
    aux.consistency_c1_c2(t, &probes(z0, z1), &probes(e0, e1))
}

/// Reason to skip the envelope equation, or `None` to check it.
fn gate(aux: &Auxiliaries, window: &Window, t: f64, opts: &ResidualOptions) -> Option<String> {
    if opts.force {
        return None;
    }
    match window_consistency(aux, window, t) {
        ConsistencyReport::NotApplicable { reason } => Some(format!("consistency undetermined ({reason})")),
        report if report.is_consistent(opts.consistency_tol) => None,
        report => Some(format!(
            "inconsistent separation: c1/c2 variation {:.3e}, policy gap {:.3e}",
            report.variation().unwrap_or(f64::NAN),
            report.policy_gap().unwrap_or(f64::NAN)
        )),
    }
}

/// Evaluates `check` on the admitted points of an `nx × ny` grid, rows in
/// parallel, and reduces in row-major order.
fn scan(
    name: &str,
    window: &Window,
    t: f64,
    samples: (usize, usize),
    check: impl Fn(&CoordinatePoint) -> Outcome + Sync,
) -> Result<ResidualReport> {
    let (nx, ny) = samples;
    if nx < 2 || ny < 2 {
        return Err(Error::GridTooSmall { min: 2, got: nx.min(ny) });
    }
    let outcomes: Vec<Outcome> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|iy| {
            let y = window.y_at(iy, ny);
            let check = &check;
            (0..nx).map(move |ix| {
                let x = window.x_at(ix, nx);
                if window.admits(x, y) {
                    check(&CoordinatePoint::new(x, y, t))
                } else {
                    Outcome::Masked
                }
            })
        })
        .collect();
    Ok(ResidualReport::reduce(name, &outcomes))
}
