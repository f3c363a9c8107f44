use rayon::prelude::*;

use crate::ansatz::{eval_U, eval_f, CoordinatePoint, PointStatus, SolutionSpec, Window};
use crate::auxiliary::Auxiliaries;
use crate::error::{Error, Result};

/// Smallest resolution accepted by [`sample_field`].
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// Intensity `U = |u|²`.
    Intensity,
    /// `φ` with the derived backgrounds.
    Phi,
    /// The denominator `f`.
    Denominator,
}

impl FieldKind {
    pub fn label(&self) -> &'static str {
        match self {
            FieldKind::Intensity => "U",
            FieldKind::Phi => "phi",
            FieldKind::Denominator => "f",
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" | "u" | "intensity" => Ok(FieldKind::Intensity),
            "phi" => Ok(FieldKind::Phi),
            "f" => Ok(FieldKind::Denominator),
            other => Err(Error::Config(format!("unknown field '{other}', expected U, phi or f"))),
        }
    }
}

/// Field samples on a uniform `nx × ny` grid, row-major with row 0 at the
/// lower `y` bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub kind: FieldKind,
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub t: f64,
    pub values: Vec<f64>,
    /// `true` where the value is valid.
    pub mask: Vec<bool>,
}

impl FieldGrid {
    /// Assembles a grid from raw parts; invalid entries are forced to zero.
    pub fn from_parts(
        kind: FieldKind,
        window: Window,
        (nx, ny): (usize, usize),
        t: f64,
        mut values: Vec<f64>,
        mut mask: Vec<bool>,
    ) -> Result<Self> {
        if nx < 1 || ny < 1 {
            return Err(Error::GridTooSmall { min: 1, got: nx.min(ny) });
        }
        if values.len() != nx * ny || mask.len() != nx * ny {
            return Err(Error::InvalidSpec(format!(
                "grid of {nx}x{ny} needs {} values and mask entries",
                nx * ny
            )));
        }
        for (v, m) in values.iter_mut().zip(mask.iter_mut()) {
            if !v.is_finite() {
                *m = false;
            }
            if !*m {
                *v = 0.0;
            }
        }
        Ok(FieldGrid {
            kind,
            window,
            nx,
            ny,
            t,
            values,
            mask,
        })
    }

    pub fn x(&self, ix: usize) -> f64 {
        if self.nx == 1 {
            self.window.x.0
        } else {
            self.window.x_at(ix, self.nx)
        }
    }

    pub fn y(&self, iy: usize) -> f64 {
        if self.ny == 1 {
            self.window.y.0
        } else {
            self.window.y_at(iy, self.ny)
        }
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn get(&self, ix: usize, iy: usize) -> Option<f64> {
        let i = self.index(ix, iy);
        self.mask[i].then(|| self.values[i])
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// Largest valid value and its `(x, y)`; the first in row-major order on
    /// ties.
    pub fn global_max(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, usize)> = None;
        for (i, (&v, &m)) in self.values.iter().zip(&self.mask).enumerate() {
            if m && best.is_none_or(|(b, _)| v > b) {
                best = Some((v, i));
            }
        }
        best.map(|(v, i)| (v, self.x(i % self.nx), self.y(i / self.nx)))
    }

    /// `sqrt(Σ v² dx dy)` over valid points.
    pub fn l2_norm(&self) -> f64 {
        let (dx, dy) = if self.nx > 1 && self.ny > 1 {
            self.window.spacing(self.nx, self.ny)
        } else {
            (1.0, 1.0)
        };
        let mut sum = crate::calculus::CompensatedSum::default();
        for (&v, &m) in self.values.iter().zip(&self.mask) {
            if m {
                sum.add(v * v);
            }
        }
        (sum.total() * dx * dy).sqrt()
    }
}

/// Samples `kind` at time `t` on an `nx × ny` grid of the window. Points
/// outside the window shape, in pole bands, where `f` is singular, or where
/// `det p_ζ q_η < 0` (for `U`) are masked.
pub fn sample_field(
    spec: &SolutionSpec,
    aux: Option<&Auxiliaries>,
    kind: FieldKind,
    window: &Window,
    t: f64,
    (nx, ny): (usize, usize),
) -> Result<FieldGrid> {
    if nx < MIN_RESOLUTION || ny < MIN_RESOLUTION {
        return Err(Error::GridTooSmall {
            min: MIN_RESOLUTION,
            got: nx.min(ny),
        });
    }
    if kind == FieldKind::Phi && aux.is_none() {
        return Err(Error::MissingAuxiliaries("phi needs the derived backgrounds"));
    }
    let cells: Vec<(f64, bool)> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|iy| {
            let y = window.y_at(iy, ny);
            (0..nx).map(move |ix| {
                let x = window.x_at(ix, nx);
                if !window.admits(x, y) {
                    return (0.0, false);
                }
                let pt = CoordinatePoint::new(x, y, t);
                let u = eval_U(spec, &pt);
                match kind {
                    FieldKind::Intensity => (u.value, u.status == PointStatus::Valid),
                    FieldKind::Phi => {
                        let ok = matches!(u.status, PointStatus::Valid | PointStatus::SignViolation);
                        match aux.expect("checked").phi(&pt) {
                            Ok(v) if ok => (v, true),
                            _ => (0.0, false),
                        }
                    }
                    FieldKind::Denominator => {
                        let ok = !matches!(u.status, PointStatus::Pole | PointStatus::NonFinite);
                        (eval_f(spec, &pt).value, ok)
                    }
                }
            })
        })
        .collect();
    let (values, mask): (Vec<f64>, Vec<bool>) = cells.into_iter().unzip();
    let grid = FieldGrid::from_parts(kind, *window, (nx, ny), t, values, mask)?;
    if grid.valid_count() == 0 {
        return Err(Error::WindowSingular);
    }
    Ok(grid)
}
