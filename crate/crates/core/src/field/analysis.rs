use std::collections::VecDeque;

use crate::ansatz::{eval_U, CoordinatePoint, PointStatus, SolutionSpec, Window};
use crate::error::{Error, Result};

use super::grid::{sample_field, FieldGrid, FieldKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extrema {
    pub global_max: Option<Peak>,
    /// Strict local maxima over valid 8-neighbours, one per plateau,
    /// in row-major order of their first cell.
    pub local_maxima: Vec<Peak>,
}

const NEIGHBOURS: [(isize, isize); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

/// Finds the global and local maxima of the valid cells. A connected set of
/// equal values counts once, and only if it has at least one valid
/// neighbour and all of them are strictly lower.
pub fn analyze_extrema(grid: &FieldGrid) -> Extrema {
    let (nx, ny) = (grid.nx, grid.ny);
    let global_max = grid.global_max().map(|(value, x, y)| Peak { x, y, value });
    let mut seen = vec![false; nx * ny];
    let mut local_maxima = Vec::new();
    let mut queue = VecDeque::new();
    let mut plateau = Vec::new();

    for start in 0..nx * ny {
        if seen[start] || !grid.mask[start] {
            continue;
        }
        let level = grid.values[start];
        seen[start] = true;
        queue.push_back(start);
        plateau.clear();
        let mut is_max = true;
        let mut has_outside = false;
        while let Some(i) = queue.pop_front() {
            plateau.push(i);
            let (ix, iy) = ((i % nx) as isize, (i / nx) as isize);
            for (dx, dy) in NEIGHBOURS {
                let (jx, jy) = (ix + dx, iy + dy);
                if jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                    continue;
                }
                let j = jy as usize * nx + jx as usize;
                if !grid.mask[j] {
                    continue;
                }
                let v = grid.values[j];
                if v == level {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                } else {
                    has_outside = true;
                    if v > level {
                        is_max = false;
                    }
                }
            }
        }
        if is_max && has_outside {
            let first = *plateau.iter().min().expect("nonempty plateau");
            local_maxima.push(Peak {
                x: grid.x(first % nx),
                y: grid.y(first / nx),
                value: level,
            });
        }
    }
    local_maxima.sort_by(|a, b| {
        (a.y, a.x)
            .partial_cmp(&(b.y, b.x))
            .expect("finite coordinates")
    });
    Extrema {
        global_max,
        local_maxima,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    GlobalMax,
    L2,
}

impl Statistic {
    pub fn of(&self, grid: &FieldGrid) -> f64 {
        match self {
            Statistic::GlobalMax => grid.global_max().map_or(0.0, |m| m.0),
            Statistic::L2 => grid.l2_norm(),
        }
    }
}

/// Relative tolerance under which two statistic values are equal.
pub const PERIOD_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodEstimate {
    /// Accepted period, if the series repeats to within the tie tolerance.
    pub period: Option<f64>,
    /// Best candidate found, accepted or not.
    pub candidate: f64,
    /// Largest relative mismatch of the series shifted by the candidate.
    pub mismatch: f64,
    pub resolution: f64,
    /// The series does not vary at all.
    pub constant: bool,
    pub series: Vec<(f64, f64)>,
}

/// Configuration of the period search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSearch {
    pub t_range: (f64, f64),
    pub n_t: usize,
    pub statistic: Statistic,
    pub samples: (usize, usize),
}

fn statistic_at(spec: &SolutionSpec, window: &Window, search: &PeriodSearch, t: f64) -> Result<f64> {
    match sample_field(spec, None, FieldKind::Intensity, window, t, search.samples) {
        Ok(g) => Ok(search.statistic.of(&g)),
        Err(e) => Err(e),
    }
}

/// Smallest `T` in `(0, range/2]` with `S(t + T) = S(t)` over the sampled
/// times, where `S` is the statistic of `U` on the window. Lags on the
/// sampling grid are scanned first; a candidate off the grid is refined by
/// golden-section search on the continuous shift.
pub fn estimate_period(spec: &SolutionSpec, window: &Window, search: &PeriodSearch) -> Result<PeriodEstimate> {
    let n = search.n_t;
    let (t0, t1) = search.t_range;
    if n < 16 || !(t1 > t0) {
        return Err(Error::InvalidSpec(format!(
            "period search needs at least 16 samples over an increasing range, got {n} over {t0}:{t1}"
        )));
    }
    let dt = (t1 - t0) / n as f64;
    let times: Vec<f64> = (0..n).map(|k| t0 + k as f64 * dt).collect();
    let values = times
        .iter()
        .map(|&t| statistic_at(spec, window, search, t))
        .collect::<Result<Vec<f64>>>()?;
    let series: Vec<(f64, f64)> = times.iter().copied().zip(values.iter().copied()).collect();

    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let spread = values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
        - values.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if spread <= PERIOD_TIE_TOL * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
        return Ok(PeriodEstimate {
            period: None,
            candidate: f64::NAN,
            mismatch: 0.0,
            resolution: dt,
            constant: true,
            series,
        });
    }

    let lag_mismatch = |lag: usize| -> f64 {
        (0..n - lag)
            .map(|k| (values[k + lag] - values[k]).abs())
            .fold(0.0, f64::max)
            / scale
    };
    let mismatches: Vec<f64> = (1..=n / 2).map(lag_mismatch).collect();
    let best = mismatches.iter().copied().fold(f64::INFINITY, f64::min);
    let lag = 1 + mismatches
        .iter()
        .position(|&m| m <= best + PERIOD_TIE_TOL)
        .expect("nonempty lag scan");

    let mut candidate = lag as f64 * dt;
    let mut mismatch = mismatches[lag - 1];
    let mut resolution = dt;
    if mismatch > PERIOD_TIE_TOL {
        let shifted = |shift: f64| -> Result<f64> {
            let mut worst = 0.0f64;
            for (k, &t) in times.iter().enumerate() {
                if t + shift > t1 {
                    break;
                }
                worst = worst.max((statistic_at(spec, window, search, t + shift)? - values[k]).abs());
            }
            Ok(worst / scale)
        };
        let (mut a, mut b) = ((lag as f64 - 1.0) * dt, (lag as f64 + 1.0) * dt);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
        let (mut fc, mut fd) = (shifted(c)?, shifted(d)?);
        for _ in 0..40 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = shifted(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = shifted(d)?;
            }
            if b - a < 1e-12 * (1.0 + b.abs()) {
                break;
            }
        }
        let (t_best, m_best) = if fc < fd { (c, fc) } else { (d, fd) };
        if m_best < mismatch {
            candidate = t_best;
            mismatch = m_best;
            resolution = b - a;
        }
    }
    Ok(PeriodEstimate {
        period: (mismatch <= PERIOD_TIE_TOL).then_some(candidate),
        candidate,
        mismatch,
        resolution,
        constant: false,
        series,
    })
}

/// `(t, max U)` over the window at each time.
pub fn decay_profile(spec: &SolutionSpec, window: &Window, times: &[f64], samples: (usize, usize)) -> Result<Vec<(f64, f64)>> {
    if times.is_empty() {
        return Err(Error::InvalidSpec("decay profile needs at least one time".into()));
    }
    times
        .iter()
        .map(|&t| {
            let g = sample_field(spec, None, FieldKind::Intensity, window, t, samples)?;
            Ok((t, Statistic::GlobalMax.of(&g)))
        })
        .collect()
}

/// Map applied to `(x, y)` when comparing `U` at two times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Identity,
    /// `(x, y) → (x, −y)`.
    ReflectY,
    /// `(x, y) → (−x, −y)`.
    PointReflection,
}

impl Symmetry {
    fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        match self {
            Symmetry::Identity => (x, y),
            Symmetry::ReflectY => (x, -y),
            Symmetry::PointReflection => (-x, -y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefect {
    pub max_abs: f64,
    pub samples: usize,
}

/// Largest `|U(x, y, t_a) − U(σ(x, y), t_b)|` over grid points where both
/// evaluations are valid.
pub fn symmetry_defect(
    spec: &SolutionSpec,
    window: &Window,
    (nx, ny): (usize, usize),
    (t_a, t_b): (f64, f64),
    symmetry: Symmetry,
) -> SymmetryDefect {
    let mut out = SymmetryDefect { max_abs: 0.0, samples: 0 };
    for iy in 0..ny {
        for ix in 0..nx {
            let (x, y) = (window.x_at(ix, nx), window.y_at(iy, ny));
            let (sx, sy) = symmetry.apply(x, y);
            if !window.admits(x, y) || !window.admits(sx, sy) {
                continue;
            }
            let a = eval_U(spec, &CoordinatePoint::new(x, y, t_a));
            let b = eval_U(spec, &CoordinatePoint::new(sx, sy, t_b));
            if a.status != PointStatus::Valid || b.status != PointStatus::Valid {
                continue;
            }
            out.max_abs = out.max_abs.max((a.value - b.value).abs());
            out.samples += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_case;
    use std::f64::consts::PI;

    fn grid(nx: usize, ny: usize, values: Vec<f64>) -> FieldGrid {
        let mask = vec![true; values.len()];
        FieldGrid::from_parts(FieldKind::Intensity, Window::square(1.0), (nx, ny), 0.0, values, mask).unwrap()
    }

    #[test]
    fn single_peak() {
        let mut v = vec![0.0; 25];
        v[12] = 1.0;
        v[13] = 0.5;
        let e = analyze_extrema(&grid(5, 5, v));
        assert_eq!(e.local_maxima.len(), 1);
        assert_eq!(e.global_max.unwrap().value, 1.0);
    }

    #[test]
    fn plateau_counts_once() {
        let mut v = vec![0.0; 25];
        v[11] = 2.0;
        v[12] = 2.0;
        v[17] = 2.0;
        assert_eq!(analyze_extrema(&grid(5, 5, v)).local_maxima.len(), 1);
    }

    #[test]
    fn flat_grid_has_no_maxima() {
        let e = analyze_extrema(&grid(4, 4, vec![0.0; 16]));
        assert!(e.local_maxima.is_empty());
        assert_eq!(e.global_max.unwrap().value, 0.0);
    }

    #[test]
    fn masked_neighbours_are_ignored() {
        let mut g = grid(3, 1, vec![1.0, 5.0, 3.0]);
        g.mask[1] = false;
        g.values[1] = 0.0;
        // 1.0 and 3.0 are not adjacent anymore; each has no valid neighbour
        assert!(analyze_extrema(&g).local_maxima.is_empty());
    }

    #[test]
    fn global_max_dominates_local() {
        let v: Vec<f64> = (0..36).map(|i| ((i * 7919) % 13) as f64).collect();
        let e = analyze_extrema(&grid(6, 6, v));
        let g = e.global_max.unwrap().value;
        assert!(e.local_maxima.iter().all(|p| p.value <= g));
    }

    #[test]
    fn breather_period() {
        let e = build_case("breather").unwrap();
        let search = PeriodSearch {
            t_range: (0.0, 2.0 * PI),
            n_t: 32,
            statistic: Statistic::GlobalMax,
            samples: (24, 24),
        };
        let p = estimate_period(&e.spec, &e.window, &search).unwrap();
        assert!((p.period.unwrap() - PI).abs() <= 2.0 * PI / 32.0, "{p:?}");
    }

    #[test]
    fn static_case_has_no_period() {
        let spec = crate::ansatz::SolutionSpec::new(
            crate::ansatz::SeparationCoefficients::new(1.0, 1.0, 1.0, 2.0).unwrap(),
            crate::ansatz::Profile::exponential(1.0, 0.0, 1.0),
            crate::ansatz::Profile::exponential(1.0, 0.0, 1.0),
        )
        .unwrap();
        let search = PeriodSearch {
            t_range: (0.0, 4.0),
            n_t: 16,
            statistic: Statistic::L2,
            samples: (8, 8),
        };
        let p = estimate_period(&spec, &Window::square(4.0), &search).unwrap();
        assert!(p.constant);
        assert_eq!(p.period, None);
    }

    #[test]
    fn dromion_decay_is_deterministic() {
        let e = build_case("dromion").unwrap();
        let d = decay_profile(&e.spec, &e.window, &[0.0, 0.0], (32, 32)).unwrap();
        assert_eq!(d[0].1.to_bits(), d[1].1.to_bits());
        assert!(decay_profile(&e.spec, &e.window, &[], (32, 32)).is_err());
    }

    #[test]
    fn dromion_reflection() {
        let e = build_case("dromion").unwrap();
        let d = symmetry_defect(&e.spec, &e.window, (41, 41), (0.0, 0.0), Symmetry::ReflectY);
        assert_eq!(d.samples, 41 * 41);
        assert!(d.max_abs < 1e-12);
    }
}
