use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::analysis::Extrema;
use super::grid::FieldGrid;

/// CSV with header `x,y,<field>` and one row per valid point, row-major,
/// in 17 significant digits.
pub fn to_csv(grid: &FieldGrid) -> String {
    let mut out = format!("x,y,{}\n", grid.kind.label());
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            if let Some(v) = grid.get(ix, iy) {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", grid.x(ix), grid.y(iy), v).unwrap();
            }
        }
    }
    out
}

/// Parses CSV written by [`to_csv`] into `(x, y, value)` rows.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.starts_with("x,y,") => {}
        _ => {
            return Err(Error::Csv {
                line: 1,
                msg: "expected header 'x,y,<field>'".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Csv {
                    line: i + 1,
                    msg: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::Csv {
                    line: i + 1,
                    msg: format!("'{s}': {e}"),
                })
            };
            Ok((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?))
        })
        .collect()
}

/// 16-bit binary PGM plus the sidecar describing its scaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm16 {
    pub bytes: Vec<u8>,
    pub sidecar: String,
}

/// Encodes the grid as a `P5` image with maxval 65535. Values are scaled
/// linearly from `[0, max]`; masked and negative values map to 0, and a grid
/// without positive values gives an all-zero image. The first image row is
/// the lowest `y`.
pub fn to_pgm16(grid: &FieldGrid) -> Pgm16 {
    let max = grid.global_max().map_or(0.0, |m| m.0);
    let mut bytes = format!("P5\n{} {}\n65535\n", grid.nx, grid.ny).into_bytes();
    bytes.reserve(2 * grid.nx * grid.ny);
    for (&v, &m) in grid.values.iter().zip(&grid.mask) {
        let level = if m && max > 0.0 && v > 0.0 {
            (v / max * 65535.0).round().min(65535.0) as u16
        } else {
            0
        };
        bytes.extend_from_slice(&level.to_be_bytes());
    }
    let mut sidecar = String::new();
    writeln!(sidecar, "format: pgm16").unwrap();
    writeln!(sidecar, "field: {}", grid.kind.label()).unwrap();
    writeln!(sidecar, "width: {}", grid.nx).unwrap();
    writeln!(sidecar, "height: {}", grid.ny).unwrap();
    writeln!(sidecar, "t: {:.16e}", grid.t).unwrap();
    writeln!(sidecar, "x_range: {:.16e} {:.16e}", grid.window.x.0, grid.window.x.1).unwrap();
    writeln!(sidecar, "y_range: {:.16e} {:.16e}", grid.window.y.0, grid.window.y.1).unwrap();
    writeln!(sidecar, "first_row: y_min").unwrap();
    writeln!(sidecar, "scale_min: 0").unwrap();
    writeln!(sidecar, "scale_max: {max:.16e}").unwrap();
    writeln!(sidecar, "masked_value: 0").unwrap();
    Pgm16 { bytes, sidecar }
}

/// Line-oriented `key: value` summary of a grid and its maxima.
pub fn to_report(grid: &FieldGrid, extrema: &Extrema) -> String {
    let mut out = String::new();
    writeln!(out, "field: {}", grid.kind.label()).unwrap();
    writeln!(out, "t: {:.16e}", grid.t).unwrap();
    writeln!(out, "resolution: {}x{}", grid.nx, grid.ny).unwrap();
    writeln!(out, "x_range: {:.6} {:.6}", grid.window.x.0, grid.window.x.1).unwrap();
    writeln!(out, "y_range: {:.6} {:.6}", grid.window.y.0, grid.window.y.1).unwrap();
    writeln!(out, "valid_points: {}", grid.valid_count()).unwrap();
    writeln!(out, "masked_points: {}", grid.nx * grid.ny - grid.valid_count()).unwrap();
    if let Some(m) = extrema.global_max {
        writeln!(out, "global_max: {:.9e}", m.value).unwrap();
        writeln!(out, "global_max_at: {:.6} {:.6}", m.x, m.y).unwrap();
    }
    writeln!(out, "local_maxima: {}", extrema.local_maxima.len()).unwrap();
    for (i, p) in extrema.local_maxima.iter().enumerate() {
        writeln!(out, "local_max.{i}: {:.9e} at {:.6} {:.6}", p.value, p.x, p.y).unwrap();
    }
    out
}
