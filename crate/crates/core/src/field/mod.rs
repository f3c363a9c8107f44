//! Field sampling on `(x, y)` grids, analytics of the sampled fields, and
//! export to CSV, 16-bit PGM and text reports.

mod analysis;
mod export;
mod grid;

pub use analysis::{
    analyze_extrema, decay_profile, estimate_period, symmetry_defect, Extrema, Peak, PeriodEstimate, PeriodSearch,
    Statistic, Symmetry, SymmetryDefect, PERIOD_TIE_TOL,
};
pub use export::{parse_csv, to_csv, to_pgm16, to_report, Pgm16};
pub use grid::{sample_field, FieldGrid, FieldKind, MIN_RESOLUTION};
