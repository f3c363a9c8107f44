use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dromion::ansatz::Window;

use crate::timeexpr::{parse_time, parse_time_range};

#[derive(Debug, Parser)]
#[command(name = "dromion", version, about = "Evaluate, render and verify separated solutions of the Davey-Stewartson system with gain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in excitation cases.
    Catalog {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a field on a grid and write it as CSV, PGM16 or a text report.
    Render(RenderArgs),
    /// Run residual checks and write a key-value report.
    Verify(VerifyArgs),
    /// Peaks, temporal period or decay of the intensity.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in case name (see `catalog`).
    #[arg(long)]
    pub case: Option<String>,
    /// TOML spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Grid {
    /// x0:x1:y0:y1; defaults to the case window, or [-8, 8]^2 for spec files.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// Points per axis (at least 8).
    #[arg(long, value_parser = parse_resolution)]
    pub res: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pgm16,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Field {
    #[value(name = "U")]
    U,
    Phi,
    F,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub grid: Grid,
    /// Time: a number or a multiple of pi such as 3pi/4.
    #[arg(long, value_parser = parse_time, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "U")]
    pub field: Field,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Render even when f vanishes in the window; singular points are masked.
    #[arg(long)]
    pub allow_singular: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Check {
    Bilinear2,
    Bilinear1,
    Pde2,
    Pde1,
    Consistency,
    Admissibility,
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Bilinear2 => "bilinear2",
            Check::Bilinear1 => "bilinear1",
            Check::Pde2 => "pde2",
            Check::Pde1 => "pde1",
            Check::Consistency => "consistency",
            Check::Admissibility => "admissibility",
        }
    }

    /// Algebraic identities are held to 1e-10, end-to-end checks to 1e-6.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Check::Bilinear2 => 1e-10,
            Check::Consistency => dromion::verify::CONSISTENCY_TOL,
            Check::Bilinear1 | Check::Pde1 | Check::Pde2 | Check::Admissibility => 1e-6,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub grid: Grid,
    #[arg(long, value_parser = parse_time, allow_hyphen_values = true)]
    pub t: f64,
    /// Comma-separated checks; all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<Check>,
    /// Tolerance applied to every numeric check instead of the defaults.
    #[arg(long, value_parser = parse_tolerance)]
    pub tol: Option<f64>,
    /// Finite-difference step for the PDE checks.
    #[arg(long, value_parser = parse_tolerance)]
    pub step: Option<f64>,
    /// Check the envelope equations even when c1, c2 are inconsistent.
    #[arg(long)]
    pub force: bool,
    /// Verify even when f vanishes or U vanishes identically in the window.
    #[arg(long)]
    pub allow_singular: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticArg {
    Max,
    L2,
}

#[derive(Debug, Args)]
#[group(id = "mode", required = true, multiple = false)]
pub struct Mode {
    /// start:end:count of times for the period search.
    #[arg(long, value_parser = parse_time_range, allow_hyphen_values = true)]
    pub period: Option<(f64, f64, usize)>,
    /// Comma-separated times for the decay series.
    #[arg(long, value_parser = parse_time, value_delimiter = ',', allow_hyphen_values = true)]
    pub decay: Option<Vec<f64>>,
    /// Local maxima at --t.
    #[arg(long)]
    pub peaks: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub grid: Grid,
    #[command(flatten)]
    pub mode: Mode,
    #[arg(long, value_parser = parse_time, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, value_enum, default_value = "max")]
    pub statistic: StatisticArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_window(text: &str) -> Result<Window, String> {
    let parts = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid window bound '{p}'")))
        .collect::<Result<Vec<f64>, String>>()?;
    if parts.len() != 4 {
        return Err(format!("invalid window '{text}': expected x0:x1:y0:y1"));
    }
    Window::new(parts[0], parts[1], parts[2], parts[3]).map_err(|e| e.to_string())
}

fn parse_resolution(text: &str) -> Result<usize, String> {
    let n: usize = text.parse().map_err(|_| format!("invalid resolution '{text}'"))?;
    if n < dromion::field::MIN_RESOLUTION {
        return Err(format!("resolution must be at least {}, got {n}", dromion::field::MIN_RESOLUTION));
    }
    Ok(n)
}

fn parse_tolerance(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{text}'")),
    }
}
