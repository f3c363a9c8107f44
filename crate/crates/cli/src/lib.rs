//! Command-line front end for the `dromion` library.

mod args;
mod output;
mod timeexpr;

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::path::Path;

use clap::Parser;
use dromion::ansatz::{check_admissibility, AdmissibilityReport, SolutionSpec, Verdict, Window};
use dromion::auxiliary::{Auxiliaries, ConsistencyReport, SeparationPolicy};
use dromion::calculus::Stencil;
use dromion::catalog::{all_cases, build_case, CatalogEntry};
use dromion::field::{
    analyze_extrema, decay_profile, estimate_period, sample_field, to_csv, to_pgm16, to_report, FieldKind,
    PeriodSearch, Statistic,
};
use dromion::specfile::load_spec;
use dromion::verify::{
    bilinear_line1, bilinear_line2, pde_line1, pde_line2, window_consistency, ResidualOptions, ResidualReport,
};
use dromion::Error;

pub use args::{Check, Cli};
pub use timeexpr::{format_time, parse_time};

use args::{AnalyzeArgs, Command, Field, Format, Grid, RenderArgs, Source, StatisticArg, VerifyArgs};
use output::{emit, sibling, write_atomic};

pub const EXIT_OK: i32 = 0;
/// A verification check failed.
pub const EXIT_FAILED: i32 = 1;
/// Bad arguments or input files.
pub const EXIT_USAGE: i32 = 2;
/// The solution is singular or degenerate at the requested time.
pub const EXIT_SINGULAR: i32 = 3;

const RENDER_RES: usize = 256;
const VERIFY_RES: usize = 64;
const ANALYZE_RES: usize = 128;
const PERIOD_RES: usize = 64;

/// A failure reported as one `kind: message` line on stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    msg: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, msg: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            msg: msg.into(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, "usage", msg)
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::new(EXIT_USAGE, "io", format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.msg)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::UnknownCase { .. } => (EXIT_USAGE, "unknown-case"),
            Error::InvalidSpec(_) => (EXIT_USAGE, "invalid-spec"),
            Error::Config(_) => (EXIT_USAGE, "config"),
            Error::Csv { .. } => (EXIT_USAGE, "csv"),
            Error::GridTooSmall { .. } => (EXIT_USAGE, "usage"),
            Error::WindowSingular => (EXIT_SINGULAR, "singular"),
            _ => (EXIT_FAILED, "error"),
        };
        Failure::new(code, kind, e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Catalog { out } => catalog(out.as_deref()),
        Command::Render(a) => render(&a),
        Command::Verify(a) => verify(&a),
        Command::Analyze(a) => analyze(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{f}");
            f.code
        }
    }
}

struct Loaded {
    label: String,
    spec: SolutionSpec,
    policy: SeparationPolicy,
    window: Window,
}

impl Loaded {
    fn from_source(source: &Source, grid: &Grid) -> Result<Self, Failure> {
        let mut loaded = match (&source.case, &source.spec) {
            (Some(name), _) => {
                let entry = build_case(name)?;
                Loaded {
                    label: entry.name.to_string(),
                    spec: entry.spec,
                    policy: SeparationPolicy::default(),
                    window: entry.window,
                }
            }
            (None, Some(path)) => {
                let doc = load_spec(path)?;
                Loaded {
                    label: path.display().to_string(),
                    spec: doc.spec,
                    policy: doc.policy,
                    window: Window::square(8.0),
                }
            }
            (None, None) => return Err(Failure::usage("one of --case or --spec is required")),
        };
        if let Some(w) = grid.window {
            loaded.window = w;
        }
        Ok(loaded)
    }

    fn aux(&self) -> Auxiliaries {
        Auxiliaries::new(self.spec.clone()).with_policy(self.policy.clone())
    }
}

fn window_text(w: &Window) -> String {
    let mut s = format!("{}:{}:{}:{}", w.x.0, w.x.1, w.y.0, w.y.1);
    if let Some(b) = w.rotated_bound {
        write!(s, " clipped to |zeta|,|eta| <= {b}").unwrap();
    }
    s
}

/// Refuses singular and degenerate input, and sign-violating input when
/// `strict`, unless `allow` is set.
fn gate(report: &AdmissibilityReport, t: f64, strict: bool, allow: bool) -> Result<(), Failure> {
    if allow {
        return Ok(());
    }
    let at = format_time(t);
    match report.verdict {
        Verdict::Admissible => Ok(()),
        Verdict::Singular => {
            let mut msg = format!("f vanishes in the window at t = {at}");
            if let Some(p) = report.min_abs_f_at {
                write!(msg, "; min |f| = {:.3e} near ({:.4}, {:.4})", report.min_abs_f, p.x, p.y).unwrap();
            }
            Err(Failure::new(EXIT_SINGULAR, "singular", msg))
        }
        Verdict::Degenerate => Err(Failure::new(
            EXIT_SINGULAR,
            "degenerate",
            format!("U ≡ 0 on the window at t = {at}"),
        )),
        Verdict::SignViolating if strict => Err(Failure::new(
            EXIT_SINGULAR,
            "sign-violating",
            format!(
                "det p_zeta q_eta < 0 at {} points at t = {at}",
                report.sign_violations
            ),
        )),
        Verdict::SignViolating => Ok(()),
    }
}

fn catalog(out: Option<&Path>) -> Result<i32, Failure> {
    let text: String = all_cases().iter().map(catalog_block).collect::<Vec<_>>().join("\n");
    emit(out, &text).map_err(|e| Failure::io(out.unwrap_or(Path::new("<stdout>")), e))?;
    Ok(EXIT_OK)
}

fn catalog_block(e: &CatalogEntry) -> String {
    let times = |ts: &[f64]| match ts {
        [] => "none".to_string(),
        ts => ts.iter().map(|&t| format_time(t)).collect::<Vec<_>>().join(", "),
    };
    let [a0, a1, a2, a3] = e.spec.coeffs().a();
    let mut s = String::new();
    writeln!(s, "name: {}", e.name).unwrap();
    writeln!(s, "a: {a0} {a1} {a2} {a3}").unwrap();
    writeln!(s, "det: {}", e.spec.coeffs().det()).unwrap();
    writeln!(s, "p: {}", e.spec.p()).unwrap();
    writeln!(s, "q: {}", e.spec.q()).unwrap();
    writeln!(s, "window: {}", window_text(&e.window)).unwrap();
    writeln!(s, "reference_times: {}", times(&e.reference_times)).unwrap();
    writeln!(s, "degenerate_times: {}", times(&e.degenerate_times)).unwrap();
    match e.period {
        Some(p) => writeln!(s, "period: {}", format_time(p)).unwrap(),
        None => writeln!(s, "period: none").unwrap(),
    }
    writeln!(s, "known_singular: {}", e.known_singular).unwrap();
    for n in &e.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    s
}

fn render(a: &RenderArgs) -> Result<i32, Failure> {
    let src = Loaded::from_source(&a.source, &a.grid)?;
    let res = a.grid.res.unwrap_or(RENDER_RES);
    let adm = check_admissibility(&src.spec, &src.window, a.t, (res, res))?;
    gate(&adm, a.t, true, a.allow_singular)?;
    let kind = match a.field {
        Field::U => FieldKind::Intensity,
        Field::Phi => FieldKind::Phi,
        Field::F => FieldKind::Denominator,
    };
    let aux = src.aux();
    let grid = sample_field(&src.spec, Some(&aux), kind, &src.window, a.t, (res, res))?;
    let io = |e| Failure::io(&a.out, e);
    match a.format {
        Format::Csv => write_atomic(&a.out, to_csv(&grid).as_bytes()).map_err(io)?,
        Format::Report => write_atomic(&a.out, to_report(&grid, &analyze_extrema(&grid)).as_bytes()).map_err(io)?,
        Format::Pgm16 => {
            let img = to_pgm16(&grid);
            write_atomic(&a.out, &img.bytes).map_err(io)?;
            let side = sibling(&a.out, ".txt");
            write_atomic(&side, img.sidecar.as_bytes()).map_err(|e| Failure::io(&side, e))?;
        }
    }
    Ok(EXIT_OK)
}

const ALL_CHECKS: [Check; 6] = [
    Check::Admissibility,
    Check::Consistency,
    Check::Bilinear2,
    Check::Bilinear1,
    Check::Pde2,
    Check::Pde1,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not_applicable",
        }
    }

    fn from_pass(p: Option<bool>) -> Self {
        match p {
            Some(true) => Status::Pass,
            Some(false) => Status::Fail,
            None => Status::NotApplicable,
        }
    }
}

fn verify(a: &VerifyArgs) -> Result<i32, Failure> {
    let src = Loaded::from_source(&a.source, &a.grid)?;
    let res = a.grid.res.unwrap_or(VERIFY_RES);
    let t = a.t;
    let adm = check_admissibility(&src.spec, &src.window, t, (res, res))?;
    gate(&adm, t, false, a.allow_singular)?;

    let mut opts = ResidualOptions::default().with_samples(res, res).with_force(a.force);
    if let Some(h) = a.step {
        opts = opts.with_stencil(Stencil::new(2, 4, h)?);
    }
    let checks: Vec<Check> = if a.checks.is_empty() {
        ALL_CHECKS.to_vec()
    } else {
        let mut c = a.checks.clone();
        c.dedup();
        c
    };
    let aux = src.aux();

    let mut out = String::new();
    writeln!(out, "source: {}", src.label).unwrap();
    writeln!(out, "t: {:.16e}", t).unwrap();
    writeln!(out, "t_symbolic: {}", format_time(t)).unwrap();
    writeln!(out, "window: {}", window_text(&src.window)).unwrap();
    writeln!(out, "resolution: {res}x{res}").unwrap();
    writeln!(out, "step: {:.3e}", opts.stencil.step()).unwrap();

    let mut overall = Status::Pass;
    for check in checks {
        let tol = a.tol.unwrap_or_else(|| check.default_tolerance());
        let name = check.name();
        let (status, body) = match check {
            Check::Admissibility => {
                let status = if adm.verdict == Verdict::Admissible { Status::Pass } else { Status::Fail };
                (status, admissibility_lines(name, &adm))
            }
            Check::Consistency => {
                let c = window_consistency(&aux, &src.window, t);
                let status = match &c {
                    ConsistencyReport::NotApplicable { .. } => Status::NotApplicable,
                    c => Status::from_pass(Some(c.is_consistent(tol))),
                };
                (status, consistency_lines(name, &c))
            }
            Check::Bilinear2 => residual(bilinear_line2(&aux, &src.window, t, opts.samples)?, name, tol),
            Check::Bilinear1 => residual(bilinear_line1(&aux, &src.window, t, &opts)?, name, tol),
            Check::Pde2 => residual(pde_line2(&aux, &src.window, t, opts.samples, &opts.stencil)?, name, tol),
            Check::Pde1 => residual(pde_line1(&aux, &src.window, t, &opts)?, name, tol),
        };
        if status == Status::Fail {
            overall = Status::Fail;
        }
        writeln!(out, "{name}.status: {}", status.as_str()).unwrap();
        writeln!(out, "{name}.tolerance: {tol:.3e}").unwrap();
        out.push_str(&body);
    }
    writeln!(out, "overall: {}", overall.as_str()).unwrap();
    emit(a.out.as_deref(), &out).map_err(|e| Failure::io(a.out.as_deref().unwrap_or(Path::new("<stdout>")), e))?;
    Ok(if overall == Status::Fail { EXIT_FAILED } else { EXIT_OK })
}

fn residual(mut r: ResidualReport, name: &str, tol: f64) -> (Status, String) {
    r.check_name = name.to_string();
    (Status::from_pass(r.passes(tol)), r.to_key_values())
}

fn admissibility_lines(n: &str, r: &AdmissibilityReport) -> String {
    let mut s = String::new();
    writeln!(s, "{n}.verdict: {}", r.verdict.as_str()).unwrap();
    writeln!(s, "{n}.samples: {}", r.samples).unwrap();
    writeln!(s, "{n}.min_abs_f: {:.6e}", r.min_abs_f).unwrap();
    if let Some(p) = r.min_abs_f_at {
        writeln!(s, "{n}.min_abs_f_at: {:.6} {:.6}", p.x, p.y).unwrap();
    }
    writeln!(s, "{n}.sign_change_cells: {}", r.sign_change_cells.len()).unwrap();
    writeln!(s, "{n}.sign_violations: {}", r.sign_violations).unwrap();
    writeln!(s, "{n}.degenerate_points: {}", r.degenerate_points).unwrap();
    writeln!(s, "{n}.pole_points: {}", r.pole_points).unwrap();
    writeln!(s, "{n}.nonfinite_points: {}", r.nonfinite_points).unwrap();
    s
}

fn consistency_lines(n: &str, c: &ConsistencyReport) -> String {
    let mut s = String::new();
    match c {
        ConsistencyReport::NotApplicable { reason } => writeln!(s, "{n}.reason: {reason}").unwrap(),
        ConsistencyReport::Evaluated { c1, c2, .. } => {
            for (side, v) in [("c1", c1), ("c2", c2)] {
                writeln!(s, "{n}.{side}.mean: {:.9e}", v.mean).unwrap();
                writeln!(s, "{n}.{side}.variation: {:.6e}", v.variation).unwrap();
                writeln!(s, "{n}.{side}.policy_gap: {:.6e}", v.policy_gap).unwrap();
                writeln!(s, "{n}.{side}.probes: {}", v.probes).unwrap();
            }
        }
    }
    s
}

fn analyze(a: &AnalyzeArgs) -> Result<i32, Failure> {
    let src = Loaded::from_source(&a.source, &a.grid)?;
    let statistic = match a.statistic {
        StatisticArg::Max => Statistic::GlobalMax,
        StatisticArg::L2 => Statistic::L2,
    };
    let mut out = String::new();
    writeln!(out, "source: {}", src.label).unwrap();
    writeln!(out, "window: {}", window_text(&src.window)).unwrap();
    if a.mode.peaks {
        let t = a.t.ok_or_else(|| Failure::usage("--peaks needs --t"))?;
        let res = a.grid.res.unwrap_or(ANALYZE_RES);
        let grid = sample_field(&src.spec, None, FieldKind::Intensity, &src.window, t, (res, res))?;
        out.push_str(&to_report(&grid, &analyze_extrema(&grid)));
    } else if let Some((t0, t1, n)) = a.mode.period {
        let res = a.grid.res.unwrap_or(PERIOD_RES);
        let search = PeriodSearch {
            t_range: (t0, t1),
            n_t: n,
            statistic,
            samples: (res, res),
        };
        let est = estimate_period(&src.spec, &src.window, &search)?;
        writeln!(out, "statistic: {}", if statistic == Statistic::L2 { "l2" } else { "max" }).unwrap();
        match est.period {
            Some(p) => {
                writeln!(out, "period: {p:.9e}").unwrap();
                writeln!(out, "period_symbolic: {}", format_time(p)).unwrap();
            }
            None => writeln!(out, "period: none").unwrap(),
        }
        writeln!(out, "candidate: {:.9e}", est.candidate).unwrap();
        writeln!(out, "mismatch: {:.6e}", est.mismatch).unwrap();
        writeln!(out, "resolution: {:.6e}", est.resolution).unwrap();
        writeln!(out, "constant: {}", est.constant).unwrap();
        for (i, (t, v)) in est.series.iter().enumerate() {
            writeln!(out, "series.{i}: {t:.9e} {v:.9e}").unwrap();
        }
    } else if let Some(times) = &a.mode.decay {
        let res = a.grid.res.unwrap_or(ANALYZE_RES);
        let profile = decay_profile(&src.spec, &src.window, times, (res, res))?;
        for (i, (t, v)) in profile.iter().enumerate() {
            writeln!(out, "decay.{i}: {t:.9e} {v:.9e}").unwrap();
        }
    }
    emit(a.out.as_deref(), &out).map_err(|e| Failure::io(a.out.as_deref().unwrap_or(Path::new("<stdout>")), e))?;
    Ok(EXIT_OK)
}
