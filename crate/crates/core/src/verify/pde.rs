use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::ansatz::{eval_U, eval_phi, CoordinatePoint, PointStatus, Window};
use crate::auxiliary::Auxiliaries;
use crate::calculus::{simpson, Stencil};
use crate::error::Result;

use super::report::{Outcome, ResidualReport};
use super::{gate, scan, ResidualOptions};

/// Intervals for the short phase integrals between stencil nodes.
const LOCAL_PHASE_INTERVALS: usize = 8;

fn usable(status: PointStatus) -> std::result::Result<(), Outcome> {
    match status {
        PointStatus::Valid | PointStatus::SignViolation => Ok(()),
        PointStatus::Pole => Err(Outcome::Masked),
        PointStatus::NonFinite => Err(Outcome::NonFinite),
        PointStatus::Singular => Err(Outcome::Singular),
    }
}

/// Residual of `4 φ_ζη − (∂ζ + ∂η)² U = 0` by finite differences of the
/// exactly evaluated `φ` and `U` fields.
///
/// `max_rel` is `max_abs` over the window maximum of `|4 φ_ζη| + |(∂ζ + ∂η)² U|`;
/// it is omitted when `U` vanishes on every sample.
///
/// The backgrounds `p0(ζ)`, `q0(η)` drop out of `φ_ζη` and are set to zero.
/// `(∂ζ + ∂η)² U` is the second derivative along the diagonal `ζ = η`.
pub fn pde_line2(aux: &Auxiliaries, window: &Window, t: f64, samples: (usize, usize), stencil: &Stencil) -> Result<ResidualReport> {
    let spec = aux.spec();
    let second = stencil.with_order(2)?.taps();
    let first = stencil.with_order(1)?.taps();
    let h = stencil.step();
    // bit patterns of non-negative floats order like the floats
    let scale_bits = AtomicU64::new(0);
    let mut report = scan("pde2", window, t, samples, |pt| {
        let (z0, e0) = (pt.zeta(), pt.eta());
        let center = eval_U(spec, pt);
        if let Err(o) = usable(center.status) {
            return o;
        }
        let mut diag = 0.0;
        for &(k, w) in &second {
            let s = k as f64 * h;
            let u = eval_U(spec, &CoordinatePoint::from_rotated(z0 + s, e0 + s, t));
            if let Err(o) = usable(u.status) {
                return o;
            }
            diag += w * u.value;
        }
        let mut mixed = 0.0;
        for &(i, wi) in &first {
            for &(j, wj) in &first {
                let p = CoordinatePoint::from_rotated(z0 + i as f64 * h, e0 + j as f64 * h, t);
                let phi = eval_phi(spec, &p, 0.0, 0.0);
                if let Err(o) = usable(phi.status) {
                    return o;
                }
                mixed += wi * wj * phi.value;
            }
        }
        let r = 4.0 * mixed - diag;
        if !r.is_finite() {
            return Outcome::NonFinite;
        }
        let degenerate = center.value == 0.0;
        if !degenerate {
            scale_bits.fetch_max(((4.0 * mixed).abs() + diag.abs()).to_bits(), Ordering::Relaxed);
        }
        Outcome::Sample {
            pt: *pt,
            abs: r.abs(),
            rel: None,
            degenerate,
            sign_violation: center.status == PointStatus::SignViolation,
        }
    })?;
    let scale = f64::from_bits(scale_bits.into_inner());
    if scale > 0.0 {
        report.max_rel = Some(report.max_abs / scale);
    }
    Ok(report)
}

/// Envelope near a base point, with phases continued from the base by short
/// quadratures so that stencil differences are not polluted by the
/// quadrature error of the anchored phase.
struct LocalEnvelope<'a> {
    aux: &'a Auxiliaries,
    zeta: f64,
    eta: f64,
    t: f64,
    r: f64,
    s: f64,
}

impl<'a> LocalEnvelope<'a> {
    fn new(aux: &'a Auxiliaries, pt: &CoordinatePoint) -> Result<Self> {
        Ok(LocalEnvelope {
            aux,
            zeta: pt.zeta(),
            eta: pt.eta(),
            t: pt.t,
            r: aux.phase_r(pt.zeta(), pt.t)?.value,
            s: aux.phase_s(pt.eta(), pt.t)?.value,
        })
    }

    /// `u` at `(ζ + dz, η + de, t + dt)`; at most one offset is nonzero.
    fn at(&self, dz: f64, de: f64, dt: f64) -> std::result::Result<Complex64, Outcome> {
        let aux = self.aux;
        let spec = aux.spec();
        let (z, e, t) = (self.zeta + dz, self.eta + de, self.t + dt);
        if spec.near_pole(z, e) {
            return Err(Outcome::Masked);
        }
        let local = |base: f64, x0: f64, x1: f64, grad: &dyn Fn(f64) -> f64| -> Result<f64> {
            if x0 == x1 {
                Ok(base)
            } else {
                simpson(grad, x0, x1, LOCAL_PHASE_INTERVALS).map(|v| base + v)
            }
        };
        let phases = if dt != 0.0 {
            aux.phase_r(z, t)
                .and_then(|r| Ok((r.value, aux.phase_s(e, t)?.value)))
        } else {
            local(self.r, self.zeta, z, &|x| aux.r_zeta(x, t).value)
                .and_then(|r| Ok((r, local(self.s, self.eta, e, &|x| aux.s_eta(x, t).value)?)))
        };
        let Ok((r, s)) = phases else {
            return Err(Outcome::NonFinite);
        };
        let pt = CoordinatePoint::from_rotated(z, e, t);
        let eval = eval_U(spec, &pt);
        usable(eval.status)?;
        let amp = aux.p1(z, t).value * aux.q1(e, t).value;
        let [a0, a1, a2, a3] = spec.coeffs().a();
        let (p, q) = (spec.p().value(z, t), spec.q().value(e, t));
        let f = a0 + a1 * p + a2 * q + a3 * p * q;
        let u = Complex64::from_polar(amp / f, r + s);
        if u.is_finite() {
            Ok(u)
        } else {
            Err(Outcome::NonFinite)
        }
    }
}

/// Residual of `i u_t + β[(u_ζζ + u_ηη)/2 − |u|² u/2 + u φ] − i γ u = 0`,
/// with derivatives of `u` by finite differences and `φ` from the jets and
/// derived backgrounds. `max_rel` divides by the sum of the term magnitudes.
/// Skipped as not applicable when the `c1`/`c2` separation is inconsistent,
/// unless forced.
pub fn pde_line1(aux: &Auxiliaries, window: &Window, t: f64, opts: &ResidualOptions) -> Result<ResidualReport> {
    const NAME: &str = "pde1";
    if let Some(reason) = gate(aux, window, t, opts) {
        return Ok(ResidualReport::not_applicable(NAME, reason));
    }
    let spec = aux.spec();
    let second = opts.stencil.with_order(2)?.taps();
    let first = opts.stencil.with_order(1)?.taps();
    let h = opts.stencil.step();
    let beta = spec.funcs().beta.value(t);
    let gamma = spec.funcs().gamma.value(t);
    scan(NAME, window, t, opts.samples, |pt| {
        let Ok(env) = LocalEnvelope::new(aux, pt) else {
            return Outcome::NonFinite;
        };
        let u = match env.at(0.0, 0.0, 0.0) {
            Ok(u) => u,
            Err(o) => return o,
        };
        let phi = match aux.phi(pt) {
            Ok(v) => v,
            Err(_) => return Outcome::NonFinite,
        };
        let mut laplacian = Complex64::new(0.0, 0.0);
        for &(k, w) in &second {
            let d = k as f64 * h;
            match (env.at(d, 0.0, 0.0), env.at(0.0, d, 0.0)) {
                (Ok(a), Ok(b)) => laplacian += (a + b) * w,
                (Err(o), _) | (_, Err(o)) => return o,
            }
        }
        let mut u_t = Complex64::new(0.0, 0.0);
        for &(k, w) in &first {
            match env.at(0.0, 0.0, k as f64 * h) {
                Ok(v) => u_t += v * w,
                Err(o) => return o,
            }
        }
        let i = Complex64::i();
        let r = i * u_t + beta * (laplacian * 0.5 - u * (0.5 * u.norm_sqr()) + u * phi) - i * gamma * u;
        if !r.is_finite() {
            return Outcome::NonFinite;
        }
        let un = u.norm();
        let scale = u_t.norm() + beta.abs() * (0.5 * laplacian.norm() + 0.5 * un.powi(3) + (un * phi).abs()) + (gamma * un).abs();
        let jets = crate::ansatz::ProfileJets::at(spec, pt);
        Outcome::Sample {
            pt: *pt,
            abs: r.norm(),
            rel: Some(if scale > 0.0 { r.norm() / scale } else { r.norm() }),
            degenerate: jets.is_degenerate(spec),
            sign_violation: false,
        }
    })
}

/// Both PDE residuals: `(line 1, line 2)`.
pub fn pde_residuals(
    aux: &Auxiliaries,
    window: &Window,
    t: f64,
    opts: &ResidualOptions,
) -> Result<(ResidualReport, ResidualReport)> {
    Ok((
        pde_line1(aux, window, t, opts)?,
        pde_line2(aux, window, t, opts.samples, &opts.stencil)?,
    ))
}

/// Observed convergence order of the `φ` equation residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub step: f64,
    pub coarse: f64,
    pub fine: f64,
    pub observed_order: f64,
    pub nominal_order: usize,
}

impl Convergence {
    pub fn within(&self, slack: f64) -> bool {
        (self.observed_order - self.nominal_order as f64).abs() <= slack
    }
}

/// Runs [`pde_line2`] at the stencil step and at half of it and reports
/// `log2(coarse / fine)` of the maximal residuals.
pub fn pde_convergence(
    aux: &Auxiliaries,
    window: &Window,
    t: f64,
    samples: (usize, usize),
    stencil: &Stencil,
) -> Result<Convergence> {
    let coarse = pde_line2(aux, window, t, samples, stencil)?.max_abs;
    let fine = pde_line2(aux, window, t, samples, &stencil.with_step(stencil.step() / 2.0)?)?.max_abs;
    Ok(Convergence {
        step: stencil.step(),
        coarse,
        fine,
        observed_order: (coarse / fine).log2(),
        nominal_order: stencil.accuracy(),
    })
}
