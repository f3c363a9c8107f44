use num_complex::Complex64;

use crate::ansatz::{assemble_f, CoordinatePoint, ProfileJets, Window};
use crate::auxiliary::Auxiliaries;
use crate::calculus::guarded;
use crate::error::Result;

use super::hirota::hirota;
use super::report::{Outcome, ResidualReport};
use super::{gate, scan, ResidualOptions};

/// Common screening of a point; `Err` carries the exclusion.
fn screen(aux: &Auxiliaries, pt: &CoordinatePoint) -> std::result::Result<(ProfileJets, bool), Outcome> {
    let spec = aux.spec();
    if spec.near_pole(pt.zeta(), pt.eta()) {
        return Err(Outcome::Masked);
    }
    let jets = ProfileJets::at(spec, pt);
    let f = jets.f(spec);
    if !jets.is_finite() || !f.is_finite() {
        return Err(Outcome::NonFinite);
    }
    let amp = jets.amplitude_factor(spec);
    if guarded(2.0 * amp.abs().sqrt(), f) {
        return Err(Outcome::Singular);
    }
    let degenerate = jets.is_degenerate(spec);
    if amp < 0.0 && !degenerate {
        return Err(Outcome::SignViolation);
    }
    Ok((jets, degenerate))
}

/// Residual of `2 D_ζ D_η f·f − g g* = 0`.
///
/// `max_abs` is the residual divided by `f²` (intensity units); `max_rel`
/// divides by `4(|f f_ζη| + |f_ζ f_η|) + |g|²`, the size of the terms that
/// cancel.
pub fn bilinear_line2(aux: &Auxiliaries, window: &Window, t: f64, samples: (usize, usize)) -> Result<ResidualReport> {
    let spec = aux.spec();
    scan("bilinear2", window, t, samples, |pt| {
        let (jets, degenerate) = match screen(aux, pt) {
            Ok(v) => v,
            Err(o) => return o,
        };
        let f = assemble_f(spec, &jets.p, &jets.q);
        let d = hirota(&f, &f, [1, 1, 0]).expect("order two");
        let amp = aux.p1(pt.zeta(), pt.t).value * aux.q1(pt.eta(), pt.t).value;
        let gg = amp * amp;
        let r = 2.0 * d - gg;
        let scale = 4.0 * ((f.value * f.hess[0][1]).abs() + (f.grad[0] * f.grad[1]).abs()) + gg;
        if !r.is_finite() {
            return Outcome::NonFinite;
        }
        Outcome::Sample {
            pt: *pt,
            abs: r.abs() / (f.value * f.value),
            rel: Some(if scale > 0.0 { r.abs() / scale } else { r.abs() }),
            degenerate,
            sign_violation: false,
        }
    })
}

/// Residual of the complex bilinear equation
/// `i f D_t g·f + (β/2) f (D_ζ² + D_η²) g·f − (β/2) g² g*
///  + β g (D_ζ D_η f·f + (p0 + q0) f²) − i γ g f² = 0`.
///
/// `max_abs` is the residual divided by `|f|³` (envelope units); `max_rel`
/// divides by the sum of the term magnitudes. Skipped as not applicable
/// when the `c1`/`c2` separation is inconsistent, unless forced.
pub fn bilinear_line1(aux: &Auxiliaries, window: &Window, t: f64, opts: &ResidualOptions) -> Result<ResidualReport> {
    const NAME: &str = "bilinear1";
    if let Some(reason) = gate(aux, window, t, opts) {
        return Ok(ResidualReport::not_applicable(NAME, reason));
    }
    let spec = aux.spec();
    let beta = spec.funcs().beta.value(t);
    let gamma = spec.funcs().gamma.value(t);
    scan(NAME, window, t, opts.samples, |pt| {
        let (jets, degenerate) = match screen(aux, pt) {
            Ok(v) => v,
            Err(o) => return o,
        };
        let f = assemble_f(spec, &jets.p, &jets.q);
        let (g, (p0, q0)) = match (aux.envelope_numerator(pt), aux.derive_background(pt)) {
            (Ok(g), Ok(b)) => (g, b),
            _ => return Outcome::NonFinite,
        };
        let fc = f.to_complex();
        let i = Complex64::i();
        let fv = f.value;
        let gv = g.value;

        let dt = hirota(&g, &fc, [0, 0, 1]).expect("order one");
        let dzz = hirota(&g, &fc, [2, 0, 0]).expect("order two");
        let dee = hirota(&g, &fc, [0, 2, 0]).expect("order two");
        let dze = hirota(&f, &f, [1, 1, 0]).expect("order two");

        let terms = [
            i * dt * fv,
            (dzz + dee) * (0.5 * beta * fv),
            -gv * gv * gv.conj() * (0.5 * beta),
            gv * (beta * (dze + (p0 + q0) * fv * fv)),
            -i * gv * (gamma * fv * fv),
        ];
        let r: Complex64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|z| z.norm()).sum();
        if !r.is_finite() {
            return Outcome::NonFinite;
        }
        Outcome::Sample {
            pt: *pt,
            abs: r.norm() / fv.abs().powi(3),
            rel: Some(if scale > 0.0 { r.norm() / scale } else { r.norm() }),
            degenerate,
            sign_violation: false,
        }
    })
}

/// Both bilinear residuals: `(line 2, line 1)`.
pub fn bilinear_residuals(
    aux: &Auxiliaries,
    window: &Window,
    t: f64,
    opts: &ResidualOptions,
) -> Result<(ResidualReport, ResidualReport)> {
    Ok((
        bilinear_line2(aux, window, t, opts.samples)?,
        bilinear_line1(aux, window, t, opts)?,
    ))
}
