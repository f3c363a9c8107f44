//! Resolution of the variable-separated relations.
//!
//! Given a [`SolutionSpec`], this module derives the amplitude factors
//! `p1 = δ1 √(c0 p_ζ)`, `q1 = 2 δ2 √(det q_η / c0)`, the phase gradients
//! `r_ζ`, `s_η`, the phases `r`, `s` themselves (by quadrature from an
//! anchor), the backgrounds `p0`, `q0`, and the diagnostics that check
//! whether the separation functions `c1`, `c2` come out depending on time
//! only.

use num_complex::Complex64;

use crate::ansatz::{assemble_f, CoordinatePoint, SolutionSpec, TimeFunction};
use crate::calculus::{simpson, Bundle, FieldJet, Jet, Scalar, ETA, TIME, ZETA};
use crate::error::{Error, Result};

/// Values `c1(t)`, `c2(t)` used when solving for the phase gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationPolicy {
    pub c1: TimeFunction,
    pub c2: TimeFunction,
}

impl Default for SeparationPolicy {
    fn default() -> Self {
        SeparationPolicy {
            c1: 0.0.into(),
            c2: 0.0.into(),
        }
    }
}

/// Deliberate corruptions of derived quantities, used as negative controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxOverrides {
    pub p0: Option<f64>,
    pub q0: Option<f64>,
    pub r_zeta_shift: f64,
    pub amplitude_scale: f64,
}

impl Default for AuxOverrides {
    fn default() -> Self {
        AuxOverrides {
            p0: None,
            q0: None,
            r_zeta_shift: 0.0,
            amplitude_scale: 1.0,
        }
    }
}

/// Default maximal Simpson step for phase integration.
pub const PHASE_STEP: f64 = 0.025;

/// Derived auxiliary functions of one solution.
#[derive(Debug, Clone)]
pub struct Auxiliaries {
    spec: SolutionSpec,
    policy: SeparationPolicy,
    anchor: (f64, f64),
    phase_step: f64,
    overrides: AuxOverrides,
}

/// Phase sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPhase {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

/// Spread of one side of the `c1`/`c2` consistency relation over probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideConsistency {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// `max − min` over the probes.
    pub variation: f64,
    /// Largest deviation from the value assumed by the policy.
    pub policy_gap: f64,
    pub probes: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConsistencyReport {
    /// The relations divide by `a3`; nothing to report when it vanishes.
    NotApplicable { reason: String },
    Evaluated {
        t: f64,
        c1: SideConsistency,
        c2: SideConsistency,
    },
}

impl ConsistencyReport {
    /// Largest variation of either side; `None` when not applicable.
    pub fn variation(&self) -> Option<f64> {
        match self {
            ConsistencyReport::NotApplicable { .. } => None,
            ConsistencyReport::Evaluated { c1, c2, .. } => Some(c1.variation.max(c2.variation)),
        }
    }

    pub fn policy_gap(&self) -> Option<f64> {
        match self {
            ConsistencyReport::NotApplicable { .. } => None,
            ConsistencyReport::Evaluated { c1, c2, .. } => Some(c1.policy_gap.max(c2.policy_gap)),
        }
    }

    /// Both sides constant in space to `tol` and equal to the policy values.
    pub fn is_consistent(&self, tol: f64) -> bool {
        match (self.variation(), self.policy_gap()) {
            (Some(v), Some(g)) => v < tol && g < tol,
            _ => false,
        }
    }
}

fn magnitude(j: Jet) -> Jet {
    if j.value < 0.0 {
        -j
    } else {
        j
    }
}

impl Auxiliaries {
    pub fn new(spec: SolutionSpec) -> Self {
        Auxiliaries {
            spec,
            policy: SeparationPolicy::default(),
            anchor: (0.0, 0.0),
            phase_step: PHASE_STEP,
            overrides: AuxOverrides::default(),
        }
    }

    pub fn with_policy(mut self, policy: SeparationPolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Reference points where `r(ζ_ref, t) = 0` and `s(η_ref, t) = 0`.
    pub fn with_anchor(mut self, zeta_ref: f64, eta_ref: f64) -> Self {
        self.anchor = (zeta_ref, eta_ref);
        self
    }

    pub fn with_phase_step(mut self, step: f64) -> Self {
        self.phase_step = step;
        self
    }

    pub fn with_overrides(mut self, overrides: AuxOverrides) -> Self {
        self.overrides = overrides;
        self
    }

    pub fn spec(&self) -> &SolutionSpec {
        &self.spec
    }

    pub fn policy(&self) -> &SeparationPolicy {
        &self.policy
    }

    // Amplitudes

    /// `p1 = δ1 √(c0 p_ζ)` as a jet in `(ζ, t)`. Negative radicands are
    /// flipped: when `c0 p_ζ` and `det q_η / c0` are both negative the two
    /// factors of `i` give `g → −g`, which is a symmetry of the system.
    pub fn p1(&self, zeta: f64, t: f64) -> Jet {
        let p_zeta = self.spec.p().hyper(zeta, t).grad[0];
        self.p1_from(&p_zeta, t)
    }

    fn p1_from(&self, p_zeta: &Jet, t: f64) -> Jet {
        let c0 = self.spec.funcs().c0.jet(t);
        magnitude(c0 * *p_zeta)
            .sqrt()
            .scale(self.spec.delta1().value() * self.overrides.amplitude_scale)
    }

    /// `q1 = 2 δ2 √(det q_η / c0)` as a jet in `(η, t)`.
    pub fn q1(&self, eta: f64, t: f64) -> Jet {
        let q_eta = self.spec.q().hyper(eta, t).grad[0];
        self.q1_from(&q_eta, t)
    }

    fn q1_from(&self, q_eta: &Jet, t: f64) -> Jet {
        let c0 = self.spec.funcs().c0.jet(t);
        magnitude(q_eta.scale(self.spec.coeffs().det()) / c0)
            .sqrt()
            .scale(2.0 * self.spec.delta2().value())
    }

    pub fn derive_amplitudes(&self, pt: &CoordinatePoint) -> (Jet, Jet) {
        (self.p1(pt.zeta(), pt.t), self.q1(pt.eta(), pt.t))
    }

    // Phase gradients

    /// `r_ζ = [−p_t + c1 A² + c2 A − det c3] / (β p_ζ)`, `A = a2 + a3 p`.
    pub fn r_zeta(&self, zeta: f64, t: f64) -> Jet {
        let h = self.spec.p().hyper(zeta, t);
        self.r_zeta_from(&h.value, &h.grad[0], &h.grad[1], t)
    }

    fn r_zeta_from(&self, p: &Jet, p_zeta: &Jet, p_t: &Jet, t: f64) -> Jet {
        let [_, _, a2, a3] = self.spec.coeffs().a();
        let det = self.spec.coeffs().det();
        let funcs = self.spec.funcs();
        let (beta, c3) = (funcs.beta.jet(t), funcs.c3.jet(t));
        let (c1, c2) = (self.policy.c1.jet(t), self.policy.c2.jet(t));
        let a = p.scale(a3) + Jet::from_f64(a2);
        let num = -*p_t + c1 * a * a + c2 * a - c3.scale(det);
        let grad = num / (beta * *p_zeta);
        grad + Jet::from_f64(self.overrides.r_zeta_shift)
    }

    /// `s_η = [−q_t − c3 B² − c2 B + det c4] / (β q_η)`, `B = a1 + a3 q`.
    pub fn s_eta(&self, eta: f64, t: f64) -> Jet {
        let h = self.spec.q().hyper(eta, t);
        self.s_eta_from(&h.value, &h.grad[0], &h.grad[1], t)
    }

    fn s_eta_from(&self, q: &Jet, q_eta: &Jet, q_t: &Jet, t: f64) -> Jet {
        let [_, a1, _, a3] = self.spec.coeffs().a();
        let det = self.spec.coeffs().det();
        let funcs = self.spec.funcs();
        let (beta, c3, c4) = (funcs.beta.jet(t), funcs.c3.jet(t), funcs.c4.jet(t));
        let c2 = self.policy.c2.jet(t);
        let b = q.scale(a3) + Jet::from_f64(a1);
        let num = -*q_t - c3 * b * b - c2 * b + c4.scale(det);
        num / (beta * *q_eta)
    }

    pub fn derive_phase_gradients(&self, pt: &CoordinatePoint) -> (Jet, Jet) {
        (self.r_zeta(pt.zeta(), pt.t), self.s_eta(pt.eta(), pt.t))
    }

    // Phases

    fn intervals(&self, length: f64) -> usize {
        let n = (length.abs() / self.phase_step).ceil() as usize;
        n.max(8)
    }

    /// Phase `r(ζ, t)` as a jet: the value and `r_t`, `r_tt` come from
    /// integrating the gradient jet from the anchor; the spatial entries are
    /// the gradient jet itself.
    pub fn phase_r(&self, zeta: f64, t: f64) -> Result<Jet> {
        let at = self.r_zeta(zeta, t);
        if !at.is_finite() {
            return Err(Error::NonFinite {
                what: "phase gradient r_zeta",
                at: zeta,
            });
        }
        let z0 = self.anchor.0;
        let integral = simpson(
            |z| {
                let g = self.r_zeta(z, t);
                Bundle([g.value, g.dt(), g.dtt()])
            },
            z0,
            zeta,
            self.intervals(zeta - z0),
        )?;
        Ok(Jet::new(
            integral.0[0],
            at.value,
            integral.0[1],
            at.d1(),
            at.dt(),
            integral.0[2],
        ))
    }

    /// Phase `s(η, t)` as a jet, anchored at `η_ref`.
    pub fn phase_s(&self, eta: f64, t: f64) -> Result<Jet> {
        let at = self.s_eta(eta, t);
        if !at.is_finite() {
            return Err(Error::NonFinite {
                what: "phase gradient s_eta",
                at: eta,
            });
        }
        let e0 = self.anchor.1;
        let integral = simpson(
            |e| {
                let g = self.s_eta(e, t);
                Bundle([g.value, g.dt(), g.dtt()])
            },
            e0,
            eta,
            self.intervals(eta - e0),
        )?;
        Ok(Jet::new(
            integral.0[0],
            at.value,
            integral.0[1],
            at.d1(),
            at.dt(),
            integral.0[2],
        ))
    }

    /// Samples `r` on `n + 1` uniform nodes of `zeta_range` and `s` on
    /// `eta_range`, marching interval by interval with Simpson's rule.
    pub fn integrate_phases(
        &self,
        zeta_range: (f64, f64),
        eta_range: (f64, f64),
        t: f64,
        n: usize,
    ) -> Result<(SampledPhase, SampledPhase)> {
        let r = self.march(zeta_range, n, self.anchor.0, |z| self.r_zeta(z, t).value, |z| {
            self.phase_r(z, t).map(|j| j.value)
        })?;
        let s = self.march(eta_range, n, self.anchor.1, |e| self.s_eta(e, t).value, |e| {
            self.phase_s(e, t).map(|j| j.value)
        })?;
        Ok((r, s))
    }

    fn march(
        &self,
        range: (f64, f64),
        n: usize,
        anchor: f64,
        gradient: impl Fn(f64) -> f64,
        phase_at: impl Fn(f64) -> Result<f64>,
    ) -> Result<SampledPhase> {
        if n < 1 {
            return Err(Error::TooFewIntervals(n));
        }
        let h = (range.1 - range.0) / n as f64;
        let nodes: Vec<f64> = (0..=n).map(|k| if k == n { range.1 } else { range.0 + k as f64 * h }).collect();
        let mut values = Vec::with_capacity(n + 1);
        let start = if range.0 == anchor { 0.0 } else { phase_at(range.0)? };
        values.push(start);
        for k in 0..n {
            let step = simpson(&gradient, nodes[k], nodes[k + 1], 2)?;
            values.push(values[k] + step);
        }
        Ok(SampledPhase { nodes, values })
    }

    // Backgrounds

    /// `p0 = [c3 + r_t − (β/2)(p1_ζζ/p1 − r_ζ²)] / β`.
    pub fn p0(&self, zeta: f64, t: f64) -> Result<f64> {
        if let Some(v) = self.overrides.p0 {
            return Ok(v);
        }
        let funcs = self.spec.funcs();
        let (beta, c3) = (funcs.beta.value(t), funcs.c3.value(t));
        let p1 = self.p1(zeta, t);
        let r = self.phase_r(zeta, t)?;
        let v = (c3 + r.dt() - 0.5 * beta * (p1.d11() / p1.value - r.d1() * r.d1())) / beta;
        finite(v, "background p0", zeta)
    }

    /// `q0 = [−c4 + s_t − (β/2)(q1_ηη/q1 − s_η²)] / β`.
    pub fn q0(&self, eta: f64, t: f64) -> Result<f64> {
        if let Some(v) = self.overrides.q0 {
            return Ok(v);
        }
        let funcs = self.spec.funcs();
        let (beta, c4) = (funcs.beta.value(t), funcs.c4.value(t));
        let q1 = self.q1(eta, t);
        let s = self.phase_s(eta, t)?;
        let v = (-c4 + s.dt() - 0.5 * beta * (q1.d11() / q1.value - s.d1() * s.d1())) / beta;
        finite(v, "background q0", eta)
    }

    pub fn derive_background(&self, pt: &CoordinatePoint) -> Result<(f64, f64)> {
        Ok((self.p0(pt.zeta(), pt.t)?, self.q0(pt.eta(), pt.t)?))
    }

    // Consistency of c1, c2

    /// `c1` implied at `(ζ, t)`:
    /// `[p1_t/p1 + β(p1_ζ r_ζ/p1 + r_ζζ/2) − γ − c4] / (a3 (a2 + a3 p))`.
    pub fn implied_c1(&self, zeta: f64, t: f64) -> f64 {
        let [_, _, a2, a3] = self.spec.coeffs().a();
        let funcs = self.spec.funcs();
        let (beta, gamma, c4) = (funcs.beta.value(t), funcs.gamma.value(t), funcs.c4.value(t));
        let h = self.spec.p().hyper(zeta, t);
        let p1 = self.p1_from(&h.grad[0], t);
        let rz = self.r_zeta_from(&h.value, &h.grad[0], &h.grad[1], t);
        let bracket = p1.dt() / p1.value + beta * (p1.d1() * rz.value / p1.value + 0.5 * rz.d1()) - gamma - c4;
        bracket / (a3 * (a2 + a3 * h.value.value))
    }

    /// `c2` implied at `(η, t)`:
    /// `−[q1_t/q1 + β(q1_η s_η/q1 + s_ηη/2) + c4] / (a3 (a1 + a3 q))`.
    pub fn implied_c2(&self, eta: f64, t: f64) -> f64 {
        let [_, a1, _, a3] = self.spec.coeffs().a();
        let funcs = self.spec.funcs();
        let (beta, c4) = (funcs.beta.value(t), funcs.c4.value(t));
        let h = self.spec.q().hyper(eta, t);
        let q1 = self.q1_from(&h.grad[0], t);
        let se = self.s_eta_from(&h.value, &h.grad[0], &h.grad[1], t);
        let bracket = q1.dt() / q1.value + beta * (q1.d1() * se.value / q1.value + 0.5 * se.d1()) + c4;
        -bracket / (a3 * (a1 + a3 * h.value.value))
    }

    /// Evaluates the implied `c1` over `zeta_probes` and `c2` over
    /// `eta_probes` at time `t`. Probes where the relation is singular are
    /// skipped and counted.
    pub fn consistency_c1_c2(&self, t: f64, zeta_probes: &[f64], eta_probes: &[f64]) -> ConsistencyReport {
        let a3 = self.spec.coeffs().a()[3];
        if a3 == 0.0 {
            return ConsistencyReport::NotApplicable {
                reason: "a3 = 0: the c1, c2 relations divide by a3".into(),
            };
        }
        let c1 = side_stats(zeta_probes.iter().map(|&z| self.implied_c1(z, t)), self.policy.c1.value(t));
        let c2 = side_stats(eta_probes.iter().map(|&e| self.implied_c2(e, t)), self.policy.c2.value(t));
        ConsistencyReport::Evaluated { t, c1, c2 }
    }

    // Assembled fields

    /// `g = p1 q1 exp(i (r + s))` as a complex jet in `(ζ, η, t)`.
    pub fn envelope_numerator(&self, pt: &CoordinatePoint) -> Result<FieldJet<Complex64>> {
        let (zeta, eta, t) = (pt.zeta(), pt.eta(), pt.t);
        let p1: FieldJet = self.p1(zeta, t).embed([ZETA, TIME]);
        let q1: FieldJet = self.q1(eta, t).embed([ETA, TIME]);
        let r: FieldJet = self.phase_r(zeta, t)?.embed([ZETA, TIME]);
        let s: FieldJet = self.phase_s(eta, t)?.embed([ETA, TIME]);
        let theta = (r + s).to_complex();
        let phase = (theta * FieldJet::<Complex64>::constant(Complex64::i())).exp();
        Ok((p1 * q1).to_complex() * phase)
    }

    /// `f` as a jet in `(ζ, η, t)`.
    pub fn f(&self, pt: &CoordinatePoint) -> FieldJet {
        let p = self.spec.p().jet(pt.zeta(), pt.t);
        let q = self.spec.q().jet(pt.eta(), pt.t);
        assemble_f(&self.spec, &p, &q)
    }

    /// Envelope `u = g / f` with integrated phases and the derived amplitudes.
    pub fn u(&self, pt: &CoordinatePoint) -> Result<Complex64> {
        let (zeta, eta, t) = (pt.zeta(), pt.eta(), pt.t);
        let amp = self.p1(zeta, t).value * self.q1(eta, t).value;
        let theta = self.phase_r(zeta, t)?.value + self.phase_s(eta, t)?.value;
        let f = self.spec.p().value(zeta, t);
        let g = self.spec.q().value(eta, t);
        let [a0, a1, a2, a3] = self.spec.coeffs().a();
        let fv = a0 + a1 * f + a2 * g + a3 * f * g;
        let u = Complex64::from_polar(amp / fv, theta);
        if u.re.is_finite() && u.im.is_finite() {
            Ok(u)
        } else {
            Err(Error::NonFinite { what: "envelope u", at: pt.x })
        }
    }

    /// `φ` with the derived backgrounds.
    pub fn phi(&self, pt: &CoordinatePoint) -> Result<f64> {
        let (p0, q0) = self.derive_background(pt)?;
        let v = crate::ansatz::eval_phi(&self.spec, pt, p0, q0).value;
        finite(v, "phi", pt.x)
    }
}

fn finite(v: f64, what: &'static str, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { what, at })
    }
}

fn side_stats(values: impl Iterator<Item = f64>, assumed: f64) -> SideConsistency {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = crate::calculus::CompensatedSum::default();
    let mut gap = 0.0f64;
    let (mut probes, mut skipped) = (0, 0);
    for v in values {
        if !v.is_finite() {
            skipped += 1;
            continue;
        }
        probes += 1;
        min = min.min(v);
        max = max.max(v);
        sum.add(v);
        gap = gap.max((v - assumed).abs());
    }
    if probes == 0 {
        return SideConsistency {
            min: f64::NAN,
            max: f64::NAN,
            mean: f64::NAN,
            variation: f64::INFINITY,
            policy_gap: f64::INFINITY,
            probes,
            skipped,
        };
    }
    SideConsistency {
        min,
        max,
        mean: sum.total() / probes as f64,
        variation: max - min,
        policy_gap: gap,
        probes,
        skipped,
    }
}
