use num_complex::Complex64;

use crate::calculus::{guarded, FieldJet, Jet, Scalar, ETA, TIME, ZETA};

use super::coords::CoordinatePoint;
use super::spec::SolutionSpec;

/// Classification of a single evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointStatus {
    Valid,
    /// Inside a profile pole exclusion band.
    Pole,
    /// A profile or derived quantity is not finite.
    NonFinite,
    /// `|f|` below the division guard.
    Singular,
    /// `det · p_ζ · q_η < 0`; the value is still reported.
    SignViolation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<V> {
    pub value: V,
    pub status: PointStatus,
}

impl<V> Evaluation<V> {
    pub fn is_valid(&self) -> bool {
        self.status == PointStatus::Valid
    }
}

/// Profile jets at a point: `p` in `(ζ, t)`, `q` in `(η, t)`.
#[derive(Debug, Clone, Copy)]
pub struct ProfileJets {
    pub p: Jet,
    pub q: Jet,
}

impl ProfileJets {
    pub fn at(spec: &SolutionSpec, pt: &CoordinatePoint) -> Self {
        ProfileJets {
            p: spec.p().jet(pt.zeta(), pt.t),
            q: spec.q().jet(pt.eta(), pt.t),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.q.is_finite()
    }

    /// `det · p_ζ · q_η`, the signed amplitude factor of the intensity.
    pub fn amplitude_factor(&self, spec: &SolutionSpec) -> f64 {
        spec.coeffs().det() * self.p.d1() * self.q.d1()
    }

    /// `U ≡ 0` locally: `det = 0`, or `p_ζ` or `q_η` vanishes to rounding.
    pub fn is_degenerate(&self, spec: &SolutionSpec) -> bool {
        let a = spec.coeffs().a();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        spec.coeffs().det().abs() <= 1e-12 * scale * scale
            || self.p.d1().abs() <= 1e-12 * (1.0 + self.p.value.abs())
            || self.q.d1().abs() <= 1e-12 * (1.0 + self.q.value.abs())
    }

    pub fn f(&self, spec: &SolutionSpec) -> f64 {
        let [a0, a1, a2, a3] = spec.coeffs().a();
        a0 + a1 * self.p.value + a2 * self.q.value + a3 * self.p.value * self.q.value
    }
}

/// `f = a0 + a1 p + a2 q + a3 p q` with all partials in `(ζ, η, t)` to
/// second order.
pub fn eval_f(spec: &SolutionSpec, pt: &CoordinatePoint) -> FieldJet {
    let jets = ProfileJets::at(spec, pt);
    assemble_f(spec, &jets.p, &jets.q)
}

pub(crate) fn assemble_f<T: Scalar>(spec: &SolutionSpec, p: &Jet<T, 2>, q: &Jet<T, 2>) -> FieldJet<T> {
    let [a0, a1, a2, a3] = spec.coeffs().a();
    let p: FieldJet<T> = p.embed([ZETA, TIME]);
    let q: FieldJet<T> = q.embed([ETA, TIME]);
    FieldJet::<T>::from_f64(a0) + p.scale(a1) + q.scale(a2) + (p * q).scale(a3)
}

fn classify(spec: &SolutionSpec, pt: &CoordinatePoint, jets: &ProfileJets, numerator: f64, f: f64) -> PointStatus {
    if spec.near_pole(pt.zeta(), pt.eta()) {
        PointStatus::Pole
    } else if !jets.is_finite() || !f.is_finite() {
        PointStatus::NonFinite
    } else if guarded(numerator, f) {
        PointStatus::Singular
    } else if jets.amplitude_factor(spec) < 0.0 {
        PointStatus::SignViolation
    } else {
        PointStatus::Valid
    }
}

/// Intensity `U = 4 det p_ζ q_η / f²`.
#[allow(non_snake_case)]
pub fn eval_U(spec: &SolutionSpec, pt: &CoordinatePoint) -> Evaluation<f64> {
    let jets = ProfileJets::at(spec, pt);
    intensity_from(spec, pt, &jets)
}

fn intensity_from(spec: &SolutionSpec, pt: &CoordinatePoint, jets: &ProfileJets) -> Evaluation<f64> {
    let amp = jets.amplitude_factor(spec);
    let f = jets.f(spec);
    let status = classify(spec, pt, jets, 2.0 * amp.abs().sqrt(), f);
    Evaluation {
        value: 4.0 * amp / (f * f),
        status,
    }
}

/// Envelope `u = 2 δ1 δ2 √(det p_ζ q_η) e^{i(r+s)} / f` for given phases.
pub fn eval_u(spec: &SolutionSpec, pt: &CoordinatePoint, phase_r: f64, phase_s: f64) -> Evaluation<Complex64> {
    let jets = ProfileJets::at(spec, pt);
    let amp = jets.amplitude_factor(spec);
    let f = jets.f(spec);
    let status = classify(spec, pt, &jets, 2.0 * amp.abs().sqrt(), f);
    let modulus = 2.0 * spec.delta1().value() * spec.delta2().value() * amp.sqrt() / f;
    Evaluation {
        value: Complex64::from_polar(1.0, phase_r + phase_s) * modulus,
        status,
    }
}

/// `φ = −(f_ζ + f_η)²/f² + (f_ζζ + 2 f_ζη + f_ηη)/f + p0 + q0`.
pub fn eval_phi(spec: &SolutionSpec, pt: &CoordinatePoint, p0: f64, q0: f64) -> Evaluation<f64> {
    let jets = ProfileJets::at(spec, pt);
    let f = assemble_f(spec, &jets.p, &jets.q);
    phi_from_f(spec, pt, &jets, &f, p0, q0)
}

fn phi_from_f(
    spec: &SolutionSpec,
    pt: &CoordinatePoint,
    jets: &ProfileJets,
    f: &FieldJet,
    p0: f64,
    q0: f64,
) -> Evaluation<f64> {
    let first = f.grad[ZETA] + f.grad[ETA];
    let second = f.hess[ZETA][ZETA] + 2.0 * f.hess[ZETA][ETA] + f.hess[ETA][ETA];
    let fv = f.value;
    let mut status = classify(spec, pt, jets, first.abs().max(second.abs()), fv);
    if status == PointStatus::SignViolation {
        // φ itself does not depend on the sign of the amplitude factor.
        status = PointStatus::Valid;
    }
    Evaluation {
        value: -(first * first) / (fv * fv) + second / fv + p0 + q0,
        status,
    }
}

/// `φ = 2 (log f)_xx + p0 + q0`, via the logarithm of the `f` jet. Used to
/// cross-check [`eval_phi`].
pub fn phi_log_form(spec: &SolutionSpec, pt: &CoordinatePoint, p0: f64, q0: f64) -> f64 {
    let lf = eval_f(spec, pt).ln();
    // 2 ∂xx = (∂ζ + ∂η)²
    lf.hess[ZETA][ZETA] + 2.0 * lf.hess[ZETA][ETA] + lf.hess[ETA][ETA] + p0 + q0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{Profile, SeparationCoefficients};
    use std::f64::consts::E;

    fn dromion() -> SolutionSpec {
        SolutionSpec::new(
            SeparationCoefficients::new(1.0, 1.0, 1.0, 2.0).unwrap(),
            Profile::exponential(1.0, 1.0, 1.0),
            Profile::exponential(1.0, 1.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn dromion_f_at_origin() {
        let f = eval_f(&dromion(), &CoordinatePoint::new(0.0, 0.0, 0.0));
        let expected = 1.0 + 2.0 * E + 2.0 * E * E;
        assert!((f.value - expected).abs() < 1e-13);
        assert!((f.value - 21.2146).abs() < 1e-4);
    }

    #[test]
    fn constant_f() {
        let spec = SolutionSpec::new(
            SeparationCoefficients::new(1.0, 0.0, 0.0, 0.0).unwrap(),
            Profile::exponential(1.0, 1.0, 1.0),
            Profile::BreatherQ,
        )
        .unwrap();
        let f = eval_f(&spec, &CoordinatePoint::new(0.4, -1.0, 0.3));
        assert_eq!(f.value, 1.0);
        assert!(f.grad.iter().chain(f.hess.iter().flatten()).all(|v| *v == 0.0));
        let phi = eval_phi(&spec, &CoordinatePoint::new(0.4, -1.0, 0.3), 0.2, 0.7);
        assert!((phi.value - 0.9).abs() < 1e-15);
    }

    #[test]
    fn dromion_intensity_at_origin() {
        let u = eval_U(&dromion(), &CoordinatePoint::new(0.0, 0.0, 0.0));
        let f = 1.0 + 2.0 * E + 2.0 * E * E;
        assert!(u.is_valid());
        assert!((u.value - 4.0 * E * E / (f * f)).abs() < 1e-16);
        assert!((u.value - 0.06567).abs() < 1e-5);
    }

    #[test]
    fn zero_determinant_gives_zero_intensity() {
        let spec = SolutionSpec::new(
            SeparationCoefficients::new(1.0, 1.0, 1.0, 1.0).unwrap(),
            Profile::exponential(1.0, 1.0, 1.0),
            Profile::exponential(1.0, 1.0, 1.0),
        )
        .unwrap();
        for (x, y) in [(0.0, 0.0), (1.0, -2.0), (-3.0, 0.5)] {
            assert_eq!(eval_U(&spec, &CoordinatePoint::new(x, y, 0.3)).value, 0.0);
        }
    }

    #[test]
    fn envelope_at_origin() {
        let u = eval_u(&dromion(), &CoordinatePoint::new(0.0, 0.0, 0.0), 0.0, 0.0);
        let f = 1.0 + 2.0 * E + 2.0 * E * E;
        assert!((u.value.re - 2.0 * E / f).abs() < 1e-15);
        assert_eq!(u.value.im, 0.0);
        assert!((u.value.re - 0.25626).abs() < 1e-5);

        let flipped = dromion().with_signs(crate::ansatz::Sign::Minus, crate::ansatz::Sign::Plus);
        let v = eval_u(&flipped, &CoordinatePoint::new(0.0, 0.0, 0.0), 0.0, 0.0);
        assert_eq!(v.value.re, -u.value.re);
    }

    #[test]
    fn phi_forms_agree() {
        let spec = dromion();
        for (x, y, t) in [(0.0, 0.0, 0.0), (1.3, -0.4, 0.2), (-2.0, 2.5, -0.7)] {
            let pt = CoordinatePoint::new(x, y, t);
            let a = eval_phi(&spec, &pt, 0.375, 0.375).value;
            let b = phi_log_form(&spec, &pt, 0.375, 0.375);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn singular_points_are_flagged() {
        // f = 1 - p vanishes at ζ = 0, t = 0.
        let spec = SolutionSpec::new(
            SeparationCoefficients::new(1.0, -1.0, 0.0, 0.0).unwrap(),
            Profile::exponential(1.0, 0.0, 0.0),
            Profile::exponential(1.0, 0.0, 0.0),
        )
        .unwrap();
        assert_eq!(eval_U(&spec, &CoordinatePoint::new(0.0, 0.0, 0.0)).status, PointStatus::Singular);
    }

    #[test]
    fn sign_violation_keeps_raw_value() {
        let spec = SolutionSpec::new(
            SeparationCoefficients::new(0.0, 1.0, 1.0, 0.0).unwrap(),
            Profile::exponential(1.0, 0.0, 0.0),
            Profile::exponential(1.0, 0.0, 0.0),
        )
        .unwrap();
        let u = eval_U(&spec, &CoordinatePoint::new(0.2, 0.1, 0.0));
        assert_eq!(u.status, PointStatus::SignViolation);
        assert!(u.value < 0.0);
    }
}
