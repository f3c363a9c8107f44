use crate::error::{Error, Result};

/// Central finite-difference stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    order: usize,
    accuracy: usize,
    h: f64,
}

/// Default step for second (and first) derivatives.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Default step when the stencil feeds fourth-derivative quantities.
pub const DEFAULT_STEP_HIGH: f64 = 1e-2;

impl Stencil {
    pub fn new(order: usize, accuracy: usize, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidStep(h));
        }
        if !matches!(order, 1 | 2 | 4) || !matches!(accuracy, 2 | 4) {
            return Err(Error::UnsupportedStencil { order, accuracy });
        }
        Ok(Stencil { order, accuracy, h })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn accuracy(&self) -> usize {
        self.accuracy
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Same order and accuracy with a different step.
    pub fn with_step(&self, h: f64) -> Result<Self> {
        Stencil::new(self.order, self.accuracy, h)
    }

    /// Same accuracy and step with a different derivative order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Stencil::new(order, self.accuracy, self.h)
    }

    /// Unscaled weights on offsets `-half..=half` (in units of `h`).
    pub fn unit_weights(&self) -> &'static [f64] {
        match (self.order, self.accuracy) {
            (1, 2) => &[-0.5, 0.0, 0.5],
            (1, 4) => &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
            (2, 2) => &[1.0, -2.0, 1.0],
            (2, 4) => &[-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0],
            (4, 2) => &[1.0, -4.0, 6.0, -4.0, 1.0],
            (4, 4) => &[
                -1.0 / 6.0,
                2.0,
                -13.0 / 2.0,
                28.0 / 3.0,
                -13.0 / 2.0,
                2.0,
                -1.0 / 6.0,
            ],
            _ => unreachable!("validated in Stencil::new"),
        }
    }

    pub fn width(&self) -> usize {
        self.unit_weights().len()
    }

    pub fn half_width(&self) -> usize {
        self.width() / 2
    }

    /// `(offset, weight)` pairs with zero weights dropped; the weights
    /// already include the `h^-order` scaling.
    pub fn taps(&self) -> Vec<(i32, f64)> {
        let half = self.half_width() as i32;
        let scale = self.h.powi(self.order as i32);
        self.unit_weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(k, w)| (k as i32 - half, w / scale))
            .collect()
    }
}

/// Central-difference derivative estimate from samples taken at
/// `x0 + k h`, `k = -half..=half`.
pub fn fd_derivative(samples: &[f64], stencil: &Stencil) -> Result<f64> {
    let weights = stencil.unit_weights();
    if samples.len() != weights.len() {
        return Err(Error::StencilWidth {
            expected: weights.len(),
            got: samples.len(),
        });
    }
    let half = stencil.half_width() as f64;
    if let Some(k) = samples.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite {
            what: "stencil sample",
            at: (k as f64 - half) * stencil.h,
        });
    }
    let acc: f64 = weights.iter().zip(samples).map(|(w, s)| w * s).sum();
    Ok(acc / stencil.h.powi(stencil.order as i32))
}

/// Samples `f` on the stencil around `x0` and differentiates.
pub fn fd_apply(f: impl Fn(f64) -> f64, x0: f64, stencil: &Stencil) -> Result<f64> {
    let half = stencil.half_width() as i32;
    let samples: Vec<f64> = (-half..=half).map(|k| f(x0 + f64::from(k) * stencil.h)).collect();
    fd_derivative(&samples, stencil)
}
