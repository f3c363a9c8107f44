use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// A point `(x, y, t)` together with its rotated coordinates
/// `ζ = (x − y)/√2`, `η = (x + y)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinatePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl CoordinatePoint {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        CoordinatePoint { x, y, t }
    }

    pub fn from_rotated(zeta: f64, eta: f64, t: f64) -> Self {
        CoordinatePoint {
            x: (zeta + eta) / SQRT_2,
            y: (eta - zeta) / SQRT_2,
            t,
        }
    }

    pub fn zeta(&self) -> f64 {
        (self.x - self.y) / SQRT_2
    }

    pub fn eta(&self) -> f64 {
        (self.x + self.y) / SQRT_2
    }
}

/// Rectangular sampling window in `(x, y)`, optionally clipped to the
/// diamond `|ζ| ≤ b, |η| ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub rotated_bound: Option<f64>,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "window {x0}:{x1}:{y0}:{y1} must have finite, increasing bounds"
            )));
        }
        Ok(Window {
            x: (x0, x1),
            y: (y0, y1),
            rotated_bound: None,
        })
    }

    pub fn square(half: f64) -> Self {
        Window::new(-half, half, -half, half).expect("positive half-width")
    }

    /// Smallest `(x, y)` square containing the diamond `|ζ|, |η| ≤ bound`,
    /// with points outside the diamond excluded.
    pub fn diamond(bound: f64) -> Self {
        let half = SQRT_2 * bound;
        Window {
            rotated_bound: Some(bound),
            ..Window::square(half)
        }
    }

    /// Whether `(x, y)` lies inside the diamond clip (always true without one).
    pub fn admits(&self, x: f64, y: f64) -> bool {
        match self.rotated_bound {
            None => true,
            Some(b) => {
                let p = CoordinatePoint::new(x, y, 0.0);
                p.zeta().abs() <= b && p.eta().abs() <= b
            }
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x.0 && x <= self.x.1 && y >= self.y.0 && y <= self.y.1 && self.admits(x, y)
    }

    pub fn x_at(&self, ix: usize, nx: usize) -> f64 {
        lerp(self.x, ix, nx)
    }

    pub fn y_at(&self, iy: usize, ny: usize) -> f64 {
        lerp(self.y, iy, ny)
    }

    pub fn spacing(&self, nx: usize, ny: usize) -> (f64, f64) {
        (
            (self.x.1 - self.x.0) / (nx - 1) as f64,
            (self.y.1 - self.y.0) / (ny - 1) as f64,
        )
    }

    /// Extent of the window in the rotated coordinates.
    pub fn rotated_extent(&self) -> ((f64, f64), (f64, f64)) {
        let corners = [
            (self.x.0, self.y.0),
            (self.x.0, self.y.1),
            (self.x.1, self.y.0),
            (self.x.1, self.y.1),
        ];
        let mut z = (f64::INFINITY, f64::NEG_INFINITY);
        let mut e = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in corners {
            let p = CoordinatePoint::new(x, y, 0.0);
            z = (z.0.min(p.zeta()), z.1.max(p.zeta()));
            e = (e.0.min(p.eta()), e.1.max(p.eta()));
        }
        if let Some(b) = self.rotated_bound {
            z = (z.0.max(-b), z.1.min(b));
            e = (e.0.max(-b), e.1.min(b));
        }
        (z, e)
    }
}

/// Uniform node `i` of `n` spanning `range` with both endpoints included.
fn lerp(range: (f64, f64), i: usize, n: usize) -> f64 {
    if i + 1 == n {
        return range.1;
    }
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}
