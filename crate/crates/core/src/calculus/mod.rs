//! Exact derivatives through truncated Taylor jets, plus the finite
//! difference and quadrature tools used where jets do not reach.

mod jet;
mod quadrature;
mod scalar;
mod stencil;

pub use jet::{guarded, hyper_space, hyper_time, HyperJet, Jet, DIV_GUARD};
pub use quadrature::{quadrature, simpson, Bundle, CompensatedSum, Integrand};
pub use scalar::Scalar;
pub use stencil::{fd_apply, fd_derivative, Stencil, DEFAULT_STEP, DEFAULT_STEP_HIGH};

/// Jet in the rotated coordinates and time, variables ordered `(ζ, η, t)`.
pub type FieldJet<T = f64> = Jet<T, 3>;

pub const ZETA: usize = 0;
pub const ETA: usize = 1;
pub const TIME: usize = 2;

/// Elementary functions selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Pow(f64),
}

pub fn jet_elementary<T: Scalar>(a: T, f: Elementary) -> T {
    match f {
        Elementary::Exp => a.exp(),
        Elementary::Log => a.ln(),
        Elementary::Sqrt => a.sqrt(),
        Elementary::Sin => a.sin(),
        Elementary::Cos => a.cos(),
        Elementary::Tan => a.tan(),
        Elementary::Pow(k) => a.powf(k),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn jet_arith<T: Scalar>(a: T, b: T, op: ArithOp) -> T {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a / b,
    }
}
