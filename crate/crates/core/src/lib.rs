pub mod ansatz;
pub mod auxiliary;
pub mod calculus;
pub mod catalog;
mod error;
pub mod field;
pub mod specfile;
pub mod verify;

pub use error::{Error, Result};
