//! Return sets `{n ≥ 0 : f^n(x) ∈ V}` of polynomial self-maps, certified through p-adic
//! interpolation of iterates and Strassmann zero counting; zero sets of linear recurrences;
//! degree growth, Weil heights and return-density profiles.

pub mod arith;
pub mod error;
pub mod growth;
pub mod interpolate;
pub mod padic;
pub mod report;
pub mod returns;

pub use error::{DmlError, Result};
