//! Degree sequences of monomial maps on toric varieties, computed exactly
//! from mixed volumes, and the analysis of their generating series.

pub mod classify;
pub mod degrees;
pub mod error;
pub mod fourier;
pub mod io;
pub mod linalg;
pub mod modp;
pub mod polytope;
pub mod rational;
pub mod semiconj;
pub mod series;

pub use error::{Error, Result};
