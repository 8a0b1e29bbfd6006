//! Shared numerical building blocks: error functions and quadrature.

pub mod erf;
pub mod quad;
