//! Brute-force validators that share no numerical code with the production
//! paths: a finite-difference radial eigensolver, a Gauss–Kronrod reference
//! for `K_{iβ}`, and a bisection reference for Lambert W.

mod fd;
mod reference;

pub use fd::{fd_spectrum, fd_spectrum_richardson, sturm_count, OracleResult, RadialGrid};
pub use reference::{lambert_reference, quadrature_reference_k};
