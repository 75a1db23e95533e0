use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures of the spectral pipeline. Numeric payloads are widened to `f64`
/// so the error type does not depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("K_iβ({x}) underflows to zero")]
    Underflow { x: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "no Efimov regime: μ/ν·W(1)² = {coupling} ≤ 1/4 \
         (critical mass ratio M/m ≈ {critical_mass_ratio:.6})"
    )]
    NoEfimovRegime { coupling: f64, critical_mass_ratio: f64 },

    #[error("step size underflow in the interior integration at r = {r}")]
    StepSizeUnderflow { r: f64 },

    #[error("degenerate interior solution: a = {a}, b = {b} both vanish")]
    DegenerateInner { a: f64, b: f64 },

    #[error("seed λ_{n}·r0 = {scaled_seed} underflows")]
    SeedUnderflow { n: i64, scaled_seed: f64 },

    #[error("no root of the matching determinant for level {n} in [{lo}, {hi}]")]
    BracketFailure { n: i64, lo: f64, hi: f64 },

    #[error("{what} did not converge")]
    NonConvergence { what: &'static str },

    #[error("eigenvector {index} leaks {tail_mass:e} of its mass to the box edge")]
    InsufficientDomain { index: usize, tail_mass: f64 },

    #[error("fast eigenfunction evaluated on a point-interaction centre")]
    Singularity,
}
