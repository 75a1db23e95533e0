//! Born-Oppenheimer spectrum of two identical bosons and a lighter particle
//! with resonant zero-range boson-light interactions.
//!
//! The computation is split the same way the physics is:
//!
//! * [`fast`] solves the light-particle problem for frozen boson separation
//!   `y`, giving the effective potential `v(r) = μ·E(r)` through a Lambert-W
//!   inversion.
//! * [`slow`] solves the s-wave radial problem in that potential by matching
//!   a numerically integrated interior solution to the decaying Macdonald
//!   function `√r·K_{iβ}(λr)` outside the cutoff radius.
//! * [`oracle`] holds brute-force validators (finite differences, direct
//!   quadrature, bisection) that share no code with the production paths.
//!
//! All numerics are generic over [`Real`]; the `*64` aliases below fix the
//! scalar to `f64`, which is what the command-line driver uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fast;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod real;
pub mod roots;
pub mod slow;
pub mod specialfn;

pub use error::{Error, Result};
pub use fast::{
    effective_potential, fast_eigenfunction, fast_eigenvalue, theta_eval, CutoffProfile, EffectivePotential,
    ModelParams, ProfileKind, RadialPotential,
};
pub use real::Real;
pub use slow::{
    beta_param, compute_ab, integrate_inner, matching_determinant, seed_levels, slow_eigenfunction, solve_spectrum,
    BetaParam, InnerSolution, MatchingCoefficients, Spectrum, SpectrumLevel, SpectrumOptions,
};
pub use specialfn::{
    gamma_phase, lambert_w0, macdonald, macdonald_small_z, GammaPhase, MacdonaldMethod, MacdonaldValue,
};

pub type CutoffProfile64 = CutoffProfile<f64>;
pub type ModelParams64 = ModelParams<f64>;
pub type EffectivePotential64 = EffectivePotential<f64>;
pub type BetaParam64 = BetaParam<f64>;
pub type InnerSolution64 = InnerSolution<f64>;
pub type MatchingCoefficients64 = MatchingCoefficients<f64>;
pub type SpectrumLevel64 = SpectrumLevel<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type SpectrumOptions64 = SpectrumOptions<f64>;
pub type MacdonaldValue64 = MacdonaldValue<f64>;
pub type GammaPhase64 = GammaPhase<f64>;
pub type RadialGrid64 = oracle::RadialGrid<f64>;
pub type OracleResult64 = oracle::OracleResult<f64>;
