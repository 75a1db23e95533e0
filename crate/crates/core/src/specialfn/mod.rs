//! Special functions needed by the model, written from scratch: the principal
//! Lambert W branch, the phase of `Γ(1+iβ)`, and the Macdonald function
//! `K_{iβ}(x)` of purely imaginary order together with its derivative.

mod gamma;
mod lambert;
mod macdonald;

pub use gamma::{gamma_phase, GammaPhase};
pub use lambert::lambert_w0;
pub use macdonald::{
    macdonald, macdonald_large_z, macdonald_quadrature, macdonald_small_z, small_z_crossover, MacdonaldMethod,
    MacdonaldValue, LARGE_Z_CROSSOVER,
};
