use crate::error::{Error, Result};
use crate::real::Real;
use crate::specialfn::gamma_phase;

/// Above this argument `K_{iβ}` is taken from its Hankel expansion.
pub const LARGE_Z_CROSSOVER: f64 = 50.0;

/// Below this argument `K_{iβ}` is taken from its leading small-`z` form.
pub fn small_z_crossover<T: Real>(beta: T) -> T {
    T::lit(1e-6) * (T::one() + beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MacdonaldMethod {
    Quadrature,
    SmallArgumentAsymptotic,
    LargeArgumentAsymptotic,
}

/// `K_{iβ}(x)` and `dK_{iβ}/dx`, tagged with the path that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacdonaldValue<T> {
    pub value: T,
    pub derivative: T,
    pub method: MacdonaldMethod,
}

/// Macdonald function `K_{iβ}(x)` of imaginary order for `β ≥ 0`, `x > 0`.
///
/// Dispatches on the argument: leading small-`z` asymptotics below
/// [`small_z_crossover`], the cosh-integral otherwise, and the Hankel series
/// above [`LARGE_Z_CROSSOVER`].
pub fn macdonald<T: Real>(beta: T, x: T) -> Result<MacdonaldValue<T>> {
    check_args(beta, x)?;
    if x < small_z_crossover(beta) {
        Ok(macdonald_small_z(beta, x))
    } else if x > T::lit(LARGE_Z_CROSSOVER) {
        macdonald_large_z(beta, x)
    } else {
        macdonald_quadrature(beta, x)
    }
}

fn check_args<T: Real>(beta: T, x: T) -> Result<()> {
    if !(beta >= T::zero()) || !beta.is_finite() {
        return Err(Error::Domain { what: "macdonald order β", value: beta.as_f64() });
    }
    if !(x > T::zero()) || x.is_nan() {
        return Err(Error::Domain { what: "macdonald argument", value: x.as_f64() });
    }
    Ok(())
}

/// Leading-order behaviour as `x → 0⁺`:
///
/// `K_{iβ}(x) ≈ -√(π/(β sinh πβ)) · sin(β ln(x/2) - ϑ_β)`,
/// `x·K'_{iβ}(x) ≈ -√(πβ/sinh πβ) · cos(β ln(x/2) - ϑ_β)`,
///
/// both with `O(x²)` error. At `β = 0` the limit `-ln(x/2) - γ` is used.
pub fn macdonald_small_z<T: Real>(beta: T, x: T) -> MacdonaldValue<T> {
    let method = MacdonaldMethod::SmallArgumentAsymptotic;
    let log_half = (x / T::lit(2.0)).ln();
    if beta == T::zero() {
        return MacdonaldValue { value: -log_half - T::euler_gamma(), derivative: -T::one() / x, method };
    }
    let amp = small_z_amplitude(beta);
    let phase = beta * log_half - gamma_phase(beta).theta_beta;
    let (s, c) = phase.sin_cos();
    MacdonaldValue { value: -amp * s, derivative: -amp * beta * c / x, method }
}

/// `√(π/(β sinh πβ))`, evaluated without overflowing `sinh`.
pub(crate) fn small_z_amplitude<T: Real>(beta: T) -> T {
    let pi = T::PI();
    let x = pi * beta;
    if x > T::lit(40.0) {
        (T::lit(2.0) * pi / beta).sqrt() * (-x / T::lit(2.0)).exp()
    } else {
        (pi / (beta * x.sinh())).sqrt()
    }
}

/// Hankel expansion
/// `K_{iβ}(x) ~ √(π/2x) e^{-x} Σ_k a_k x^{-k}`,
/// `a_k = a_{k-1} · (-(4β² + (2k-1)²)) / (8k)`, truncated at the smallest term.
pub fn macdonald_large_z<T: Real>(beta: T, x: T) -> Result<MacdonaldValue<T>> {
    check_args(beta, x)?;
    let decay = (-x).exp();
    if decay == T::zero() {
        return Err(Error::Underflow { x: x.as_f64() });
    }
    let eps = T::epsilon();
    let four_b2 = T::lit(4.0) * beta * beta;
    let half = T::lit(0.5);
    let mut term = T::one();
    let mut sum = T::one();
    let mut dsum = T::one() + half / x;
    for k in 1..80 {
        let kf = T::from_usize_lossy(k);
        let odd = T::lit(2.0) * kf - T::one();
        let next = -term * (four_b2 + odd * odd) / (T::lit(8.0) * kf * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum = sum + term;
        dsum = dsum + term * (T::one() + (kf + half) / x);
        if term.abs() <= eps * sum.abs() {
            break;
        }
    }
    let prefactor = (T::PI() / (T::lit(2.0) * x)).sqrt() * decay;
    Ok(MacdonaldValue {
        value: prefactor * sum,
        derivative: -prefactor * dsum,
        method: MacdonaldMethod::LargeArgumentAsymptotic,
    })
}

/// Production quadrature of
///
/// `K_{iβ}(x) = ∫₀^∞ e^{-x cosh t} cos(βt) dt`,
/// `K'_{iβ}(x) = -∫₀^∞ cosh t · e^{-x cosh t} cos(βt) dt`.
///
/// Both integrands are even and analytic in a strip around the real axis, so
/// the trapezoidal rule on the half line converges geometrically in the
/// number of nodes. The step is halved until two successive sums agree to a
/// few ulps of the integrand's L1 norm. The factor `e^{-x}` is pulled out so
/// the integrand never underflows before truncation.
pub fn macdonald_quadrature<T: Real>(beta: T, x: T) -> Result<MacdonaldValue<T>> {
    check_args(beta, x)?;
    let eps = T::epsilon();
    let decay_budget = -eps.ln() + T::lit(10.0);
    let t_max = (T::one() + decay_budget / x).acosh();
    let two = T::lit(2.0);

    // returns (f, g, |f|, |g|) at t, where f is the scaled value integrand
    let eval = |t: T| {
        let sh = (t / two).sinh();
        let ch_m1 = two * sh * sh;
        let damp = (-x * ch_m1).exp();
        let osc = (beta * t).cos();
        let f = damp * osc;
        let g = (ch_m1 + T::one()) * f;
        (f, g, f.abs(), g.abs())
    };

    let mut n: usize = 32;
    let mut h = t_max / T::from_usize_lossy(n);
    let (f0, g0, _, _) = eval(T::zero());
    let (fe, ge, _, _) = eval(t_max);
    let mut sf = (f0 + fe) / two;
    let mut sg = (g0 + ge) / two;
    let mut af = (f0.abs() + fe.abs()) / two;
    let mut ag = (g0.abs() + ge.abs()) / two;
    for k in 1..n {
        let (f, g, fa, ga) = eval(h * T::from_usize_lossy(k));
        sf = sf + f;
        sg = sg + g;
        af = af + fa;
        ag = ag + ga;
    }
    let mut prev_f = h * sf;
    let mut prev_g = h * sg;
    let tol = T::lit(16.0) * eps;
    loop {
        if n >= 1 << 18 {
            return Err(Error::NonConvergence { what: "macdonald quadrature" });
        }
        // add midpoints
        for k in 0..n {
            let t = h * (T::from_usize_lossy(k) + T::lit(0.5));
            let (f, g, fa, ga) = eval(t);
            sf = sf + f;
            sg = sg + g;
            af = af + fa;
            ag = ag + ga;
        }
        n *= 2;
        h = h / two;
        let cur_f = h * sf;
        let cur_g = h * sg;
        let done = (cur_f - prev_f).abs() <= tol * h * af && (cur_g - prev_g).abs() <= tol * h * ag;
        prev_f = cur_f;
        prev_g = cur_g;
        if done && n >= 64 {
            break;
        }
    }
    let decay = (-x).exp();
    Ok(MacdonaldValue { value: decay * prev_f, derivative: -decay * prev_g, method: MacdonaldMethod::Quadrature })
}
