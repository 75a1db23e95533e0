//! Slow (boson-pair) dynamics in the s-wave sector.
//!
//! With `u = r·ζ` and `λ = √(-μE)`, the radial problem is
//!
//! * `u'' = (v(r) + λ²)·u` on `(0, r0]`, `u(0) = 0`, integrated numerically;
//! * `u'' + (β² + ¼)/r²·u - λ²u = 0` on `r > r0`, solved by `√r·K_{iβ}(λr)`.
//!
//! Bound states are the zeros of the 2×2 matching determinant
//!
//! `D(λ) = [w(r0)/2 - r0·w'(r0)]·K_{iβ}(λr0) + λr0·w(r0)·K'_{iβ}(λr0)`.
//!
//! Each zero is searched for in the bracket `λ⁰ₙ·e^{±π/(2β)}` around the
//! zero `λ⁰ₙ` of the small-`λ` form of `D`, so that `ηₙ = β ln(λₙ/λ⁰ₙ)` lies
//! in `(-π/2, π/2)`.

use crate::error::{Error, Result};
use crate::fast::{effective_potential, ModelParams, RadialPotential};
use crate::ode::{DormandPrince, Tolerances};
use crate::quad::GaussLegendre;
use crate::real::Real;
use crate::roots::brent;
use crate::specialfn::{gamma_phase, lambert_w0, macdonald, GammaPhase};

/// Scale exponent `β = √((μ/ν)·W(1)² - ¼)` of the exterior `1/r²` tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParam<T> {
    pub beta: T,
    pub mu_over_nu: T,
}

impl<T: Real> BetaParam<T> {
    /// Strength `β² + ¼` of the attractive tail `-(β² + ¼)/r²`.
    pub fn tail_strength(&self) -> T {
        self.beta * self.beta + T::lit(0.25)
    }

    /// Asymptotic ratio `e^{2π/β}` of consecutive energies.
    pub fn energy_ratio(&self) -> T {
        (T::lit(2.0) * T::PI() / self.beta).exp()
    }
}

/// Mass ratio `M/m` at which `(μ/ν)·W(1)² = ¼`, i.e. `(1/W(1)² - 1)/2`.
pub fn critical_mass_ratio<T: Real>() -> T {
    let w1 = lambert_w0(T::one()).expect("W(1) is in the domain");
    (T::one() / (w1 * w1) - T::one()) / T::lit(2.0)
}

/// Computes `β`, failing below the critical mass ratio where the exterior
/// tail is too weak to bind infinitely many states.
pub fn beta_param<T: Real>(params: &ModelParams<T>) -> Result<BetaParam<T>> {
    let w1 = lambert_w0(T::one())?;
    let mu_over_nu = params.mu_over_nu();
    let coupling = mu_over_nu * w1 * w1;
    let beta_sq = coupling - T::lit(0.25);
    if !(beta_sq > T::zero()) {
        return Err(Error::NoEfimovRegime {
            coupling: coupling.as_f64(),
            critical_mass_ratio: critical_mass_ratio::<f64>(),
        });
    }
    Ok(BetaParam { beta: beta_sq.sqrt(), mu_over_nu })
}

/// Interior solution `w_λ` evaluated at the cutoff radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolution<T> {
    pub lambda: T,
    pub w_r0: T,
    pub dw_r0: T,
    pub tol: T,
    /// Initial slope `w'(0)`.
    pub slope: T,
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if !(tol > T::lit(1e-14) && tol < T::lit(1e-3)) {
        return Err(Error::InvalidParameter(format!("integration tolerance {tol} outside (1e-14, 1e-3)")));
    }
    Ok(())
}

/// `(w, w')` pairs at requested radii.
pub type Samples<T> = Vec<(T, T)>;

/// Integrates `w'' = (v + λ²)·w`, `w(0) = 0`, `w'(0) = slope` across the
/// interior and samples it at `rs` (sorted, within `[0, r0]`).
///
/// The system is advanced in `ρ = r/r0` with state `(w/r0, w')`, which makes
/// the step sequence independent of the length unit. Returns `(w, w')` at
/// each sample and the solution at `r0`.
pub fn integrate_inner_samples<T: Real, P: RadialPotential<T>>(
    pot: &P,
    lambda: T,
    slope: T,
    tol: T,
    rs: &[T],
) -> Result<(Samples<T>, InnerSolution<T>)> {
    check_tol(tol)?;
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(Error::Domain { what: "integrate_inner λ", value: lambda.as_f64() });
    }
    if slope == T::zero() || !slope.is_finite() {
        return Err(Error::InvalidParameter("inner initial slope must be non-zero".into()));
    }
    let r0 = pot.r0();
    let r0_sq = r0 * r0;
    let lambda_sq = lambda * lambda;
    let rhos: Vec<T> = rs.iter().map(|&r| r / r0).collect();
    let abs_tol = tol * slope.abs();
    let tols = Tolerances { rtol: tol, atol: [abs_tol, abs_tol] };
    let rhs = |rho: T, y: &[T; 2]| [y[1], r0_sq * (pot.eval(r0 * rho) + lambda_sq) * y[0]];
    let traj = DormandPrince::default().integrate(rhs, T::zero(), [T::zero(), slope], T::one(), tols, &rhos)?;
    let samples = traj.outputs.iter().map(|y| (r0 * y[0], y[1])).collect();
    let end = traj.end;
    Ok((samples, InnerSolution { lambda, w_r0: r0 * end[0], dw_r0: end[1], tol, slope }))
}

/// Interior solution with unit initial slope.
pub fn integrate_inner<T: Real, P: RadialPotential<T>>(pot: &P, lambda: T, tol: T) -> Result<InnerSolution<T>> {
    integrate_inner_with_slope(pot, lambda, T::one(), tol)
}

pub fn integrate_inner_with_slope<T: Real, P: RadialPotential<T>>(
    pot: &P,
    lambda: T,
    slope: T,
    tol: T,
) -> Result<InnerSolution<T>> {
    integrate_inner_samples(pot, lambda, slope, tol, &[]).map(|(_, s)| s)
}

/// Left-hand side of the matching condition at the inner solution's `λ`.
pub fn matching_determinant<T: Real>(inner: &InnerSolution<T>, beta: &BetaParam<T>, r0: T) -> Result<T> {
    let z = inner.lambda * r0;
    let k = macdonald(beta.beta, z)?;
    let a = inner.w_r0 / T::lit(2.0) - r0 * inner.dw_r0;
    Ok(a * k.value + z * inner.w_r0 * k.derivative)
}

/// Coefficients of the small-`λ` form of the matching condition,
/// `a = w₀(r0)/2 - r0·w₀'(r0)` and `b = β·w₀(r0)`, with phase
/// `α = atan2(b, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingCoefficients<T> {
    pub a: T,
    pub b: T,
    pub alpha_phase: T,
}

impl<T: Real> MatchingCoefficients<T> {
    pub fn new(a: T, b: T) -> Self {
        Self { a, b, alpha_phase: b.atan2(a) }
    }

    pub fn from_inner(inner: &InnerSolution<T>, beta: &BetaParam<T>, r0: T) -> Self {
        Self::new(inner.w_r0 / T::lit(2.0) - r0 * inner.dw_r0, beta.beta * inner.w_r0)
    }
}

/// `a` and `b` from the zero-energy interior solution.
pub fn compute_ab<T: Real, P: RadialPotential<T>>(
    pot: &P,
    beta: &BetaParam<T>,
    tol: T,
) -> Result<MatchingCoefficients<T>> {
    let inner = integrate_inner(pot, T::zero(), tol)?;
    let c = MatchingCoefficients::from_inner(&inner, beta, pot.r0());
    let scale = pot.r0().max(inner.w_r0.abs()).max(pot.r0() * inner.dw_r0.abs());
    if c.a.abs() < T::lit(1e-12) * scale && c.b.abs() < T::lit(1e-12) * scale {
        return Err(Error::DegenerateInner { a: c.a.as_f64(), b: c.b.as_f64() });
    }
    Ok(c)
}

fn seed_floor<T: Real>() -> T {
    T::lit(1e-290).max(T::min_positive_value() * T::lit(1e8))
}

/// Zero of the small-`λ` matching condition with index `n`:
/// `λ⁰ₙ = (2/r0)·exp((ϑ_β - α - nπ)/β)`.
pub fn seed_level<T: Real>(coeffs: &MatchingCoefficients<T>, gamma: &GammaPhase<T>, r0: T, n: i64) -> Result<T> {
    let beta = gamma.beta;
    let nf = T::from_i64(n).expect("level index representable");
    let exponent = (gamma.theta_beta - coeffs.alpha_phase - nf * T::PI()) / beta;
    let seed = T::lit(2.0) / r0 * exponent.exp();
    if !(seed * r0 >= seed_floor()) {
        return Err(Error::SeedUnderflow { n, scaled_seed: (seed * r0).as_f64() });
    }
    Ok(seed)
}

/// Seeds `λ⁰ₙ` for `n = n_from..=n_to`.
pub fn seed_levels<T: Real>(
    coeffs: &MatchingCoefficients<T>,
    beta: &BetaParam<T>,
    r0: T,
    n_from: i64,
    n_to: i64,
) -> Result<Vec<T>> {
    if n_to < n_from {
        return Err(Error::InvalidParameter(format!("empty level range {n_from}..={n_to}")));
    }
    let gamma = gamma_phase(beta.beta);
    (n_from..=n_to).map(|n| seed_level(coeffs, &gamma, r0, n)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumOptions<T> {
    /// Relative tolerance of the interior integration.
    pub ode_tol: T,
    /// Relative tolerance on each `λₙ`.
    pub root_tol: T,
    /// Initial slope `w'(0)` of the interior solution.
    pub inner_slope: T,
    /// First seed index; by default the smallest `n` whose bracket reaches
    /// below `√(-min v)`.
    pub n_start: Option<i64>,
    /// Gauss–Legendre panels on `[0, r0]` for the normalisation integral.
    pub inner_panels: usize,
}

impl<T: Real> Default for SpectrumOptions<T> {
    fn default() -> Self {
        Self {
            ode_tol: T::lit(1e-11).max(T::epsilon() * T::lit(100.0)),
            root_tol: T::lit(1e-12).max(T::epsilon() * T::lit(8.0)),
            inner_slope: T::one(),
            n_start: None,
            inner_panels: 16,
        }
    }
}

/// One bound state of the slow Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLevel<T> {
    pub n: i64,
    /// Seed `λ⁰ₙ` of the bracket.
    pub seed: T,
    pub lambda_n: T,
    /// `β·ln(λₙ/λ⁰ₙ)`, inside `(-π/2, π/2)` for an accepted root.
    pub eta_n: T,
    /// `E_n = -λₙ²/μ`.
    pub energy: T,
    /// Interior amplitude, `u = Aₙ·w_{λₙ}` on `[0, r0]`.
    pub a_n: T,
    /// Exterior amplitude, `u = Bₙ·√r·K_{iβ}(λₙr)` beyond `r0`.
    pub b_n: T,
    /// Residual `D(λₙ)` in units of `√(a² + b²)` of the bracket seed.
    pub residual: T,
    pub inner: InnerSolution<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub beta: BetaParam<T>,
    pub gamma: GammaPhase<T>,
    pub coeffs: MatchingCoefficients<T>,
    pub mu: T,
    pub r0: T,
    /// `√(-min v)`: no bound state has `λ` above this.
    pub lambda_max: T,
    pub n_start: i64,
    /// One entry per requested index, `n_start + i`.
    pub levels: Vec<Result<SpectrumLevel<T>>>,
}

impl<T: Real> Spectrum<T> {
    pub fn converged(&self) -> impl Iterator<Item = &SpectrumLevel<T>> {
        self.levels.iter().filter_map(|l| l.as_ref().ok())
    }

    /// `E_n/E_{n+1}` for consecutive converged levels.
    pub fn ratios(&self) -> Vec<T> {
        self.levels
            .windows(2)
            .filter_map(|w| match (&w[0], &w[1]) {
                (Ok(a), Ok(b)) => Some(a.energy / b.energy),
                _ => None,
            })
            .collect()
    }
}

/// Solves for `n_levels` consecutive bound states with root tolerance `tol`.
pub fn solve_spectrum<T: Real>(params: &ModelParams<T>, n_levels: usize, tol: T) -> Result<Spectrum<T>> {
    let options = SpectrumOptions { root_tol: tol, ..SpectrumOptions::default() };
    solve_spectrum_with(params, n_levels, &options)
}

pub fn solve_spectrum_with<T: Real>(
    params: &ModelParams<T>,
    n_levels: usize,
    options: &SpectrumOptions<T>,
) -> Result<Spectrum<T>> {
    let beta = beta_param(params)?;
    let pot = effective_potential(params);
    solve_spectrum_in(&pot, &beta, params.mu(), n_levels, options)
}

/// Spectrum in an arbitrary interior potential joined to the `-(β²+¼)/r²`
/// tail at `pot.r0()`.
pub fn solve_spectrum_in<T: Real, P: RadialPotential<T>>(
    pot: &P,
    beta: &BetaParam<T>,
    mu: T,
    n_levels: usize,
    options: &SpectrumOptions<T>,
) -> Result<Spectrum<T>> {
    if n_levels == 0 {
        return Err(Error::InvalidParameter("at least one level must be requested".into()));
    }
    if !(options.root_tol > T::zero()) {
        return Err(Error::InvalidParameter("root tolerance must be positive".into()));
    }
    let r0 = pot.r0();
    let gamma = gamma_phase(beta.beta);
    let zero_energy = integrate_inner_with_slope(pot, T::zero(), options.inner_slope, options.ode_tol)?;
    let coeffs = MatchingCoefficients::from_inner(&zero_energy, beta, r0);
    let scale = options.inner_slope.abs() * r0;
    if coeffs.a.hypot(coeffs.b) < T::lit(1e-12) * scale {
        return Err(Error::DegenerateInner { a: coeffs.a.as_f64(), b: coeffs.b.as_f64() });
    }

    let min_v = pot.min_value().min(-beta.tail_strength() / (r0 * r0));
    let lambda_max = (-min_v).sqrt();
    let n_start = options.n_start.unwrap_or_else(|| {
        // smallest n with λ⁰ₙ·e^{-π/(2β)} < λ_max
        let pi = T::PI();
        let x = (gamma.theta_beta
            - coeffs.alpha_phase
            - pi / T::lit(2.0)
            - beta.beta * (lambda_max * r0 / T::lit(2.0)).ln())
            / pi;
        x.floor().to_i64().unwrap_or(0) + 1
    });

    let levels =
        (0..n_levels as i64).map(|i| solve_level(pot, beta, &gamma, &coeffs, mu, n_start + i, options)).collect();
    Ok(Spectrum { beta: *beta, gamma, coeffs, mu, r0, lambda_max, n_start, levels })
}

fn solve_level<T: Real, P: RadialPotential<T>>(
    pot: &P,
    beta: &BetaParam<T>,
    gamma: &GammaPhase<T>,
    coeffs: &MatchingCoefficients<T>,
    mu: T,
    n: i64,
    options: &SpectrumOptions<T>,
) -> Result<SpectrumLevel<T>> {
    let r0 = pot.r0();
    let seed = seed_level(coeffs, gamma, r0, n)?;
    let half_width = (T::PI() / (T::lit(2.0) * beta.beta)).exp();
    let (lo, hi) = (seed / half_width, seed * half_width);
    let det = |lambda: T| -> Result<T> {
        let inner = integrate_inner_with_slope(pot, lambda, options.inner_slope, options.ode_tol)?;
        matching_determinant(&inner, beta, r0)
    };
    let failure = || Error::BracketFailure { n, lo: lo.as_f64(), hi: hi.as_f64() };
    let lambda = brent(det, lo, hi, T::zero(), options.root_tol, 400)?.ok_or_else(failure)?;
    let eta = beta.beta * (lambda / seed).ln();
    if !(eta.abs() < T::PI() / T::lit(2.0)) {
        return Err(failure());
    }
    let inner = integrate_inner_with_slope(pot, lambda, options.inner_slope, options.ode_tol)?;
    let residual = matching_determinant(&inner, beta, r0)? / coeffs.a.hypot(coeffs.b);
    let (a_n, b_n) = normalisation(pot, beta, &inner, options)?;
    Ok(SpectrumLevel {
        n,
        seed,
        lambda_n: lambda,
        eta_n: eta,
        energy: -lambda * lambda / mu,
        a_n,
        b_n,
        residual,
        inner,
    })
}

/// Interior amplitude per unit exterior amplitude. Of the two equivalent
/// rows of the matching system the better conditioned one is used: the
/// value row when `|w(r0)| ≥ r0·|w'(r0)|`, the derivative row otherwise.
fn interior_amplitude<T: Real>(inner: &InnerSolution<T>, beta: &BetaParam<T>, r0: T) -> Result<T> {
    let z = inner.lambda * r0;
    let k = macdonald(beta.beta, z)?;
    let sqrt_r0 = r0.sqrt();
    if inner.w_r0.abs() >= r0 * inner.dw_r0.abs() {
        Ok(sqrt_r0 * k.value / inner.w_r0)
    } else {
        Ok((k.value + T::lit(2.0) * z * k.derivative) / (T::lit(2.0) * sqrt_r0 * inner.dw_r0))
    }
}

/// `(Aₙ, Bₙ)` with `∫₀^∞ u² dr = 1` and `Bₙ > 0`.
fn normalisation<T: Real, P: RadialPotential<T>>(
    pot: &P,
    beta: &BetaParam<T>,
    inner: &InnerSolution<T>,
    options: &SpectrumOptions<T>,
) -> Result<(T, T)> {
    let r0 = pot.r0();
    let rule = GaussLegendre::<T>::new(12);
    let panels = options.inner_panels.max(1);
    let width = r0 / T::from_usize_lossy(panels);
    let mut nodes = Vec::with_capacity(panels * rule.nodes.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for p in 0..panels {
        let a = width * T::from_usize_lossy(p);
        for (x, w) in rule.mapped(a, a + width) {
            nodes.push(x);
            weights.push(w);
        }
    }
    let (samples, _) = integrate_inner_samples(pot, inner.lambda, inner.slope, inner.tol, &nodes)?;
    let interior: T = samples.iter().zip(&weights).map(|(&(w, _), &wt)| wt * w * w).sum();

    let exterior = exterior_norm(beta.beta, inner.lambda * r0, &rule)? / (inner.lambda * inner.lambda);
    let amp = interior_amplitude(inner, beta, r0)?;
    let norm_sq = amp * amp * interior + exterior;
    let b = T::one() / norm_sq.sqrt();
    Ok((amp * b, b))
}

/// `∫_{z0}^∞ z·K_{iβ}(z)² dz`, on logarithmic panels below `z = 1` (where
/// `K` oscillates in `ln z`) and unit panels above it.
fn exterior_norm<T: Real>(beta: T, z0: T, rule: &GaussLegendre<T>) -> Result<T> {
    let one = T::one();
    let mut total = T::zero();
    if z0 < one {
        let s0 = z0.ln();
        let width = T::lit(0.5).min(T::PI() / (T::lit(4.0) * beta.max(T::lit(1e-3))));
        let count = ((-s0) / width).ceil().to_usize().unwrap_or(1).max(1);
        let step = -s0 / T::from_usize_lossy(count);
        for p in 0..count {
            let a = s0 + step * T::from_usize_lossy(p);
            for (s, w) in rule.mapped(a, a + step) {
                let z = s.exp();
                let k = macdonald(beta, z)?.value;
                total = total + w * z * z * k * k;
            }
        }
    }
    let start = z0.max(one);
    let tail = T::lit(40.0);
    let count = 40;
    let step = tail / T::from_usize_lossy(count);
    for p in 0..count {
        let a = start + step * T::from_usize_lossy(p);
        for (z, w) in rule.mapped(a, a + step) {
            let k = match macdonald(beta, z) {
                Ok(k) => k.value,
                Err(Error::Underflow { .. }) => T::zero(),
                Err(e) => return Err(e),
            };
            total = total + w * z * k * k;
        }
    }
    Ok(total)
}

/// Value and slope of `uₙ` at `rs`.
pub fn slow_eigenfunction_samples<T: Real, P: RadialPotential<T>>(
    level: &SpectrumLevel<T>,
    pot: &P,
    beta: &BetaParam<T>,
    rs: &[T],
) -> Result<Vec<(T, T)>> {
    let r0 = pot.r0();
    let mut interior: Vec<(usize, T)> = rs.iter().copied().enumerate().filter(|&(_, r)| r <= r0).collect();
    interior.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite radii"));
    let points: Vec<T> = interior.iter().map(|&(_, r)| r).collect();
    let inner = &level.inner;
    let (samples, _) = integrate_inner_samples(pot, inner.lambda, inner.slope, inner.tol, &points)?;

    let mut out = vec![(T::zero(), T::zero()); rs.len()];
    for (&(i, _), &(w, dw)) in interior.iter().zip(&samples) {
        out[i] = (level.a_n * w, level.a_n * dw);
    }
    let lambda = level.lambda_n;
    for (i, &r) in rs.iter().enumerate() {
        if r <= r0 {
            continue;
        }
        let k = match macdonald(beta.beta, lambda * r) {
            Ok(k) => k,
            Err(Error::Underflow { .. }) => continue,
            Err(e) => return Err(e),
        };
        let sr = r.sqrt();
        let value = level.b_n * sr * k.value;
        let slope = level.b_n * (k.value / (T::lit(2.0) * sr) + lambda * sr * k.derivative);
        out[i] = (value, slope);
    }
    Ok(out)
}

/// `uₙ(r)`: `Aₙ·w_{λₙ}(r)` inside the cutoff, `Bₙ·√r·K_{iβ}(λₙr)` outside.
pub fn slow_eigenfunction<T: Real, P: RadialPotential<T>>(
    level: &SpectrumLevel<T>,
    pot: &P,
    beta: &BetaParam<T>,
    r: T,
) -> Result<T> {
    if !(r >= T::zero()) {
        return Err(Error::Domain { what: "slow_eigenfunction radius", value: r.as_f64() });
    }
    slow_eigenfunction_samples(level, pot, beta, &[r]).map(|v| v[0].0)
}

/// Jumps of `u` and `u'` across `r0`, relative to the larger one-sided value.
pub fn matching_jump<T: Real, P: RadialPotential<T>>(
    level: &SpectrumLevel<T>,
    pot: &P,
    beta: &BetaParam<T>,
) -> Result<(T, T)> {
    let r0 = pot.r0();
    let inner = &level.inner;
    let (u_in, du_in) = (level.a_n * inner.w_r0, level.a_n * inner.dw_r0);
    let k = macdonald(beta.beta, level.lambda_n * r0)?;
    let sr = r0.sqrt();
    let u_out = level.b_n * sr * k.value;
    let du_out = level.b_n * (k.value / (T::lit(2.0) * sr) + level.lambda_n * sr * k.derivative);
    let rel = |x: T, y: T| {
        let s = x.abs().max(y.abs());
        if s == T::zero() {
            T::zero()
        } else {
            (x - y).abs() / s
        }
    };
    Ok((rel(u_in, u_out), rel(du_in, du_out)))
}
