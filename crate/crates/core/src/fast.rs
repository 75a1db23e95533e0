//! Fast (light-particle) dynamics at frozen boson separation.
//!
//! For separation `y` the light particle sees two point interactions at
//! `±y/2` whose boundary condition carries the cutoff profile `θ(|y|)`. The
//! single bound state has energy
//!
//! `E(y) = -(W(e^{θ(y)}) - θ(y))² / (ν y²)`,
//!
//! and `v(r) = μ·E(r)` is the effective potential of the slow motion.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::specialfn::lambert_w0;

/// Shape of the cutoff profile as a function of `ρ = r/r0`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind<T> {
    /// `exp(1 - 1/(1-ρ²))`, C^∞ with all derivatives vanishing at `ρ = 1`.
    Bump,
    /// `1 - (10ρ³ - 15ρ⁴ + 6ρ⁵)`, C² across `ρ = 1`.
    Quintic,
    /// Cubic Hermite interpolation of samples on a uniform `ρ` grid.
    Table(ProfileTable<T>),
}

/// Uniformly sampled profile on `ρ ∈ [0, 1]` with `θ(0) = 1`, `θ(1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable<T> {
    values: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Real> ProfileTable<T> {
    /// Slopes are centred differences inside, second-order one-sided at
    /// `ρ = 0`, and zero at `ρ = 1` so the profile joins `θ ≡ 0` in C¹.
    pub fn new(values: Vec<T>) -> Result<Self> {
        let n = values.len();
        if n < 3 {
            return Err(Error::InvalidParameter("profile table needs at least 3 samples".into()));
        }
        if values[0] != T::one() || values[n - 1] != T::zero() {
            return Err(Error::InvalidParameter("profile table must start at θ(0) = 1 and end at θ(r0) = 0".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("profile table has non-finite samples".into()));
        }
        let dr = T::one() / T::from_usize_lossy(n - 1);
        let two = T::lit(2.0);
        let mut slopes = vec![T::zero(); n];
        slopes[0] = (T::lit(-3.0) * values[0] + T::lit(4.0) * values[1] - values[2]) / (two * dr);
        for i in 1..n - 1 {
            slopes[i] = (values[i + 1] - values[i - 1]) / (two * dr);
        }
        Ok(Self { values, slopes })
    }

    fn eval(&self, rho: T) -> (T, T) {
        let n = self.values.len();
        let dr = T::one() / T::from_usize_lossy(n - 1);
        let pos = rho / dr;
        let i = pos.floor().to_usize().unwrap_or(0).min(n - 2);
        let t = pos - T::from_usize_lossy(i);
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * dr, self.slopes[i + 1] * dr);
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        let value = h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
        let d00 = T::lit(6.0) * (t2 - t);
        let d10 = three * t2 - T::lit(4.0) * t + T::one();
        let d11 = three * t2 - two * t;
        let slope = (d00 * p0 + d10 * m0 - d00 * p1 + d11 * m1) / dr;
        (value, slope)
    }
}

/// Cutoff function `θ` with `θ(0) = 1` and `θ(r) = 0` for `r ≥ r0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffProfile<T> {
    pub kind: ProfileKind<T>,
    r0: T,
}

impl<T: Real> CutoffProfile<T> {
    pub fn new(kind: ProfileKind<T>, r0: T) -> Result<Self> {
        if !(r0 > T::zero()) || !r0.is_finite() {
            return Err(Error::InvalidParameter(format!("cutoff radius r0 = {r0} must be positive")));
        }
        Ok(Self { kind, r0 })
    }

    pub fn bump(r0: T) -> Result<Self> {
        Self::new(ProfileKind::Bump, r0)
    }

    pub fn quintic(r0: T) -> Result<Self> {
        Self::new(ProfileKind::Quintic, r0)
    }

    pub fn table(r0: T, values: Vec<T>) -> Result<Self> {
        Self::new(ProfileKind::Table(ProfileTable::new(values)?), r0)
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    /// Same shape, lengths multiplied by `sigma`.
    pub fn rescaled(&self, sigma: T) -> Result<Self> {
        Self::new(self.kind.clone(), self.r0 * sigma)
    }

    pub fn theta(&self, r: T) -> T {
        self.eval(r).0
    }

    pub fn theta_prime(&self, r: T) -> T {
        self.eval(r).2
    }

    /// `1 - θ(r)` without cancellation near the origin.
    pub fn one_minus_theta(&self, r: T) -> T {
        self.eval(r).1
    }

    /// Power `k` of the leading term `1 - θ ∝ ρᵏ` at the origin.
    pub fn origin_order(&self) -> u32 {
        match &self.kind {
            ProfileKind::Bump => 2,
            ProfileKind::Quintic => 3,
            ProfileKind::Table(table) => {
                if table.slopes[0] == T::zero() {
                    2
                } else {
                    1
                }
            }
        }
    }

    /// `ξ/r` with `g'(ξ) = g(r)/r` to leading order, `k^{-1/(k-1)}`.
    fn mean_value_fraction(&self) -> T {
        match self.origin_order() {
            1 => T::lit(0.5),
            k => T::from_usize_lossy(k as usize).powf(-T::one() / T::from_usize_lossy(k as usize - 1)),
        }
    }

    /// `(θ, 1 - θ, θ')` at `r`.
    fn eval(&self, r: T) -> (T, T, T) {
        let zero = T::zero();
        let one = T::one();
        let rho = r.max(zero) / self.r0;
        if rho >= one {
            return (zero, one, zero);
        }
        match &self.kind {
            ProfileKind::Bump => {
                let den = one - rho * rho;
                let q = rho * rho / den;
                let theta = (-q).exp();
                let dq = T::lit(2.0) * rho / (den * den);
                (theta, -(-q).exp_m1(), -theta * dq / self.r0)
            }
            ProfileKind::Quintic => {
                let t = rho;
                let step = t * t * t * (T::lit(10.0) - T::lit(15.0) * t + T::lit(6.0) * t * t);
                let u = one - t;
                let dstep = T::lit(30.0) * t * t * u * u;
                (one - step, step, -dstep / self.r0)
            }
            ProfileKind::Table(table) => {
                let (theta, slope) = table.eval(rho);
                (theta, one - theta, slope / self.r0)
            }
        }
    }
}

/// Evaluates the cutoff profile at `r ≥ 0`.
pub fn theta_eval<T: Real>(profile: &CutoffProfile<T>, r: T) -> T {
    profile.theta(r)
}

/// Physical configuration: boson mass `M`, light mass `m`, the reduced
/// masses `μ = M`, `ν = 4Mm/(2M+m)` (ħ = 1), and the cutoff profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    masses: Option<(T, T)>,
    mu: T,
    nu: T,
    pub profile: CutoffProfile<T>,
}

impl<T: Real> ModelParams<T> {
    pub fn from_masses(big_m: T, small_m: T, profile: CutoffProfile<T>) -> Result<Self> {
        for (name, v) in [("M", big_m), ("m", small_m)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("mass {name} = {v} must be positive")));
            }
        }
        let nu = T::lit(4.0) * big_m * small_m / (T::lit(2.0) * big_m + small_m);
        Ok(Self { masses: Some((big_m, small_m)), mu: big_m, nu, profile })
    }

    /// Light mass fixed to one, `M = mass_ratio`.
    pub fn from_mass_ratio(mass_ratio: T, profile: CutoffProfile<T>) -> Result<Self> {
        Self::from_masses(mass_ratio, T::one(), profile)
    }

    pub fn from_mu_nu(mu: T, nu: T, profile: CutoffProfile<T>) -> Result<Self> {
        for (name, v) in [("μ", mu), ("ν", nu)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self { masses: None, mu, nu, profile })
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn masses(&self) -> Option<(T, T)> {
        self.masses
    }

    pub fn mu_over_nu(&self) -> T {
        self.mu / self.nu
    }

    pub fn r0(&self) -> T {
        self.profile.r0()
    }

    /// The mass ratio `M/m` that gives this `μ/ν`, from `μ/ν = (2M+m)/(4m)`.
    pub fn equivalent_mass_ratio(&self) -> T {
        match self.masses {
            Some((big, small)) => big / small,
            None => (T::lit(4.0) * self.mu_over_nu() - T::one()) / T::lit(2.0),
        }
    }

    pub fn with_profile(&self, profile: CutoffProfile<T>) -> Self {
        Self { profile, ..self.clone() }
    }
}

/// Lambert data at one separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastSolution<T> {
    pub theta: T,
    /// `s = W(e^θ)`, the root of `s·eˢ = e^θ`.
    pub s: T,
    /// `g = s - θ = √(ν·(-E))·y`.
    pub gap: T,
    pub energy: T,
}

/// `(s, g)` with `s = W(e^θ)` and `g = s - θ = -ln s`.
///
/// Near the origin `θ → 1` and `g → 0`, so the difference is formed from
/// `s = 1 + ω` with `ω + ln(1+ω) = -(1-θ)`, which keeps full relative
/// accuracy in `g`.
fn lambert_gap<T: Real>(profile: &CutoffProfile<T>, r: T) -> Result<(T, T, T)> {
    let theta = profile.theta(r);
    let delta = profile.one_minus_theta(r);
    if delta == T::zero() {
        return Ok((theta, T::one(), T::zero()));
    }
    if delta < T::lit(0.25) {
        let mut w = -delta / T::lit(2.0) - delta * delta / T::lit(16.0);
        for _ in 0..30 {
            let f = w + w.ln_1p() + delta;
            let df = T::one() + T::one() / (T::one() + w);
            let step = f / df;
            w = w - step;
            if step.abs() <= T::epsilon() * w.abs() {
                break;
            }
        }
        return Ok((theta, T::one() + w, -w.ln_1p()));
    }
    let s = lambert_w0(theta.exp())?;
    Ok((theta, s, s - theta))
}

/// Fast eigenvalue with the intermediate Lambert quantities.
pub fn fast_solution<T: Real>(params: &ModelParams<T>, y: T) -> Result<FastSolution<T>> {
    if !(y > T::zero()) || !y.is_finite() {
        return Err(Error::Domain { what: "fast_eigenvalue separation", value: y.as_f64() });
    }
    let (theta, s, gap) = lambert_gap(&params.profile, y)?;
    let k = gap / y;
    Ok(FastSolution { theta, s, gap, energy: -k * k / params.nu })
}

/// The single negative eigenvalue `E(y)` of the light-particle Hamiltonian at
/// boson separation `y > 0`.
pub fn fast_eigenvalue<T: Real>(params: &ModelParams<T>, y: T) -> Result<T> {
    fast_solution(params, y).map(|s| s.energy)
}

/// Unnormalised fast eigenfunction at `x` for centres `±y/2` on the z axis:
/// `G(x + y/2) + G(x - y/2)` with `G(x) = e^{-√(λν)|x|}/|x|`, `λ = -E(y)`.
pub fn fast_eigenfunction<T: Real>(params: &ModelParams<T>, y: T, x: [T; 3]) -> Result<T> {
    let lambda = -fast_eigenvalue(params, y)?;
    let kappa = (lambda * params.nu).sqrt();
    let half = y / T::lit(2.0);
    let mut total = T::zero();
    for shift in [half, -half] {
        let d = (x[0] * x[0] + x[1] * x[1] + (x[2] + shift) * (x[2] + shift)).sqrt();
        if d == T::zero() {
            return Err(Error::Singularity);
        }
        total = total + (-kappa * d).exp() / d;
    }
    Ok(total)
}

/// A radial potential on `[0, ∞)` whose interior region is `[0, r0]`.
pub trait RadialPotential<T: Real>: Sync {
    fn r0(&self) -> T;

    fn eval(&self, r: T) -> T;

    /// Lower bound of the potential, sampled on the interior region.
    fn min_value(&self) -> T {
        let n = 4096;
        let r0 = self.r0();
        (0..=n).map(|i| self.eval(r0 * T::from_usize_lossy(i) / T::from_usize_lossy(n))).fold(T::infinity(), T::min)
    }
}

/// `v(r) = μ·E(r)` with a guarded evaluation near `r = 0`, where the closed
/// form is `0/0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePotential<T> {
    pub params: ModelParams<T>,
    pub epsilon_guard: T,
    w1: T,
}

/// Builds the slow-motion potential; the guard radius is `1e-6·r0`.
pub fn effective_potential<T: Real>(params: &ModelParams<T>) -> EffectivePotential<T> {
    let w1 = lambert_w0(T::one()).expect("W(1) is in the domain");
    EffectivePotential { epsilon_guard: T::lit(1e-6) * params.r0(), params: params.clone(), w1 }
}

impl<T: Real> EffectivePotential<T> {
    /// `(μ/ν)·W(1)²`, so that `v(r) = -coefficient/r²` for `r ≥ r0`.
    pub fn exterior_coefficient(&self) -> T {
        self.params.mu_over_nu() * self.w1 * self.w1
    }

    pub fn w1(&self) -> T {
        self.w1
    }

    /// Unguarded `μ·E(r)` for `r > 0`.
    pub fn eval_direct(&self, r: T) -> Result<T> {
        Ok(self.params.mu * fast_eigenvalue(&self.params, r)?)
    }

    /// Short-distance form `-(μ/ν)·g'(ξ)²` with `g'(ξ) = -θ'(ξ)/(1 + W(e^{θ(ξ)}))`.
    ///
    /// `ξ` is the mean-value point of `g(r)/r` for the leading power of
    /// `1 - θ` at the origin: `r/2` for `ρ²`, `r/√3` for `ρ³`.
    pub fn eval_guarded(&self, r: T) -> T {
        let profile = &self.params.profile;
        let xi = r.max(T::zero()) * profile.mean_value_fraction();
        let (_, s, _) = lambert_gap(profile, xi).expect("θ ∈ [0, 1] keeps W in its domain");
        let dg = -profile.theta_prime(xi) / (T::one() + s);
        -self.params.mu_over_nu() * dg * dg
    }
}

impl<T: Real> RadialPotential<T> for EffectivePotential<T> {
    fn r0(&self) -> T {
        self.params.r0()
    }

    fn eval(&self, r: T) -> T {
        if r >= self.params.r0() {
            return -self.exterior_coefficient() / (r * r);
        }
        if r < self.epsilon_guard {
            return self.eval_guarded(r);
        }
        self.eval_direct(r).expect("r > 0 on this branch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> ModelParams<f64> {
        ModelParams::from_mass_ratio(50.0, CutoffProfile::bump(1.0).unwrap()).unwrap()
    }

    #[test]
    fn bump_profile_values() {
        let p = CutoffProfile::bump(1.0_f64).unwrap();
        assert_eq!(p.theta(0.0), 1.0);
        assert_eq!(p.theta(1.0), 0.0);
        assert_eq!(p.theta(2.0), 0.0);
        assert_relative_eq!(p.theta(0.5_f64.sqrt()), (-1.0_f64).exp(), max_relative = 1e-15);
        assert_eq!(p.theta_prime(0.0), 0.0);
    }

    #[test]
    fn quintic_profile_values() {
        let p = CutoffProfile::quintic(2.0_f64).unwrap();
        assert_eq!(p.theta(0.0), 1.0);
        assert_eq!(p.theta(2.0), 0.0);
        assert_relative_eq!(p.theta(1.0), 0.5, epsilon = 1e-15);
        assert!(p.theta_prime(1.999_999).abs() < 1e-9);
    }

    #[test]
    fn table_profile_interpolates() {
        let n = 201;
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
            })
            .collect();
        let tab = CutoffProfile::table(1.0, values).unwrap();
        let q = CutoffProfile::quintic(1.0).unwrap();
        for i in 0..50 {
            let r = i as f64 / 50.0 + 0.0037;
            assert!((tab.theta(r) - q.theta(r)).abs() < 1e-6);
        }
        assert!(CutoffProfile::table(1.0, vec![1.0, 0.5]).is_err());
        assert!(CutoffProfile::table(1.0, vec![0.9, 0.5, 0.0]).is_err());
    }

    #[test]
    fn reduced_masses() {
        let p = params();
        assert_eq!(p.mu(), 50.0);
        assert_relative_eq!(p.nu(), 200.0 / 101.0, max_relative = 1e-15);
        assert_relative_eq!(p.mu_over_nu(), 25.25, max_relative = 1e-15);
        assert!(ModelParams::from_mu_nu(-1.0, 1.0, CutoffProfile::bump(1.0).unwrap()).is_err());
    }

    #[test]
    fn exterior_eigenvalue_closed_form() {
        let prof = CutoffProfile::bump(1.0).unwrap();
        let p = ModelParams::from_mu_nu(1.0, 1.0, prof).unwrap();
        let w1 = 0.567_143_290_409_783_8_f64;
        for &y in &[1.0, 1.5, 7.0] {
            assert_relative_eq!(fast_eigenvalue(&p, y).unwrap(), -w1 * w1 / (y * y), max_relative = 1e-15);
        }
        assert!(matches!(fast_eigenvalue(&p, 0.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn short_distance_limit_is_zero_for_bump() {
        let p = params();
        let pot = effective_potential(&p);
        assert_eq!(pot.eval(0.0), 0.0);
        assert!(pot.eval(1e-4).abs() < 1e-6);
    }

    #[test]
    fn fast_eigenfunction_centres() {
        let p = params();
        assert_eq!(fast_eigenfunction(&p, 1.0, [0.0, 0.0, 0.5]), Err(Error::Singularity));
        let near = fast_eigenfunction(&p, 1.0, [0.0, 0.0, 0.5 + 1e-9]).unwrap();
        assert_relative_eq!(near * 1e-9, 1.0, max_relative = 1e-6);
    }
}
