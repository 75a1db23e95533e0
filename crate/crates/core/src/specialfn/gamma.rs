use crate::real::Real;

/// Phase and squared modulus of `Γ(1+iβ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPhase<T> {
    pub beta: T,
    /// `ϑ_β = arg Γ(1+iβ)`, reduced to `(-π, π]`.
    pub theta_beta: T,
    /// `|Γ(1+iβ)|² = πβ / sinh(πβ)`.
    pub abs_sq: T,
}

/// Evaluates `arg Γ(1+iβ)` from the product formula for the Gamma function,
///
/// `arg Γ(1+iβ) = -γβ + Σ_{k≥1} (β/k - arctan(β/k))`,
///
/// summing the first `N` terms directly (smallest first) and closing the
/// remainder with an Euler–Maclaurin tail whose integral part is exact.
/// The modulus uses the reflection identity `|Γ(1+iβ)|² = πβ/sinh(πβ)`.
pub fn gamma_phase<T: Real>(beta: T) -> GammaPhase<T> {
    let zero = T::zero();
    if beta == zero {
        return GammaPhase { beta, theta_beta: zero, abs_sq: T::one() };
    }
    let pi = T::PI();
    let x = pi * beta;
    let abs_sq = if x < T::lit(1e-4) {
        // πβ/sinh(πβ) = 1 - x²/6 + 7x⁴/360
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + T::lit(7.0 / 360.0) * x2 * x2
    } else {
        x / x.sinh()
    };

    let n = (64.0 * beta.as_f64()).ceil().clamp(256.0, 4.0e6) as usize;
    let term = |k: T| beta / k - (beta / k).atan();
    let mut head = zero;
    for k in (1..n).rev() {
        head = head + term(T::from_usize_lossy(k));
    }
    let big_n = T::from_usize_lossy(n);
    let u = beta / big_n;
    let integral = big_n * (u.atan() - u) + beta / T::lit(2.0) * (u * u).ln_1p();
    let d1 = -beta * beta * beta / (big_n * big_n * (big_n * big_n + beta * beta));
    let tail = integral + term(big_n) / T::lit(2.0) - d1 / T::lit(12.0);

    let raw = -T::euler_gamma() * beta + head + tail;
    GammaPhase { beta, theta_beta: wrap_phase(raw), abs_sq }
}

/// Reduces an angle to `(-π, π]`.
pub(crate) fn wrap_phase<T: Real>(angle: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut a = angle - two_pi * ((angle + pi) / two_pi).floor();
    // a ∈ [-π, π)
    if a <= -pi {
        a = a + two_pi;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_zero_is_gamma_one() {
        let g = gamma_phase(0.0_f64);
        assert_eq!(g.theta_beta, 0.0);
        assert_eq!(g.abs_sq, 1.0);
    }

    #[test]
    fn wraps_into_half_open_interval() {
        let pi = std::f64::consts::PI;
        assert!((wrap_phase(pi) - pi).abs() < 1e-15);
        assert!((wrap_phase(-pi) - pi).abs() < 1e-15);
        assert!((wrap_phase(3.0 * pi + 0.1) - (-pi + 0.1)).abs() < 1e-12);
        assert!((wrap_phase(-0.2_f64) + 0.2).abs() < 1e-16);
    }

    #[test]
    fn odd_in_beta_for_small_values() {
        // arg Γ(1+iβ) ≈ -γβ for small β
        let b = 1e-6_f64;
        let g = gamma_phase(b);
        assert!((g.theta_beta + 0.577_215_664_901_532_9 * b).abs() < 1e-17);
        assert!((g.abs_sq - 1.0).abs() < 1e-10);
    }
}
