use crate::error::{Error, Result};
use crate::real::Real;

/// Principal branch `W₀` of the Lambert function, the inverse of `w ↦ w·eʷ`
/// on `w ≥ -1`.
///
/// Arguments up to a few units of roundoff below `-1/e` are clamped onto the
/// branch point. The iteration is Halley's method; near the branch point the
/// start comes from the square-root series in `p = √(2(ex+1))`, and for large
/// arguments Halley runs on the logarithmic form `w + ln w = ln x`, which
/// stays well conditioned when `eʷ` is huge.
pub fn lambert_w0<T: Real>(x: T) -> Result<T> {
    let e = T::E();
    let branch = -T::one() / e;
    let eps = T::epsilon();
    if x.is_nan() || x < branch - T::lit(4.0) * eps * branch.abs() {
        return Err(Error::Domain { what: "lambert_w0", value: x.as_f64() });
    }
    if x.is_infinite() {
        return Ok(x);
    }
    if x <= branch {
        return Ok(-T::one());
    }
    if x == T::zero() {
        return Ok(T::zero());
    }

    let one = T::one();
    let two = T::lit(2.0);
    let max_iter = 32;

    if x > e {
        // w + ln w - ln x = 0
        let lx = x.ln();
        let llx = lx.ln();
        let mut w = lx - llx + llx / lx;
        for _ in 0..max_iter {
            let f = w + w.ln() - lx;
            let d1 = one + one / w;
            let d2 = -one / (w * w);
            let step = f / (d1 - f * d2 / (two * d1));
            w = w - step;
            if step.abs() <= eps * w.abs() {
                break;
            }
        }
        return Ok(w);
    }

    let mut w = if x < T::lit(-0.32) {
        let p = (two * (e * x + one)).max(T::zero()).sqrt();
        -one + p - p * p / T::lit(3.0) + T::lit(11.0 / 72.0) * p * p * p
    } else {
        // Winitzki's global approximation
        let l = x.ln_1p();
        l * (one - (one + l).ln() / (two + l))
    };

    for _ in 0..max_iter {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        if wp1 <= T::zero() {
            break;
        }
        let denom = ew * wp1 - (w + two) * f / (two * wp1);
        let step = f / denom;
        let next = (w - step).max(-one);
        let done = (next - w).abs() <= eps * T::lit(2.0) * w.abs().max(T::min_positive_value());
        w = next;
        if done || f == T::zero() {
            break;
        }
    }
    Ok(w)
}
