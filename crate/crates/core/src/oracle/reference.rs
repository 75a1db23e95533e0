use crate::error::{Error, Result};
use crate::real::Real;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        k = k + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            g = g + T::lit(WG[j / 2]) * pair;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Reference `K_{iβ}(x) = ∫₀^∞ e^{-x cosh t} cos(βt) dt` by adaptive
/// 7/15-point Gauss–Kronrod: every panel whose error estimate exceeds its
/// share of `abs_tol` is split in two until the total estimate falls below
/// `abs_tol`.
pub fn quadrature_reference_k<T: Real>(beta: T, x: T, abs_tol: T) -> Result<T> {
    if !(x > T::lit(1e-8)) {
        return Err(Error::Domain { what: "quadrature_reference_k argument", value: x.as_f64() });
    }
    if !(beta >= T::zero()) || !(abs_tol > T::zero()) {
        return Err(Error::InvalidParameter("reference quadrature needs β ≥ 0 and abs_tol > 0".into()));
    }
    let cut = (T::lit(1e3) / abs_tol).ln();
    let t_max = (T::one() + cut / x).acosh();
    let f = |t: T| (-x * t.cosh()).exp() * (beta * t).cos();

    let mut panels: Vec<(T, T)> = (0..8)
        .map(|i| {
            let w = t_max / T::lit(8.0);
            (w * T::from_usize_lossy(i), w * T::from_usize_lossy(i + 1))
        })
        .collect();
    const PANEL_LIMIT: usize = 1 << 16;
    loop {
        let estimates: Vec<(T, T)> = panels.iter().map(|&(a, b)| kronrod(&f, a, b)).collect();
        let total: T = estimates.iter().map(|e| e.0).sum();
        let error: T = estimates.iter().map(|e| e.1).sum();
        if error <= abs_tol {
            return Ok(total);
        }
        let mut next = Vec::with_capacity(panels.len() * 2);
        for (&(a, b), &(_, err)) in panels.iter().zip(&estimates) {
            if err > abs_tol * (b - a) / t_max {
                let m = (a + b) / T::lit(2.0);
                next.push((a, m));
                next.push((m, b));
            } else {
                next.push((a, b));
            }
        }
        if next.len() > PANEL_LIMIT {
            return Err(Error::NonConvergence { what: "reference Macdonald quadrature" });
        }
        panels = next;
    }
}

/// Lambert `W₀` by bisection of `w·eʷ - x` on `[-1, max(1, ln(1+x)) + 1]`
/// down to a bracket width of `1e-13`.
pub fn lambert_reference<T: Real>(x: T) -> Result<T> {
    let branch = -(-T::one()).exp();
    if !(x >= branch - T::epsilon()) {
        return Err(Error::Domain { what: "lambert_reference", value: x.as_f64() });
    }
    let mut lo = -T::one();
    let mut hi = T::one().max(x.max(T::zero()).ln_1p()) + T::one();
    let width = T::lit(1e-13).max(T::epsilon() * T::lit(4.0));
    for _ in 0..400 {
        if hi - lo <= width {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if mid * mid.exp() < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}
