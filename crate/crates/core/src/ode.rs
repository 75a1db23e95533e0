//! Adaptive Dormand–Prince 5(4) integration for small fixed-size systems.

use crate::error::{Error, Result};
use crate::real::Real;

/// Error weights: component `i` is accepted when its local error estimate is
/// below `atol[i] + rtol·|y_i|`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<T, const N: usize> {
    pub rtol: T,
    pub atol: [T; N],
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// States at the requested output abscissae plus the end point.
#[derive(Debug, Clone)]
pub struct Trajectory<T, const N: usize> {
    pub outputs: Vec<[T; N]>,
    pub end: [T; N],
    pub stats: OdeStats,
}

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince<T> {
    pub max_steps: usize,
    pub safety: T,
}

impl<T: Real> Default for DormandPrince<T> {
    fn default() -> Self {
        Self { max_steps: 200_000, safety: T::lit(0.9) }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

impl<T: Real> DormandPrince<T> {
    /// Integrates `y' = f(t, y)` from `t0` to `t_end > t0`, landing exactly on
    /// each abscissa in `outputs` (which must be sorted and lie in
    /// `[t0, t_end]`).
    pub fn integrate<const N: usize, F>(
        &self,
        mut f: F,
        t0: T,
        y0: [T; N],
        t_end: T,
        tol: Tolerances<T, N>,
        outputs: &[T],
    ) -> Result<Trajectory<T, N>>
    where
        F: FnMut(T, &[T; N]) -> [T; N],
    {
        let a: [[T; 6]; 7] = A.map(|row| row.map(T::lit));
        let c: [T; 7] = C.map(T::lit);
        let e: [T; 7] = E.map(T::lit);
        let mut stats = OdeStats::default();
        let mut out = Vec::with_capacity(outputs.len());
        let mut next_out = 0;
        while next_out < outputs.len() && outputs[next_out] <= t0 {
            out.push(y0);
            next_out += 1;
        }

        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        stats.evaluations += 1;
        let span = t_end - t0;
        if span <= T::zero() {
            return Ok(Trajectory { outputs: out, end: y, stats });
        }
        let mut h = self.initial_step(&mut f, t, &y, &k1, span, &tol, &mut stats);
        let fifth = T::lit(0.2);

        for _ in 0..self.max_steps {
            let target = if next_out < outputs.len() { outputs[next_out].min(t_end) } else { t_end };
            let mut step = h.min(target - t);
            let lands = step >= target - t;
            if lands {
                step = target - t;
            }
            if step <= T::epsilon() * T::lit(16.0) * t.abs().max(span) {
                return Err(Error::StepSizeUnderflow { r: t.as_f64() });
            }

            let mut k = [[T::zero(); N]; 7];
            k[0] = k1;
            for s in 1..7 {
                let mut ys = y;
                for (i, ysi) in ys.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for j in 0..s {
                        acc = acc + a[s][j] * k[j][i];
                    }
                    *ysi = *ysi + step * acc;
                }
                if s == 6 {
                    // FSAL: stage 7 is evaluated at the new solution
                    k[6] = f(t + step, &ys);
                } else {
                    k[s] = f(t + c[s] * step, &ys);
                }
            }
            stats.evaluations += 6;

            let mut y_new = y;
            for (i, yi) in y_new.iter_mut().enumerate() {
                let mut acc = T::zero();
                for j in 0..6 {
                    acc = acc + a[6][j] * k[j][i];
                }
                *yi = *yi + step * acc;
            }
            let mut err2 = T::zero();
            for i in 0..N {
                let mut est = T::zero();
                for j in 0..7 {
                    est = est + e[j] * k[j][i];
                }
                let sc = tol.atol[i] + tol.rtol * y[i].abs().max(y_new[i].abs());
                let r = step * est / sc;
                err2 = err2 + r * r;
            }
            let err = (err2 / T::from_usize_lossy(N)).sqrt();

            if err <= T::one() {
                stats.accepted += 1;
                t = if lands { target } else { t + step };
                y = y_new;
                k1 = k[6];
                let grow = if err == T::zero() {
                    T::lit(10.0)
                } else {
                    (self.safety * err.powf(-fifth)).min(T::lit(10.0)).max(T::lit(0.2))
                };
                // a step clipped to land on an output keeps the unclipped proposal
                h = if lands { h.max(step * grow) } else { step * grow };
                if lands {
                    while next_out < outputs.len() && outputs[next_out] <= t {
                        out.push(y);
                        next_out += 1;
                    }
                    if t >= t_end {
                        return Ok(Trajectory { outputs: out, end: y, stats });
                    }
                }
            } else {
                stats.rejected += 1;
                let shrink = (self.safety * err.powf(-fifth)).max(T::lit(0.2)).min(T::one());
                h = step * shrink;
            }
        }
        Err(Error::NonConvergence { what: "Dormand–Prince step budget" })
    }

    #[allow(clippy::too_many_arguments)]
    fn initial_step<const N: usize, F>(
        &self,
        f: &mut F,
        t: T,
        y: &[T; N],
        k1: &[T; N],
        span: T,
        tol: &Tolerances<T, N>,
        stats: &mut OdeStats,
    ) -> T
    where
        F: FnMut(T, &[T; N]) -> [T; N],
    {
        let nf = T::from_usize_lossy(N);
        let norm = |v: &[T; N]| {
            let s: T = (0..N)
                .map(|i| {
                    let sc = tol.atol[i] + tol.rtol * y[i].abs();
                    let r = v[i] / sc;
                    r * r
                })
                .sum();
            (s / nf).sqrt()
        };
        let d0 = norm(y);
        let d1 = norm(k1);
        let small = T::lit(1e-5);
        let mut h0 = if d0 < small || d1 < small { T::lit(1e-6) * span } else { T::lit(0.01) * d0 / d1 };
        h0 = h0.min(span);
        let mut y1 = *y;
        for i in 0..N {
            y1[i] = y[i] + h0 * k1[i];
        }
        let k2 = f(t + h0, &y1);
        stats.evaluations += 1;
        let mut diff = [T::zero(); N];
        for i in 0..N {
            diff[i] = k2[i] - k1[i];
        }
        let d2 = norm(&diff) / h0;
        let h1 = if d1.max(d2) <= T::lit(1e-15) {
            (T::lit(1e-6)).max(h0 * T::lit(1e-3))
        } else {
            (T::lit(0.01) / d1.max(d2)).powf(T::lit(0.2))
        };
        (T::lit(100.0) * h0).min(h1).min(span)
    }
}
