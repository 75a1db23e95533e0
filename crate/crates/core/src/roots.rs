//! Bracketed scalar root refinement.

use crate::error::{Error, Result};
use crate::real::Real;

/// Brent's bisection–secant–inverse-quadratic hybrid on `[a, b]`.
///
/// Requires `f(a)` and `f(b)` of opposite sign (or one of them zero) and
/// returns `None` otherwise. Terminates when the bracket half-width drops
/// below `xtol + rtol·|x|`.
pub fn brent<T: Real, F>(mut f: F, a: T, b: T, xtol: T, rtol: T, max_iter: usize) -> Result<Option<T>>
where
    F: FnMut(T) -> Result<T>,
{
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let mut xpre = a;
    let mut xcur = b;
    let mut fpre = f(xpre)?;
    let mut fcur = f(xcur)?;
    if fpre == T::zero() {
        return Ok(Some(xpre));
    }
    if fcur == T::zero() {
        return Ok(Some(xcur));
    }
    if fpre.signum() == fcur.signum() {
        return Ok(None);
    }
    let mut xblk = T::zero();
    let mut fblk = T::zero();
    let mut spre = T::zero();
    let mut scur = T::zero();

    for _ in 0..max_iter {
        if fpre != T::zero() && fcur != T::zero() && fpre.signum() != fcur.signum() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = (xtol + rtol * xcur.abs()) / two;
        let sbis = (xblk - xcur) / two;
        if fcur == T::zero() || sbis.abs() < delta {
            return Ok(Some(xcur));
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if two * stry.abs() < spre.abs().min(three * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur = xcur + scur;
        } else {
            xcur = xcur + if sbis > T::zero() { delta } else { -delta };
        }
        fcur = f(xcur)?;
    }
    Err(Error::NonConvergence { what: "brent root refinement" })
}
