use crate::error::{Error, Result};
use crate::fast::RadialPotential;
use crate::real::Real;
use crate::slow::BetaParam;

/// Uniform grid `r_i = i·h`, `i = 1..=n_points`, `h = r_max/(n_points+1)`,
/// with Dirichlet walls at `0` and `r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    pub r_max: T,
    pub n_points: usize,
    pub spacing: T,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_max: T, n_points: usize) -> Result<Self> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(Error::InvalidParameter(format!("grid extent {r_max} must be positive")));
        }
        if n_points < 100 {
            return Err(Error::InvalidParameter(format!("grid needs at least 100 points, got {n_points}")));
        }
        Ok(Self { r_max, n_points, spacing: r_max / T::from_usize_lossy(n_points + 1) })
    }

    /// Same extent, half the spacing.
    pub fn refined(&self) -> Self {
        Self::new(self.r_max, 2 * self.n_points + 1).expect("refinement of a valid grid")
    }

    pub fn node(&self, i: usize) -> T {
        self.spacing * T::from_usize_lossy(i + 1)
    }
}

/// Lowest negative eigenvalues of the discretised radial operator, in units
/// of `-λ²` (that is, `μE`), ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub eigenvalues: Vec<T>,
    pub grid: RadialGrid<T>,
    /// The same problem on the refined grid, when Richardson extrapolation
    /// was requested.
    pub richardson_pair: Option<Box<OracleResult<T>>>,
}

impl<T: Real> OracleResult<T> {
    /// `(4·e_{h/2} - e_h)/3` per level, for levels present on both grids.
    pub fn extrapolated(&self) -> Option<Vec<T>> {
        let fine = self.richardson_pair.as_ref()?;
        Some(
            self.eigenvalues
                .iter()
                .zip(&fine.eigenvalues)
                .map(|(&c, &f)| (T::lit(4.0) * f - c) / T::lit(3.0))
                .collect(),
        )
    }

    /// Best available estimate: extrapolated when a pair exists.
    pub fn best(&self) -> Vec<T> {
        self.extrapolated().unwrap_or_else(|| self.eigenvalues.clone())
    }
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `diag` and constant off-diagonal `off`, from the
/// signs of the LDLᵀ pivots.
pub fn sturm_count<T: Real>(diag: &[T], off: T, x: T) -> usize {
    let guard = T::min_positive_value().sqrt();
    let off_sq = off * off;
    let mut count = 0;
    let mut q = T::one();
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - off_sq / q };
        if q == T::zero() {
            q = -guard;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn assemble<T: Real, P: RadialPotential<T>>(pot: &P, beta: &BetaParam<T>, grid: &RadialGrid<T>) -> (Vec<T>, T) {
    let h = grid.spacing;
    let inv_h2 = T::one() / (h * h);
    let r0 = pot.r0();
    let tail = beta.tail_strength();
    let diag = (0..grid.n_points)
        .map(|i| {
            let r = grid.node(i);
            let v = if r <= r0 { pot.eval(r) } else { -tail / (r * r) };
            T::lit(2.0) * inv_h2 + v
        })
        .collect();
    (diag, -inv_h2)
}

/// Fraction of the eigenvector's squared norm in the outer tenth of the box,
/// from two steps of inverse iteration at the eigenvalue.
fn tail_mass<T: Real>(diag: &[T], off: T, eigenvalue: T) -> T {
    let n = diag.len();
    let shift = eigenvalue - eigenvalue.abs().max(T::one()) * T::lit(1e-11);
    let mut x = vec![T::one(); n];
    let mut c = vec![T::zero(); n];
    let tiny = T::min_positive_value().sqrt();
    for _ in 0..3 {
        // Thomas algorithm on (T - shift)·y = x
        let mut denom = diag[0] - shift;
        if denom == T::zero() {
            denom = tiny;
        }
        c[0] = off / denom;
        x[0] = x[0] / denom;
        for i in 1..n {
            let mut m = diag[i] - shift - off * c[i - 1];
            if m == T::zero() {
                m = tiny;
            }
            c[i] = off / m;
            x[i] = (x[i] - off * x[i - 1]) / m;
        }
        for i in (0..n - 1).rev() {
            x[i] = x[i] - c[i] * x[i + 1];
        }
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        for v in x.iter_mut() {
            *v = *v / norm;
        }
    }
    let start = n - n / 10;
    x[start..].iter().map(|&v| v * v).sum()
}

/// The `k` lowest negative eigenvalues of `-d²/dr² + v_eff` on the grid, with
/// `v_eff = v` inside the cutoff and `-(β²+¼)/r²` outside, each bisected on
/// Sturm counts to a relative width of `1e-12`.
///
/// Fails with [`Error::InsufficientDomain`] when an eigenvector keeps more
/// than `1e-8` of its mass near `r_max`.
pub fn fd_spectrum<T: Real, P: RadialPotential<T>>(
    pot: &P,
    beta: &BetaParam<T>,
    grid: &RadialGrid<T>,
    k: usize,
) -> Result<OracleResult<T>> {
    let (diag, off) = assemble(pot, beta, grid);
    let negative = sturm_count(&diag, off, T::zero());
    let wanted = k.min(negative);
    let lower = diag.iter().copied().fold(T::infinity(), T::min) - T::lit(2.0) * off.abs();
    let rel = T::lit(1e-12).max(T::epsilon() * T::lit(4.0));

    let mut eigenvalues = Vec::with_capacity(wanted);
    for j in 0..wanted {
        let (mut lo, mut hi) = (lower, T::zero());
        for _ in 0..400 {
            let mid = (lo + hi) / T::lit(2.0);
            if sturm_count(&diag, off, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= rel * lo.abs().max(hi.abs()) {
                break;
            }
        }
        let e = (lo + hi) / T::lit(2.0);
        let mass = tail_mass(&diag, off, e);
        if mass > T::lit(1e-8) {
            return Err(Error::InsufficientDomain { index: j, tail_mass: mass.as_f64() });
        }
        eigenvalues.push(e);
    }
    Ok(OracleResult { eigenvalues, grid: *grid, richardson_pair: None })
}

/// [`fd_spectrum`] on `grid` and on its refinement, paired for Richardson
/// extrapolation.
pub fn fd_spectrum_richardson<T: Real, P: RadialPotential<T>>(
    pot: &P,
    beta: &BetaParam<T>,
    grid: &RadialGrid<T>,
    k: usize,
) -> Result<OracleResult<T>> {
    let coarse = fd_spectrum(pot, beta, grid, k)?;
    let fine = fd_spectrum(pot, beta, &grid.refined(), k)?;
    Ok(OracleResult { richardson_pair: Some(Box::new(fine)), ..coarse })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_count_small_matrix() {
        // tridiag(-1, 2, -1) of size 3 has eigenvalues 2 - √2, 2, 2 + √2
        let d = [2.0_f64; 3];
        assert_eq!(sturm_count(&d, -1.0, 0.5), 0);
        assert_eq!(sturm_count(&d, -1.0, 1.0), 1);
        assert_eq!(sturm_count(&d, -1.0, 2.5), 2);
        assert_eq!(sturm_count(&d, -1.0, 4.0), 3);
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(10.0_f64, 99).is_err());
        assert!(RadialGrid::new(-1.0_f64, 1000).is_err());
        let g = RadialGrid::new(10.0_f64, 999).unwrap();
        assert!((g.spacing - 0.01).abs() < 1e-15);
        assert!((g.refined().spacing - 0.005).abs() < 1e-15);
    }
}
