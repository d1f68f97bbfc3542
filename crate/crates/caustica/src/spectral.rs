//! Dirichlet spectrum of the fluctuation operator `-[d^2/dt^2 + lambda(t)]`
//! on `[0, T]`, and the Morse index cross-check against the Jacobi-field
//! zero count.
//!
//! The operator is discretized by second-order central differences on a
//! uniform grid, giving a symmetric tridiagonal matrix. Eigenvalues are
//! located by Sturm-sequence bisection (robust, orderable, and cheap for the
//! lowest few), eigenvectors by inverse iteration.

use crate::classical::{self, SolverSettings};
use crate::timefun::CoefficientProfile;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Interior grid points of the discretization.
    pub grid_points: usize,
    /// Lowest `n_max` eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub negative_count: usize,
    pub zero_count: usize,
    /// Extended index: modes with `E_n <= 0` (zero modes included).
    pub index: usize,
    /// Zero-mode classification threshold used.
    pub eps_zero: f64,
}

#[derive(Debug, Clone)]
pub struct MorseCrosscheck {
    pub agree: bool,
    pub spectral_index: usize,
    pub classical_index: usize,
    pub min_abs_eigenvalue: f64,
    pub critical: bool,
}

/// Symmetric tridiagonal matrix (diagonal `d`, off-diagonal `e`).
struct Tridiag {
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Tridiag {
    /// Number of eigenvalues strictly below `x` (Sturm sequence via the
    /// LDL^T recurrence, zero pivots handled a la Barth-Martin-Wilkinson;
    /// a tiny pivot overflows `e^2/q` to +-inf, which IEEE arithmetic
    /// propagates with the correct sign).
    fn count_below(&self, x: f64) -> usize {
        let n = self.d.len();
        let mut count = 0;
        let mut q = self.d[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let off = self.e[i - 1];
            let correction = if q != 0.0 {
                off * off / q
            } else {
                off.abs() / f64::EPSILON
            };
            q = self.d[i] - x - correction;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th (0-based) smallest eigenvalue by bisection.
    fn eigenvalue(&self, k: usize, lo0: f64, hi0: f64) -> Result<f64> {
        let (mut lo, mut hi) = (lo0, hi0);
        let max_iter = 200;
        for _ in 0..max_iter {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
                return Ok(0.5 * (lo + hi));
            }
        }
        Err(Error::EigenNonConvergence {
            iterations: max_iter,
        })
    }

    /// Eigenvector by inverse iteration with shift `sigma`; returned with
    /// Euclidean norm 1.
    fn eigenvector(&self, sigma: f64) -> Vec<f64> {
        let n = self.d.len();
        // Perturb the shift off the eigenvalue so the solve stays finite.
        let shift = sigma + 1e-11 * (1.0 + sigma.abs());
        let mut v: Vec<f64> = (0..n)
            .map(|i| ((i * 2654435761 + 12345) % 1000) as f64 / 1000.0 - 0.5)
            .collect();
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    }

    /// Thomas solve of `(A - shift I) w = rhs`.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut c = vec![0.0; n];
        let mut dd = vec![0.0; n];
        let mut b = self.d[0] - shift;
        if b.abs() < 1e-300 {
            b = 1e-300;
        }
        c[0] = self.e.first().cloned().unwrap_or(0.0) / b;
        dd[0] = rhs[0] / b;
        for i in 1..n {
            let off = self.e[i - 1];
            let mut denom = self.d[i] - shift - off * c[i - 1];
            if denom.abs() < 1e-300 {
                denom = 1e-300;
            }
            c[i] = if i < n - 1 { self.e[i] / denom } else { 0.0 };
            dd[i] = (rhs[i] - off * dd[i - 1]) / denom;
        }
        let mut w = vec![0.0; n];
        w[n - 1] = dd[n - 1];
        for i in (0..n - 1).rev() {
            w[i] = dd[i] - c[i] * w[i + 1];
        }
        w
    }
}

fn discretize(lambda: &CoefficientProfile, n: usize) -> Result<Tridiag> {
    let t = lambda.horizon;
    let h = t / (n + 1) as f64;
    let mut d = Vec::with_capacity(n);
    for i in 1..=n {
        let lam = lambda.eval(i as f64 * h)?;
        if !lam.is_finite() {
            return Err(Error::UnboundedCoefficient);
        }
        d.push(2.0 / (h * h) - lam);
    }
    let e = vec![-1.0 / (h * h); n - 1];
    Ok(Tridiag { d, e })
}

/// Zero-mode classification threshold: tied to the `O(h^2)` discretization
/// error so the zero mode at a caustic is classified correctly.
pub fn eps_zero(lambda: &CoefficientProfile, n: usize) -> Result<f64> {
    let h = lambda.horizon / (n + 1) as f64;
    let sup = lambda.sup_abs_on_grid(n + 1)?;
    Ok((10.0 * h * h * sup.max(1.0)).max(1e-6))
}

/// Lowest `n_max` Dirichlet eigenvalues of `-[d^2/dt^2 + lambda(t)]` with
/// `n` interior grid points, plus the nonpositive-mode counts.
pub fn sturm_liouville_spectrum(
    lambda: &CoefficientProfile,
    n_max: usize,
    n: usize,
) -> Result<SpectrumReport> {
    if n < 64 {
        return Err(Error::InvalidInput(format!(
            "need N >= 64 interior points, got {n}"
        )));
    }
    if n_max > n / 4 {
        return Err(Error::InvalidInput(format!(
            "n_max = {n_max} exceeds the accuracy guard N/4 = {}",
            n / 4
        )));
    }
    let matrix = discretize(lambda, n)?;
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += matrix.e[i - 1].abs();
        }
        if i < n - 1 {
            r += matrix.e[i].abs();
        }
        lo = lo.min(matrix.d[i] - r);
        hi = hi.max(matrix.d[i] + r);
    }
    let mut eigenvalues = Vec::with_capacity(n_max);
    for k in 0..n_max {
        eigenvalues.push(matrix.eigenvalue(k, lo, hi)?);
    }
    let eps = eps_zero(lambda, n)?;
    let negative_count = matrix.count_below(-eps);
    let at_most_eps = matrix.count_below(eps);
    let zero_count = at_most_eps - negative_count;
    Ok(SpectrumReport {
        grid_points: n,
        eigenvalues,
        negative_count,
        zero_count,
        index: negative_count + zero_count,
        eps_zero: eps,
    })
}

/// Normalized eigenvectors (quadrature weight `h`, so the discrete
/// `integral of u_n u_m` is `delta_nm`) for the lowest `n_max` modes.
pub fn eigenvectors(
    lambda: &CoefficientProfile,
    n_max: usize,
    n: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let report = sturm_liouville_spectrum(lambda, n_max, n)?;
    let matrix = discretize(lambda, n)?;
    let h = lambda.horizon / (n + 1) as f64;
    Ok(report
        .eigenvalues
        .iter()
        .map(|&ev| {
            let mut v = matrix.eigenvector(ev);
            // Euclidean norm 1 -> continuum normalization 1/sqrt(h).
            for x in &mut v {
                *x /= h.sqrt();
            }
            (ev, v)
        })
        .collect())
}

/// Check the Morse index theorem: spectral nonpositive-mode count versus the
/// Jacobi-field zero count from the classical module.
pub fn morse_crosscheck(lambda: &CoefficientProfile, n: usize) -> Result<MorseCrosscheck> {
    let mu = CoefficientProfile::zero(lambda.horizon);
    let pair = classical::solve_fundamental(lambda, &mu, &SolverSettings::default())?;
    let report = classical::caustic_report(&pair, 1e-8)?;
    let bound = 4 + (lambda.horizon * lambda.sup_abs_on_grid(256)?.sqrt()
        / std::f64::consts::PI) as usize;
    let spectrum = sturm_liouville_spectrum(lambda, bound.min(n / 4), n)?;
    let min_abs = spectrum
        .eigenvalues
        .iter()
        .map(|e| e.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(MorseCrosscheck {
        agree: spectrum.index == report.morse_index,
        spectral_index: spectrum.index,
        classical_index: report.morse_index,
        min_abs_eigenvalue: min_abs,
        critical: report.critical,
    })
}
