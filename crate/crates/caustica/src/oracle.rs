//! Numerically exact grid propagation of the time-dependent Schrödinger
//! equation `i hbar dpsi/dt = [-(hbar^2/2) d^2/dx^2 + lambda(t) x^2/2
//! + mu(t) x] psi`, used as independent ground truth for the kernel and
//! slit closed forms.
//!
//! Crank–Nicolson (trapezoidal) stepping with the Hamiltonian at the step
//! midpoint: unconditionally stable, exactly unitary in the discrete norm,
//! second order in both the grid spacing and the time step.

use num_complex::Complex64;

use crate::slit::GaussianState;
use crate::timefun::CoefficientProfile;
use crate::{Error, Result};

/// Fraction of nodes at each box edge watched for boundary leakage.
const EDGE_FRACTION: f64 = 0.05;
/// Leak threshold relative to `max |psi|`.
const LEAK_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GridState {
    pub x_min: f64,
    pub x_max: f64,
    pub samples: Vec<Complex64>,
    pub t: f64,
}

impl GridState {
    pub fn n_points(&self) -> usize {
        self.samples.len()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.samples.len() - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.dx();
        (0..self.samples.len())
            .map(|i| self.x_min + i as f64 * h)
            .collect()
    }

    /// Sample a Gaussian packet onto a fresh grid.
    pub fn from_gaussian(state: &GaussianState, x_min: f64, x_max: f64, n_points: usize) -> Self {
        let h = (x_max - x_min) / (n_points - 1) as f64;
        let samples = (0..n_points)
            .map(|i| state.sample(x_min + i as f64 * h))
            .collect();
        GridState {
            x_min,
            x_max,
            samples,
            t: 0.0,
        }
    }

    /// Default box for a packet: centered on the classical sweep, wide
    /// enough that the edges stay empty (2048 points unless overridden).
    pub fn default_box(centers: &[f64], sigma_max: f64) -> (f64, f64) {
        let lo = centers.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = centers.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo - 12.0 * sigma_max, hi + 12.0 * sigma_max)
    }

    pub fn norm(&self) -> f64 {
        trapezoid_norm_sqr(&self.samples, self.dx()).sqrt()
    }

    fn check_containment(&self) -> Result<()> {
        let n = self.samples.len();
        let edge = ((n as f64 * EDGE_FRACTION) as usize).max(1);
        let max_amp = self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let edge_amp = self.samples[..edge]
            .iter()
            .chain(&self.samples[n - edge..])
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if edge_amp > LEAK_LIMIT * max_amp {
            return Err(Error::BoundaryLeak {
                amplitude: edge_amp,
                limit: LEAK_LIMIT * max_amp,
            });
        }
        Ok(())
    }
}

fn trapezoid_norm_sqr(samples: &[Complex64], h: f64) -> f64 {
    let n = samples.len();
    let mut sum = 0.5 * (samples[0].norm_sqr() + samples[n - 1].norm_sqr());
    for s in &samples[1..n - 1] {
        sum += s.norm_sqr();
    }
    sum * h
}

/// Propagate from `t0` to `t1` in `n_steps` Crank–Nicolson steps.
pub fn propagate(
    state: &GridState,
    lambda: &CoefficientProfile,
    mu: &CoefficientProfile,
    hbar: f64,
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<GridState> {
    if n_steps < 16 {
        return Err(Error::InvalidInput(format!(
            "need >= 16 time steps, got {n_steps}"
        )));
    }
    if hbar <= 0.0 {
        return Err(Error::InvalidInput("hbar must be positive".into()));
    }
    state.check_containment()?;
    let n = state.samples.len();
    let h = state.dx();
    let dt = (t1 - t0) / n_steps as f64;
    let grid = state.grid();

    let mut psi = state.samples.clone();
    let kinetic = hbar * hbar / (2.0 * h * h);
    // i dt / (2 hbar) H, split into tridiagonal coefficients.
    let off = Complex64::i() * dt / (2.0 * hbar) * (-kinetic);
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch_c = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch_d = vec![Complex64::new(0.0, 0.0); n];

    for step in 0..n_steps {
        let t_mid = t0 + (step as f64 + 0.5) * dt;
        let lam = lambda.eval(t_mid.min(lambda.horizon))?;
        let m = mu.eval(t_mid.min(mu.horizon))?;
        for j in 0..n {
            let x = grid[j];
            let potential = 0.5 * lam * x * x + m * x;
            let h_diag = 2.0 * kinetic + potential;
            diag[j] = Complex64::new(1.0, 0.0) + Complex64::i() * dt / (2.0 * hbar) * h_diag;
        }
        // rhs = (1 - i dt H / 2 hbar) psi, Dirichlet ends.
        for j in 0..n {
            let two_minus = Complex64::new(2.0, 0.0) - diag[j];
            let mut acc = two_minus * psi[j];
            if j > 0 {
                acc -= off * psi[j - 1];
            }
            if j < n - 1 {
                acc -= off * psi[j + 1];
            }
            rhs[j] = acc;
        }
        thomas_solve(&diag, off, &rhs, &mut psi, &mut scratch_c, &mut scratch_d)?;
        let snapshot = GridState {
            x_min: state.x_min,
            x_max: state.x_max,
            samples: std::mem::take(&mut psi),
            t: t0 + (step as f64 + 1.0) * dt,
        };
        snapshot.check_containment()?;
        psi = snapshot.samples;
    }
    Ok(GridState {
        x_min: state.x_min,
        x_max: state.x_max,
        samples: psi,
        t: t1,
    })
}

/// Tridiagonal solve with constant off-diagonal.
fn thomas_solve(
    diag: &[Complex64],
    off: Complex64,
    rhs: &[Complex64],
    out: &mut Vec<Complex64>,
    c: &mut [Complex64],
    d: &mut [Complex64],
) -> Result<()> {
    let n = diag.len();
    let mut denom = diag[0];
    if denom.norm() == 0.0 {
        return Err(Error::Integrator {
            t: f64::NAN,
            reason: "singular tridiagonal system".into(),
        });
    }
    c[0] = off / denom;
    d[0] = rhs[0] / denom;
    for j in 1..n {
        denom = diag[j] - off * c[j - 1];
        if denom.norm() == 0.0 {
            return Err(Error::Integrator {
                t: f64::NAN,
                reason: "singular tridiagonal system".into(),
            });
        }
        c[j] = off / denom;
        d[j] = (rhs[j] - off * d[j - 1]) / denom;
    }
    out.resize(n, Complex64::new(0.0, 0.0));
    out[n - 1] = d[n - 1];
    for j in (0..n - 1).rev() {
        out[j] = d[j] - c[j] * out[j + 1];
    }
    Ok(())
}

/// Quadrature moments of a grid state.
#[derive(Debug, Clone, Copy)]
pub struct Moments {
    pub norm: f64,
    pub center: f64,
    pub variance: f64,
    pub mean_momentum: f64,
}

pub fn moments(state: &GridState, hbar: f64) -> Moments {
    let h = state.dx();
    let grid = state.grid();
    let n = state.samples.len();
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };

    let norm_sq: f64 = (0..n)
        .map(|i| weight(i) * state.samples[i].norm_sqr())
        .sum::<f64>()
        * h;
    let center: f64 = (0..n)
        .map(|i| weight(i) * grid[i] * state.samples[i].norm_sqr())
        .sum::<f64>()
        * h
        / norm_sq;
    let variance: f64 = (0..n)
        .map(|i| {
            let d = grid[i] - center;
            weight(i) * d * d * state.samples[i].norm_sqr()
        })
        .sum::<f64>()
        * h
        / norm_sq;
    // <-i hbar d/dx> via central differences.
    let mut momentum = 0.0;
    for i in 1..n - 1 {
        let deriv = (state.samples[i + 1] - state.samples[i - 1]) / (2.0 * h);
        momentum += (state.samples[i].conj() * deriv).im;
    }
    let mean_momentum = hbar * momentum * h / norm_sq;
    Moments {
        norm: norm_sq.sqrt(),
        center,
        variance,
        mean_momentum,
    }
}

/// Propagate a basis of narrow, well-separated Gaussians and report the
/// largest deviation of their final overlap matrix from the identity.
pub fn unitarity_check(
    lambda: &CoefficientProfile,
    mu: &CoefficientProfile,
    hbar: f64,
    x_min: f64,
    x_max: f64,
    n_points: usize,
    n_steps: usize,
    n_basis: usize,
) -> Result<f64> {
    let span = x_max - x_min;
    let width = span / 60.0;
    let spacing = 12.0 * width;
    let mid = 0.5 * (x_min + x_max);
    let mut finals = Vec::with_capacity(n_basis);
    for b in 0..n_basis {
        let center = mid + (b as f64 - (n_basis - 1) as f64 / 2.0) * spacing;
        let packet = GaussianState {
            center,
            variance: width * width,
            quad_phase: 0.0,
            lin_phase: 0.0,
            glob_phase: 0.0,
            norm: 1.0,
        };
        let grid = GridState::from_gaussian(&packet, x_min, x_max, n_points);
        finals.push(propagate(&grid, lambda, mu, hbar, 0.0, lambda.horizon, n_steps)?);
    }
    let h = finals[0].dx();
    let n = finals[0].samples.len();
    let mut deviation: f64 = 0.0;
    for (i, fi) in finals.iter().enumerate() {
        for (j, fj) in finals.iter().enumerate() {
            let mut overlap = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                overlap += w * fi.samples[k].conj() * fj.samples[k];
            }
            overlap *= h;
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((overlap - target).norm());
        }
    }
    Ok(deviation)
}

/// Dump `|psi(x)|^2` as CSV rows `x,density` (for plotting).
pub fn dump_density_csv<W: std::io::Write>(state: &GridState, writer: &mut W) -> Result<()> {
    writeln!(writer, "x,density")?;
    let grid = state.grid();
    for (x, psi) in grid.iter().zip(&state.samples) {
        writeln!(writer, "{:.17e},{:.17e}", x, psi.norm_sqr())?;
    }
    Ok(())
}
