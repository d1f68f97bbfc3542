//! The semiclassical transition kernel for quadratic Lagrangians.
//!
//! Off caustics the kernel is the Gaussian (van Vleck) form built from the
//! boundary-value action; on caustics it degenerates to a delta-supported
//! map `b = k a + s(T)` with amplitude `sqrt(|k|)` and the Morse phase.

use num_complex::Complex64;

use crate::classical::{self, ActionQuadraticForm, CausticReport, FundamentalPair};
use crate::timefun::CoefficientProfile;
use crate::{Error, Result};

/// A transition kernel over `[0, T]`.
#[derive(Debug, Clone)]
pub enum Kernel {
    Regular {
        form: ActionQuadraticForm,
        morse_index: usize,
        hbar: f64,
    },
    Critical(CriticalKernel),
}

/// The on-caustic kernel `sqrt(|k|) delta(b - k a - s_T) exp(i I(a)/hbar - i pi m/2)`.
///
/// The delta constraint stays symbolic; only [`apply_critical_kernel`]
/// touches sampled data. `I(a)` is evaluated by solving the trajectory from
/// `(a, p = 0)` and integrating the Lagrangian (at a caustic the action does
/// not depend on `p`).
#[derive(Debug, Clone)]
pub struct CriticalKernel {
    pub k: f64,
    pub s_t: f64,
    pub morse_index: usize,
    pub hbar: f64,
    pair: FundamentalPair,
}

impl CriticalKernel {
    /// Classical action of the caustic trajectory starting at `a`.
    pub fn action_at(&self, a: f64) -> f64 {
        classical::solve_trajectory(&self.pair, a, 0.0).action
    }

    /// The focal point conjugate to `a`.
    pub fn focal_point(&self, a: f64) -> f64 {
        self.k * a + self.s_t
    }
}

/// Evaluate the regular-branch kernel at endpoints `(a, b)`:
/// `(|B|/2 pi hbar)^{1/2} e^{i pi/4} e^{i I(b,a)/hbar - i pi m/2}`,
/// the `e^{i pi/4}` being the principal branch of the `i^{1/2}` prefactor.
pub fn regular_kernel(
    form: &ActionQuadraticForm,
    morse_index: usize,
    hbar: f64,
    a: f64,
    b: f64,
) -> Result<Complex64> {
    if hbar <= 0.0 {
        return Err(Error::InvalidInput("hbar must be positive".into()));
    }
    if !form.b.is_finite() || form.b == 0.0 {
        return Err(Error::CriticalPotential);
    }
    let amplitude = (form.b.abs() / (2.0 * std::f64::consts::PI * hbar)).sqrt();
    let phase = std::f64::consts::FRAC_PI_4 + form.action(a, b) / hbar
        - std::f64::consts::FRAC_PI_2 * morse_index as f64;
    Ok(amplitude * Complex64::from_polar(1.0, phase))
}

/// Build the critical kernel from a caustic report.
pub fn critical_kernel(
    report: &CausticReport,
    pair: &FundamentalPair,
    hbar: f64,
) -> Result<CriticalKernel> {
    if !report.critical {
        return Err(Error::NotCritical);
    }
    if hbar <= 0.0 {
        return Err(Error::InvalidInput("hbar must be positive".into()));
    }
    let k = report.k.expect("critical report carries k");
    if k == 0.0 {
        return Err(Error::InvalidInput("degenerate stretching factor".into()));
    }
    Ok(CriticalKernel {
        k,
        s_t: report.focal_intercept.expect("critical report carries s(T)"),
        morse_index: report.morse_index,
        hbar,
        pair: pair.clone(),
    })
}

/// Push a sampled wave function through the critical kernel:
/// `(K psi)(b) = |k|^{-1/2} e^{i I(a*)/hbar - i pi m/2} psi(a*)` with
/// `a* = (b - s_T)/k`. Linear interpolation off the sample grid, zero
/// outside it.
pub fn apply_critical_kernel(
    kernel: &CriticalKernel,
    grid: &[f64],
    psi: &[Complex64],
    out_grid: &[f64],
) -> Vec<Complex64> {
    let inv_amp = kernel.k.abs().sqrt().recip();
    out_grid
        .iter()
        .map(|&b| {
            let a_star = (b - kernel.s_t) / kernel.k;
            let value = interp_complex(grid, psi, a_star);
            if value == Complex64::new(0.0, 0.0) {
                return value;
            }
            let phase = kernel.action_at(a_star) / kernel.hbar
                - std::f64::consts::FRAC_PI_2 * kernel.morse_index as f64;
            inv_amp * Complex64::from_polar(1.0, phase) * value
        })
        .collect()
}

fn interp_complex(grid: &[f64], psi: &[Complex64], x: f64) -> Complex64 {
    if x < grid[0] || x > grid[grid.len() - 1] {
        return Complex64::new(0.0, 0.0);
    }
    let i = match grid.partition_point(|g| *g < x) {
        0 => 1,
        i => i.min(grid.len() - 1),
    };
    let w = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    psi[i - 1] * (1.0 - w) + psi[i] * w
}

/// Reference values for the forced harmonic oscillator
/// (`lambda = omega^2`, force `f = -mu`): the focal intercept
/// `s(T) = (1/omega) integral sin omega(T-t') f(t') dt'` and the caustic
/// action, both by quadrature. The action formula is the caustic-family
/// one; `caustic_family` is false when `omega T / pi` is not near an
/// integer.
pub struct ForcedHoReference {
    pub s_t: f64,
    pub action: f64,
    pub caustic_family: bool,
}

pub fn forced_ho_reference(
    omega: f64,
    force: &CoefficientProfile,
    horizon: f64,
    a: f64,
) -> Result<ForcedHoReference> {
    if omega <= 0.0 {
        return Err(Error::InvalidInput("omega must be positive".into()));
    }
    let n = 8192;
    let h = horizon / n as f64;
    let f: Vec<f64> = (0..=n)
        .map(|i| force.eval(i as f64 * h))
        .collect::<Result<_>>()?;

    let s_integrand: Vec<f64> = (0..=n)
        .map(|i| (omega * (horizon - i as f64 * h)).sin() * f[i])
        .collect();
    let s_t = classical::simpson(&s_integrand, horizon) / omega;

    // g(t) = integral_0^t sin(omega t') f(t') dt', cumulative trapezoid.
    let mut g = vec![0.0; n + 1];
    for i in 1..=n {
        let a0 = (omega * (i - 1) as f64 * h).sin() * f[i - 1];
        let a1 = (omega * i as f64 * h).sin() * f[i];
        g[i] = g[i - 1] + 0.5 * h * (a0 + a1);
    }
    let cos_f: Vec<f64> = (0..=n)
        .map(|i| (omega * i as f64 * h).cos() * f[i])
        .collect();
    let first = a * classical::simpson(&cos_f, horizon);
    let double_integrand: Vec<f64> = (0..=n).map(|i| cos_f[i] * g[i]).collect();
    let second = classical::simpson(&double_integrand, horizon) / omega;

    let ratio = omega * horizon / std::f64::consts::PI;
    let caustic_family = (ratio - ratio.round()).abs() < 1e-6;
    Ok(ForcedHoReference {
        s_t,
        action: first - second,
        caustic_family,
    })
}
