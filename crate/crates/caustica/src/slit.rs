//! The Gaussian slit experiment: a chirped Gaussian emerging from a slit of
//! width `sigma0` at `x = a`, evolved in closed form through the regular
//! kernel; final center, variance, minimum-variance slit width and the
//! momentum susceptibility of the spread.

use num_complex::Complex64;

use crate::classical::ActionQuadraticForm;
use crate::{Error, Result};

/// Slit parameters. By default the average momentum is tied to the free
/// flight from the origin, `p = a/tau`; `decoupled` lets `p` vary
/// independently (the susceptibility scan differentiates in `p` at fixed
/// slit).
#[derive(Debug, Clone, Copy)]
pub struct SlitSetup {
    pub a: f64,
    pub sigma0: f64,
    pub tau: f64,
    pub p: f64,
    pub hbar: f64,
    pub decoupled: bool,
}

impl SlitSetup {
    /// Standard setup with `p = a/tau`.
    pub fn new(a: f64, sigma0: f64, tau: f64, hbar: f64) -> Result<Self> {
        if sigma0 <= 0.0 || tau <= 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidInput(
                "sigma0, tau and hbar must be positive".into(),
            ));
        }
        Ok(SlitSetup {
            a,
            sigma0,
            tau,
            p: a / tau,
            hbar,
            decoupled: false,
        })
    }

    /// Decoupled setup: `p` is free, the chirp follows `p/(2 hbar a)`.
    pub fn with_momentum(a: f64, sigma0: f64, p: f64, hbar: f64) -> Result<Self> {
        if sigma0 <= 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidInput("sigma0 and hbar must be positive".into()));
        }
        if a == 0.0 {
            return Err(Error::InvalidInput(
                "decoupled momentum needs a != 0; use new() with a = 0".into(),
            ));
        }
        let tau = if p != 0.0 { a / p } else { f64::INFINITY };
        Ok(SlitSetup {
            a,
            sigma0,
            tau,
            p,
            hbar,
            decoupled: true,
        })
    }

    /// Quadratic phase coefficient of the initial wave,
    /// `exp(i chirp x^2)`. Equals `1/(2 hbar tau)`, and `p/(2 hbar a)` in
    /// the decoupled parametrization.
    pub fn chirp(&self) -> f64 {
        if self.a != 0.0 {
            self.p / (2.0 * self.hbar * self.a)
        } else if self.tau.is_finite() {
            1.0 / (2.0 * self.hbar * self.tau)
        } else {
            0.0
        }
    }
}

/// A normalized complex Gaussian wave packet,
/// `psi(x) = norm (2 pi sigma^2)^{-1/4}
///   exp{ -(x - center)^2 / 4 sigma^2
///        + i (quad_phase x^2 + lin_phase x + glob_phase) }`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianState {
    pub center: f64,
    /// Position variance `sigma^2`.
    pub variance: f64,
    pub quad_phase: f64,
    pub lin_phase: f64,
    pub glob_phase: f64,
    /// `integral |psi|^2 = norm^2`.
    pub norm: f64,
}

impl GaussianState {
    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn sample(&self, x: f64) -> Complex64 {
        let d = x - self.center;
        let amp = self.norm
            * (2.0 * std::f64::consts::PI * self.variance).powf(-0.25)
            * (-d * d / (4.0 * self.variance)).exp();
        let phase = self.quad_phase * x * x + self.lin_phase * x + self.glob_phase;
        amp * Complex64::from_polar(1.0, phase)
    }

    /// Mean momentum `<-i hbar d/dx> = hbar (2 q <x> + l)`.
    pub fn mean_momentum(&self, hbar: f64) -> f64 {
        hbar * (2.0 * self.quad_phase * self.center + self.lin_phase)
    }
}

/// The post-slit state `psi(x, 0)`: center `a`, variance `sigma0^2`,
/// chirp from the pre-slit free flight.
pub fn initial_state(setup: &SlitSetup) -> GaussianState {
    let chirp = setup.chirp();
    // With a = 0 the chirp contributes no momentum; carry p linearly.
    let lin = if setup.a == 0.0 { setup.p / setup.hbar } else { 0.0 };
    GaussianState {
        center: setup.a,
        variance: setup.sigma0 * setup.sigma0,
        quad_phase: chirp,
        lin_phase: lin,
        glob_phase: 0.0,
        norm: 1.0,
    }
}

/// The two contributions to the final spread: the classically stretched
/// slit width and the quantum diffraction term.
#[derive(Debug, Clone, Copy)]
pub struct VarianceSplit {
    pub classical: f64,
    pub quantum: f64,
}

impl VarianceSplit {
    pub fn sigma(&self) -> f64 {
        self.classical.hypot(self.quantum)
    }
}

/// Closed-form final spread. The classical term is
/// `2 sigma0 |(hbar chirp + A)/B|`, which equals `sigma0 |x_cl(T)/a|`
/// whenever `a != 0` but needs no division by `a`; the quantum term is
/// `hbar/(2 sigma0 |B|)`.
pub fn variance_split(setup: &SlitSetup, form: &ActionQuadraticForm) -> Result<VarianceSplit> {
    if form.b == 0.0 || !form.b.is_finite() {
        return Err(Error::CriticalPotential);
    }
    let classical = 2.0 * setup.sigma0 * ((setup.hbar * setup.chirp() + form.a) / form.b).abs();
    let quantum = setup.hbar / (2.0 * setup.sigma0 * form.b.abs());
    Ok(VarianceSplit { classical, quantum })
}

/// Final classical center `x_cl(T) = -(2 a A + p)/B`, with the `mu`-induced
/// shift when the form carries linear terms.
pub fn classical_center(setup: &SlitSetup, form: &ActionQuadraticForm) -> Result<f64> {
    if form.b == 0.0 || !form.b.is_finite() {
        return Err(Error::CriticalPotential);
    }
    Ok(-(2.0 * setup.a * form.a + setup.p + form.d) / form.b)
}

/// Evolve the slit state through the regular kernel by the closed-form
/// Gaussian integral. The full complex Gaussian is returned, so relative
/// phases are available; `morse_index` only enters the global phase.
pub fn evolve(
    setup: &SlitSetup,
    form: &ActionQuadraticForm,
    morse_index: usize,
) -> Result<GaussianState> {
    if form.b == 0.0 || !form.b.is_finite() {
        return Err(Error::CriticalPotential);
    }
    let hbar = setup.hbar;
    let state0 = initial_state(setup);
    let i = Complex64::i();

    // Initial exponent -alpha x^2 + beta x + gamma.
    let s2 = state0.variance;
    let alpha = Complex64::new(1.0 / (4.0 * s2), -state0.quad_phase);
    let beta = Complex64::new(state0.center / (2.0 * s2), state0.lin_phase);
    let gamma = Complex64::new(
        -state0.center * state0.center / (4.0 * s2),
        state0.glob_phase,
    );

    // x-integral of exp{ -(alpha - iA/hbar) x^2 + (beta + i(By + D)/hbar) x }.
    let alpha_eff = alpha - i * form.a / hbar;
    let beta0 = beta + i * form.d / hbar;
    let ib_h = i * form.b / hbar;

    // Resulting exponent in y: -c2 y^2 + c1 y + c0.
    let c2 = -(ib_h * ib_h) / (4.0 * alpha_eff) - i * form.c / hbar;
    let c1 = beta0 * ib_h / (2.0 * alpha_eff) + i * form.e / hbar;
    let c0 = beta0 * beta0 / (4.0 * alpha_eff) + gamma + i * form.f / hbar;

    let prefactor = state0.norm
        * (2.0 * std::f64::consts::PI * s2).powf(-0.25)
        * (form.b.abs() / (2.0 * std::f64::consts::PI * hbar)).sqrt();
    let branch = Complex64::from_polar(
        1.0,
        std::f64::consts::FRAC_PI_4 - std::f64::consts::FRAC_PI_2 * morse_index as f64,
    );
    let gauss = (Complex64::new(std::f64::consts::PI, 0.0) / alpha_eff).sqrt();
    let p_total = prefactor * branch * gauss;

    let re_c2 = c2.re;
    if re_c2 <= 0.0 {
        return Err(Error::InvalidInput(
            "evolved state is not normalizable (non-positive width)".into(),
        ));
    }
    let variance = 1.0 / (4.0 * re_c2);
    let center = c1.re / (2.0 * re_c2);
    let norm_sq = p_total.norm_sqr()
        * (2.0 * c0.re + c1.re * c1.re / (2.0 * re_c2)).exp()
        * (std::f64::consts::PI / (2.0 * re_c2)).sqrt();
    Ok(GaussianState {
        center,
        variance,
        quad_phase: -c2.im,
        lin_phase: c1.im,
        glob_phase: c0.im + p_total.arg(),
        norm: norm_sq.sqrt(),
    })
}

/// Slit width minimizing the final spread:
/// `sigma_min = |hbar x_cl(T)/(a B)|^{1/2}` at
/// `sigma0* = |hbar a/(2 B x_cl(T))|^{1/2}`.
#[derive(Debug, Clone, Copy)]
pub struct OptimalSlit {
    pub sigma0_star: f64,
    pub sigma_min: f64,
    /// `sigma(sigma0*)` recomputed through `evolve`, for verification.
    pub sigma_at_star: f64,
}

pub fn optimal_slit(setup: &SlitSetup, form: &ActionQuadraticForm) -> Result<OptimalSlit> {
    if form.b == 0.0 || !form.b.is_finite() {
        return Err(Error::CriticalPotential);
    }
    if setup.a == 0.0 {
        return Err(Error::InvalidInput("optimal slit needs a != 0".into()));
    }
    let x_cl = classical_center(setup, form)?;
    if x_cl.abs() < 1e-12 * (1.0 + setup.a.abs()) {
        return Err(Error::InfiniteConcentration);
    }
    let sigma_min = (setup.hbar * x_cl / (setup.a * form.b)).abs().sqrt();
    let sigma0_star = (setup.hbar * setup.a / (2.0 * form.b * x_cl)).abs().sqrt();
    let tuned = SlitSetup {
        sigma0: sigma0_star,
        ..*setup
    };
    let sigma_at_star = variance_split(&tuned, form)?.sigma();
    Ok(OptimalSlit {
        sigma0_star,
        sigma_min,
        sigma_at_star,
    })
}

/// Momentum susceptibility of the final spread.
#[derive(Debug, Clone, Copy)]
pub struct Susceptibility {
    /// Closed form `S = |J| {1 + (hbar a / 2 sigma0^2 B x_cl)^2}^{-1/2}`.
    pub s: f64,
    /// `|J| = 1/|B|`, the classical limit.
    pub jacobi_abs: f64,
    /// Central finite difference `(a/sigma0)[sigma(p+d) - sigma(p-d)]/2d`.
    pub finite_difference: f64,
    /// Set when `x_cl(T) = 0` (purely quantum variance, `S = 0`).
    pub purely_quantum: bool,
}

pub fn susceptibility(setup: &SlitSetup, form: &ActionQuadraticForm) -> Result<Susceptibility> {
    if form.b == 0.0 || !form.b.is_finite() {
        return Err(Error::CriticalPotential);
    }
    if setup.a == 0.0 {
        return Err(Error::InvalidInput("susceptibility needs a != 0".into()));
    }
    let jacobi_abs = 1.0 / form.b.abs();
    let x_cl = classical_center(setup, form)?;

    let delta = 1e-5 * setup.p.abs().max(1.0);
    let sigma_at = |p: f64| -> Result<f64> {
        let shifted = SlitSetup {
            p,
            decoupled: true,
            ..*setup
        };
        Ok(variance_split(&shifted, form)?.sigma())
    };
    let finite_difference = setup.a / setup.sigma0
        * (sigma_at(setup.p + delta)? - sigma_at(setup.p - delta)?)
        / (2.0 * delta);

    if x_cl.abs() < 1e-12 * (1.0 + setup.a.abs()) {
        return Ok(Susceptibility {
            s: 0.0,
            jacobi_abs,
            finite_difference,
            purely_quantum: true,
        });
    }
    let q = setup.hbar * setup.a / (2.0 * setup.sigma0 * setup.sigma0 * form.b * x_cl);
    let s = jacobi_abs / (1.0 + q * q).sqrt();
    Ok(Susceptibility {
        s,
        jacobi_abs,
        finite_difference,
        purely_quantum: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn initial_state_momentum() {
        let setup = SlitSetup::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let state = initial_state(&setup);
        assert_relative_eq!(state.mean_momentum(1.0), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn symmetric_state_zero_momentum() {
        let setup = SlitSetup::new(0.0, 0.7, 2.0, 1.0).unwrap();
        let state = initial_state(&setup);
        assert_eq!(state.mean_momentum(1.0), 0.0);
    }

    #[test]
    fn initial_state_normalized() {
        // Numerical quadrature of |psi|^2 for (a, sigma0, tau) = (2, 0.5, 3).
        let setup = SlitSetup::new(2.0, 0.5, 3.0, 1.0).unwrap();
        let state = initial_state(&setup);
        let n = 20000;
        let (lo, hi) = (-6.0, 10.0);
        let h = (hi - lo) / n as f64;
        let total: f64 = (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * state.sample(lo + i as f64 * h).norm_sqr()
            })
            .sum::<f64>()
            * h;
        assert_relative_eq!(total, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn harmonic_half_period_width() {
        // omega = 1, T = pi/2, a = 1, p = 0, sigma0 = 1: center 0, sigma = 0.5.
        let setup = SlitSetup::with_momentum(1.0, 1.0, 0.0, 1.0).unwrap();
        let form = ActionQuadraticForm::harmonic(1.0, PI / 2.0);
        let state = evolve(&setup, &form, 0).unwrap();
        assert_abs_diff_eq!(state.center, 0.0, epsilon = 1e-12);
        assert_relative_eq!(state.sigma(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(state.norm, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn free_particle_spreading_law() {
        // p = a/tau: center a (1 + T/tau), sigma^2 per the textbook law.
        let (a, sigma0, tau, t, hbar) = (1.5, 0.8, 2.0, 1.0, 1.0);
        let setup = SlitSetup::new(a, sigma0, tau, hbar).unwrap();
        let form = ActionQuadraticForm::harmonic(0.0, t);
        let state = evolve(&setup, &form, 0).unwrap();
        assert_relative_eq!(state.center, a * (1.0 + t / tau), max_relative = 1e-10);
        let expected = sigma0
            * ((1.0 + t / tau).powi(2) + (hbar * t / (2.0 * sigma0 * sigma0)).powi(2)).sqrt();
        assert_relative_eq!(state.sigma(), expected, max_relative = 1e-10);
    }

    #[test]
    fn evolve_matches_closed_form_split() {
        let form = ActionQuadraticForm::harmonic(1.0, PI / 4.0);
        for (a, p, sigma0) in [(1.0, 0.0, 1.0), (2.0, -0.5, 0.4), (0.7, 1.3, 2.0)] {
            let setup = SlitSetup::with_momentum(a, sigma0, p, 1.0).unwrap();
            let state = evolve(&setup, &form, 0).unwrap();
            let split = variance_split(&setup, &form).unwrap();
            assert_relative_eq!(state.sigma(), split.sigma(), max_relative = 1e-10);
            assert_relative_eq!(
                state.center,
                classical_center(&setup, &form).unwrap(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn harmonic_variance_formula() {
        // Direct comparison with the constant-omega variance expression.
        let (omega, t, hbar) = (1.3, 0.9, 1.0);
        let form = ActionQuadraticForm::harmonic(omega, t);
        for (a, p, sigma0) in [(1.0, 0.3, 0.9), (0.5, -1.0, 1.7)] {
            let setup = SlitSetup::with_momentum(a, sigma0, p, hbar).unwrap();
            let split = variance_split(&setup, &form).unwrap();
            let wt = omega * t;
            let expected = sigma0
                * ((wt.cos() + p / (a * omega) * wt.sin()).powi(2)
                    + (hbar * wt.sin() / (2.0 * sigma0 * sigma0 * omega)).powi(2))
                .sqrt();
            assert_relative_eq!(split.sigma(), expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn quantum_enhancement() {
        // sigma(T) >= sigma0 |x_cl/a| always.
        let form = ActionQuadraticForm::harmonic(1.0, PI / 3.0);
        for (a, p, sigma0) in [(1.0, 0.0, 0.5), (2.0, 1.0, 1.5), (0.3, -0.7, 0.1)] {
            let setup = SlitSetup::with_momentum(a, sigma0, p, 1.0).unwrap();
            let split = variance_split(&setup, &form).unwrap();
            let x_cl = classical_center(&setup, &form).unwrap();
            assert!(split.sigma() >= sigma0 * (x_cl / a).abs() - 1e-14);
            assert!(split.sigma() >= split.quantum - 1e-14);
        }
    }

    #[test]
    fn optimal_slit_example() {
        // omega = 1, T = pi/4, a = 1, p = 0: sigma_min = sigma0* = sqrt(1/2).
        let setup = SlitSetup::with_momentum(1.0, 1.0, 0.0, 1.0).unwrap();
        let form = ActionQuadraticForm::harmonic(1.0, PI / 4.0);
        let optimal = optimal_slit(&setup, &form).unwrap();
        assert_relative_eq!(optimal.sigma_min, 0.5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(optimal.sigma0_star, 0.5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(optimal.sigma_at_star, optimal.sigma_min, max_relative = 1e-10);
    }

    #[test]
    fn optimal_slit_degenerate() {
        // omega = 1, T = pi/2, p = 0: x_cl(T) = 0.
        let setup = SlitSetup::with_momentum(1.0, 1.0, 0.0, 1.0).unwrap();
        let form = ActionQuadraticForm::harmonic(1.0, PI / 2.0);
        assert!(matches!(
            optimal_slit(&setup, &form),
            Err(Error::InfiniteConcentration)
        ));
    }

    #[test]
    fn optimal_attained_for_random_parameters() {
        let form = ActionQuadraticForm::harmonic(0.8, 1.1);
        for (a, p) in [(1.0, 0.2), (-1.5, 0.9), (0.6, -0.4)] {
            let setup = SlitSetup::with_momentum(a, 1.0, p, 1.0).unwrap();
            let optimal = optimal_slit(&setup, &form).unwrap();
            assert_relative_eq!(optimal.sigma_at_star, optimal.sigma_min, max_relative = 1e-10);
        }
    }

    #[test]
    fn susceptibility_classical_limit() {
        // hbar -> 0: S -> |J| = |sin(omega T)/omega|.
        let (omega, t) = (1.0, PI / 4.0);
        let form = ActionQuadraticForm::harmonic(omega, t);
        let setup = SlitSetup::with_momentum(1.0, 1.0, 0.0, 1e-8).unwrap();
        let out = susceptibility(&setup, &form).unwrap();
        assert_abs_diff_eq!(out.s, (omega * t).sin().abs() / omega, epsilon = 1e-6);
    }

    #[test]
    fn susceptibility_matches_finite_difference() {
        let form = ActionQuadraticForm::harmonic(1.0, PI / 4.0);
        let setup = SlitSetup::with_momentum(1.0, 1.0, 0.0, 1.0).unwrap();
        let out = susceptibility(&setup, &form).unwrap();
        assert_relative_eq!(out.s, out.finite_difference.abs(), max_relative = 1e-6);
        assert!(out.s <= out.jacobi_abs + 1e-14);
    }

    #[test]
    fn susceptibility_purely_quantum() {
        let form = ActionQuadraticForm::harmonic(1.0, PI / 2.0);
        let setup = SlitSetup::with_momentum(1.0, 1.0, 0.0, 1.0).unwrap();
        let out = susceptibility(&setup, &form).unwrap();
        assert!(out.purely_quantum);
        assert_eq!(out.s, 0.0);
    }
}
