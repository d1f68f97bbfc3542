//! Classical layer: equation of motion, Jacobi fields, caustic detection and
//! the classical action in quadratic form.
//!
//! Everything is built from the fundamental pair `u`, `v` of the homogeneous
//! equation `x'' + lambda(t) x = 0` with `u(0) = 0, u'(0) = 1` and
//! `v(0) = 1, v'(0) = 0`, plus the special solution `s` of
//! `x'' + lambda(t) x = -mu(t)` fixed by `s(0) = s'(0) = 0`.

use crate::timefun::CoefficientProfile;
use crate::{Error, Result};

/// Fixed-step RK4 solver settings. A fixed uniform grid keeps the sample
/// times shared by every downstream module and makes runs reproducible.
#[derive(Debug, Clone)]
pub struct SolverSettings {
    /// Number of RK4 steps over `[0, T]` (rounded up to an even count for
    /// composite Simpson quadrature).
    pub steps: usize,
    /// Criticality threshold, relative to `max |u|`.
    pub eps_caustic: f64,
    /// Zero-refinement tolerance, relative to `T`.
    pub tol_zero_rel: f64,
    /// When set, re-solve at half resolution and record the Richardson
    /// error estimate for `u(T)`.
    pub check_convergence: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            steps: 2048,
            eps_caustic: 1e-8,
            tol_zero_rel: 1e-10,
            check_convergence: false,
        }
    }
}

/// The fundamental pair `(u, v)` and special solution `s`, sampled with
/// derivatives on a uniform grid over `[0, T]`.
#[derive(Debug, Clone)]
pub struct FundamentalPair {
    pub times: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
    pub s: Vec<f64>,
    pub ds: Vec<f64>,
    /// `lambda` and `mu` at the sample times (for action quadrature).
    pub lambda_samples: Vec<f64>,
    pub mu_samples: Vec<f64>,
    pub horizon: f64,
    /// Richardson estimate of the error in `u(T)`, when requested.
    pub richardson_error_u: Option<f64>,
}

/// A classical trajectory `x(t) = a v(t) + p u(t) + s(t)` with its action.
#[derive(Debug, Clone)]
pub struct ClassicalTrajectory {
    pub a: f64,
    pub p: f64,
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub dx: Vec<f64>,
    /// `I[x_cl] = integral of L` by composite Simpson on the solver grid.
    pub action: f64,
}

/// Caustic diagnostics at `t = T`.
#[derive(Debug, Clone)]
pub struct CausticReport {
    pub critical: bool,
    pub u_t: f64,
    /// `|u(T)| / max |u|`.
    pub caustic_residual: f64,
    /// Stretching factor `k = v(T)` (critical only).
    pub k: Option<f64>,
    /// Focal intercept `s(T)` (critical only).
    pub focal_intercept: Option<f64>,
    /// Number of zeros of `u` on `(0, T]`.
    pub morse_index: usize,
    pub zero_times: Vec<f64>,
}

/// Coefficients of the boundary-value action
/// `I(b, T; a, 0) = A a^2 + B ab + C b^2 + D a + E b + F`.
///
/// `D`, `E`, `F` vanish when `mu = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ActionQuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl ActionQuadraticForm {
    /// `I(b; a)` with `a` the initial and `b` the final position.
    pub fn action(&self, initial: f64, final_pos: f64) -> f64 {
        self.a * initial * initial
            + self.b * initial * final_pos
            + self.c * final_pos * final_pos
            + self.d * initial
            + self.e * final_pos
            + self.f
    }

    /// Constant-`omega` harmonic oscillator form (`mu = 0`), from
    /// `A = C = omega / (2 tan omega T)`, `B = -omega / sin omega T`,
    /// with the free-particle limit at `omega = 0`.
    pub fn harmonic(omega: f64, t: f64) -> Self {
        let (a, b) = if omega == 0.0 {
            (0.5 / t, -1.0 / t)
        } else {
            (
                omega / (2.0 * (omega * t).tan()),
                -omega / (omega * t).sin(),
            )
        };
        ActionQuadraticForm {
            a,
            b,
            c: a,
            d: 0.0,
            e: 0.0,
            f: 0.0,
        }
    }
}

/// Integrate the fundamental pair and special solution with fixed-step RK4.
pub fn solve_fundamental(
    lambda: &CoefficientProfile,
    mu: &CoefficientProfile,
    settings: &SolverSettings,
) -> Result<FundamentalPair> {
    if settings.steps < 16 {
        return Err(Error::InvalidInput(format!(
            "grid resolution must be >= 16 steps, got {}",
            settings.steps
        )));
    }
    let horizon = lambda.horizon;
    if (mu.horizon - horizon).abs() > 1e-12 * horizon.max(1.0) {
        return Err(Error::InvalidInput(
            "lambda and mu must share the same horizon".into(),
        ));
    }
    let steps = settings.steps + settings.steps % 2;
    let mut pair = integrate(lambda, mu, horizon, steps)?;
    if settings.check_convergence {
        let coarse = integrate(lambda, mu, horizon, steps / 2)?;
        let fine_ut = *pair.u.last().unwrap();
        let coarse_ut = *coarse.u.last().unwrap();
        // RK4: halving the step scales the error by 16.
        pair.richardson_error_u = Some((fine_ut - coarse_ut).abs() / 15.0);
    }
    Ok(pair)
}

fn integrate(
    lambda: &CoefficientProfile,
    mu: &CoefficientProfile,
    horizon: f64,
    steps: usize,
) -> Result<FundamentalPair> {
    let h = horizon / steps as f64;
    let n = steps + 1;
    let mut times = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut du = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut dv = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    let mut lambda_samples = Vec::with_capacity(n);
    let mut mu_samples = Vec::with_capacity(n);

    // State: (u, u', v, v', s, s'). u'' = -lambda u, etc.; s picks up -mu.
    let mut y = [0.0, 1.0, 1.0, 0.0, 0.0, 0.0];
    let rhs = |y: &[f64; 6], lam: f64, m: f64| -> [f64; 6] {
        [
            y[1],
            -lam * y[0],
            y[3],
            -lam * y[2],
            y[5],
            -lam * y[4] - m,
        ]
    };

    for i in 0..n {
        let t = if i == steps { horizon } else { i as f64 * h };
        let lam = lambda.eval(t)?;
        let m = mu.eval(t)?;
        times.push(t);
        u.push(y[0]);
        du.push(y[1]);
        v.push(y[2]);
        dv.push(y[3]);
        s.push(y[4]);
        ds.push(y[5]);
        lambda_samples.push(lam);
        mu_samples.push(m);
        if y.iter().any(|x: &f64| !x.is_finite()) {
            return Err(Error::Integrator {
                t,
                reason: "non-finite state".into(),
            });
        }
        if i == steps {
            break;
        }
        let tm = t + 0.5 * h;
        let t1 = t + h;
        let lam_m = lambda.eval(tm)?;
        let mu_m = mu.eval(tm)?;
        let lam_1 = lambda.eval(t1.min(horizon))?;
        let mu_1 = mu.eval(t1.min(horizon))?;
        let k1 = rhs(&y, lam, m);
        let y2 = add_scaled(&y, &k1, 0.5 * h);
        let k2 = rhs(&y2, lam_m, mu_m);
        let y3 = add_scaled(&y, &k2, 0.5 * h);
        let k3 = rhs(&y3, lam_m, mu_m);
        let y4 = add_scaled(&y, &k3, h);
        let k4 = rhs(&y4, lam_1, mu_1);
        for j in 0..6 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }

    Ok(FundamentalPair {
        times,
        u,
        du,
        v,
        dv,
        s,
        ds,
        lambda_samples,
        mu_samples,
        horizon,
        richardson_error_u: None,
    })
}

fn add_scaled(y: &[f64; 6], k: &[f64; 6], c: f64) -> [f64; 6] {
    let mut out = *y;
    for j in 0..6 {
        out[j] += c * k[j];
    }
    out
}

impl FundamentalPair {
    pub fn u_final(&self) -> f64 {
        *self.u.last().unwrap()
    }

    pub fn v_final(&self) -> f64 {
        *self.v.last().unwrap()
    }

    pub fn s_final(&self) -> f64 {
        *self.s.last().unwrap()
    }

    /// Largest Wronskian deviation `max_t |u v' - u' v + 1|`.
    pub fn wronskian_drift(&self) -> f64 {
        (0..self.times.len())
            .map(|i| (self.u[i] * self.dv[i] - self.du[i] * self.v[i] + 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// The normalized Jacobi field `J(t) = u(t)` (convention `J'(0) = 1`).
    pub fn jacobi_field(&self) -> (&[f64], &[f64]) {
        (&self.times, &self.u)
    }
}

/// Build the trajectory with initial position `a` and momentum `p`.
pub fn solve_trajectory(pair: &FundamentalPair, a: f64, p: f64) -> ClassicalTrajectory {
    let n = pair.times.len();
    let mut x = Vec::with_capacity(n);
    let mut dx = Vec::with_capacity(n);
    for i in 0..n {
        x.push(a * pair.v[i] + p * pair.u[i] + pair.s[i]);
        dx.push(a * pair.dv[i] + p * pair.du[i] + pair.ds[i]);
    }
    let lagrangian: Vec<f64> = (0..n)
        .map(|i| {
            0.5 * dx[i] * dx[i]
                - 0.5 * pair.lambda_samples[i] * x[i] * x[i]
                - pair.mu_samples[i] * x[i]
        })
        .collect();
    let action = simpson(&lagrangian, pair.horizon);
    ClassicalTrajectory {
        a,
        p,
        times: pair.times.clone(),
        x,
        dx,
        action,
    }
}

/// Composite Simpson over uniformly sampled values (even interval count).
pub fn simpson(values: &[f64], length: f64) -> f64 {
    let n = values.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "Simpson needs an even interval count");
    let h = length / n as f64;
    let mut sum = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    sum * h / 3.0
}

/// Detect caustics and count Jacobi-field zeros on `(0, T]`.
pub fn caustic_report(pair: &FundamentalPair, eps_caustic: f64) -> Result<CausticReport> {
    if eps_caustic <= 0.0 {
        return Err(Error::InvalidInput("eps_caustic must be positive".into()));
    }
    let u_max = pair.u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if u_max == 0.0 {
        return Err(Error::InvalidInput(
            "degenerate pair: u vanishes identically".into(),
        ));
    }
    let u_t = pair.u_final();
    let residual = u_t.abs() / u_max;
    let critical = residual <= eps_caustic;
    let tol_zero = 1e-10 * pair.horizon;

    let mut zero_times = Vec::new();
    let n = pair.times.len();
    for i in 1..n - 1 {
        let (a, b) = (pair.u[i - 1], pair.u[i]);
        if a == 0.0 && pair.times[i - 1] > 0.0 {
            zero_times.push(pair.times[i - 1]);
            continue;
        }
        if a * b < 0.0 {
            let z = refine_zero(pair, i - 1, tol_zero);
            if z > tol_zero && z < pair.horizon - tol_zero {
                zero_times.push(z);
            }
        } else if i + 1 < n {
            // Tangential touch: |u| dips to the caustic threshold at an
            // interior local minimum without changing sign.
            let touches = pair.u[i].abs() <= eps_caustic * u_max
                && pair.u[i].abs() <= pair.u[i - 1].abs()
                && pair.u[i].abs() <= pair.u[i + 1].abs()
                && pair.du[i].abs() <= eps_caustic.sqrt() * u_max / pair.horizon;
            if touches && pair.times[i] < pair.horizon * (1.0 - 1e-6) {
                return Err(Error::TangentialZero { t: pair.times[i] });
            }
        }
    }
    // Sign change in the final interval that does not refine to T itself.
    let last = n - 1;
    if pair.u[last - 1] * pair.u[last] < 0.0 {
        let z = refine_zero(pair, last - 1, tol_zero);
        if z < pair.horizon - tol_zero.max(pair.horizon * eps_caustic) && !critical {
            zero_times.push(z);
        }
    }
    if critical {
        zero_times.push(pair.horizon);
    }

    Ok(CausticReport {
        critical,
        u_t,
        caustic_residual: residual,
        k: critical.then(|| pair.v_final()),
        focal_intercept: critical.then(|| pair.s_final()),
        morse_index: zero_times.len(),
        zero_times,
    })
}

/// Bisection on the cubic Hermite interpolant of `u` over grid cell `i`.
fn refine_zero(pair: &FundamentalPair, i: usize, tol: f64) -> f64 {
    let (t0, t1) = (pair.times[i], pair.times[i + 1]);
    let h = t1 - t0;
    let eval = |t: f64| -> f64 {
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * pair.u[i] + h10 * h * pair.du[i] + h01 * pair.u[i + 1] + h11 * h * pair.du[i + 1]
    };
    let (mut lo, mut hi) = (t0, t1);
    let mut flo = eval(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = eval(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Boundary-value action `I(b, T; a, 0)` by quadrature: pick the momentum
/// that lands the trajectory on `b` and integrate the Lagrangian.
pub fn boundary_value_action(pair: &FundamentalPair, initial: f64, final_pos: f64) -> Result<f64> {
    let u_t = pair.u_final();
    let u_max = pair.u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if u_t.abs() <= 1e-12 * u_max {
        return Err(Error::CriticalPotential);
    }
    let p = (final_pos - initial * pair.v_final() - pair.s_final()) / u_t;
    Ok(solve_trajectory(pair, initial, p).action)
}

/// Coefficients of the boundary-value action for a non-critical pair.
///
/// The quadratic part is read off the fundamental pair in closed form:
/// `A = v(T)/2u(T)`, `B = -1/u(T)`, `C = u'(T)/2u(T)`. The `mu`-induced
/// linear and constant terms are fixed operationally from boundary-value
/// action evaluations rather than a closed form.
pub fn action_coefficients(pair: &FundamentalPair, eps_caustic: f64) -> Result<ActionQuadraticForm> {
    let u_t = pair.u_final();
    let u_max = pair.u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if u_max == 0.0 || u_t.abs() <= eps_caustic * u_max {
        return Err(Error::CriticalPotential);
    }
    let a = pair.v_final() / (2.0 * u_t);
    let b = -1.0 / u_t;
    let c = *pair.du.last().unwrap() / (2.0 * u_t);

    let mu_zero = pair.mu_samples.iter().all(|m| *m == 0.0);
    let (d, e, f) = if mu_zero {
        (0.0, 0.0, 0.0)
    } else {
        let i00 = boundary_value_action(pair, 0.0, 0.0)?;
        let i_x = boundary_value_action(pair, 1.0, 0.0)?;
        let i_xm = boundary_value_action(pair, -1.0, 0.0)?;
        let i_y = boundary_value_action(pair, 0.0, 1.0)?;
        let i_ym = boundary_value_action(pair, 0.0, -1.0)?;
        ((i_x - i_xm) / 2.0, (i_y - i_ym) / 2.0, i00)
    };
    Ok(ActionQuadraticForm { a, b, c, d, e, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timefun::CoefficientProfile;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn free_pair(t: f64) -> FundamentalPair {
        solve_fundamental(
            &CoefficientProfile::zero(t),
            &CoefficientProfile::zero(t),
            &SolverSettings::default(),
        )
        .unwrap()
    }

    fn harmonic_pair(omega2: f64, t: f64) -> FundamentalPair {
        solve_fundamental(
            &CoefficientProfile::constant(omega2, t),
            &CoefficientProfile::zero(t),
            &SolverSettings::default(),
        )
        .unwrap()
    }

    #[test]
    fn free_particle_fundamental() {
        let pair = free_pair(1.0);
        for (i, &t) in pair.times.iter().enumerate() {
            assert_abs_diff_eq!(pair.u[i], t, epsilon = 1e-12);
            assert_abs_diff_eq!(pair.v[i], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(pair.s[i], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn harmonic_caustic_endpoint() {
        let pair = harmonic_pair(1.0, PI);
        assert!(pair.u_final().abs() <= 1e-8);
        assert_abs_diff_eq!(pair.v_final(), -1.0, epsilon = 1e-9);
    }

    #[test]
    fn forced_harmonic_special_solution() {
        // lambda = 1, mu = -1 (f = 1), T = pi/2: s(T) = 1 - cos(pi/2) = 1.
        let t = PI / 2.0;
        let pair = solve_fundamental(
            &CoefficientProfile::constant(1.0, t),
            &CoefficientProfile::constant(-1.0, t),
            &SolverSettings::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(pair.s_final(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn wronskian_conserved() {
        let lambda =
            CoefficientProfile::polynomial(vec![1.0, 0.5, -0.3], PI).unwrap();
        let pair = solve_fundamental(
            &lambda,
            &CoefficientProfile::zero(PI),
            &SolverSettings::default(),
        )
        .unwrap();
        assert!(pair.wronskian_drift() <= 1e-9, "{}", pair.wronskian_drift());
    }

    #[test]
    fn free_particle_action() {
        let pair = free_pair(1.0);
        let traj = solve_trajectory(&pair, 0.0, 1.0);
        assert_relative_eq!(traj.action, 0.5, max_relative = 1e-10);
    }

    #[test]
    fn harmonic_action_vanishes_at_caustic() {
        let pair = harmonic_pair(1.0, PI);
        for p in [0.0, 3.0, -1.7] {
            let traj = solve_trajectory(&pair, 1.0, p);
            assert_abs_diff_eq!(traj.action, 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn caustic_report_harmonic_n1() {
        let report = caustic_report(&harmonic_pair(1.0, PI), 1e-8).unwrap();
        assert!(report.critical);
        assert_abs_diff_eq!(report.k.unwrap(), -1.0, epsilon = 1e-8);
        assert_eq!(report.morse_index, 1);
    }

    #[test]
    fn caustic_report_harmonic_n2() {
        let report = caustic_report(&harmonic_pair(4.0, PI), 1e-8).unwrap();
        assert!(report.critical);
        assert_abs_diff_eq!(report.k.unwrap(), 1.0, epsilon = 1e-8);
        assert_eq!(report.morse_index, 2);
    }

    #[test]
    fn caustic_report_noncritical_zero_count() {
        // omega = 2.5, T = pi: zeros of sin(2.5 t) at 0.4 pi and 0.8 pi.
        let report = caustic_report(&harmonic_pair(6.25, PI), 1e-8).unwrap();
        assert!(!report.critical);
        assert_eq!(report.morse_index, 2);
        assert_abs_diff_eq!(report.zero_times[0], 0.4 * PI, epsilon = 1e-8);
        assert_abs_diff_eq!(report.zero_times[1], 0.8 * PI, epsilon = 1e-8);
    }

    #[test]
    fn jacobi_field_analytic() {
        let omega = 2.0;
        let pair = harmonic_pair(omega * omega, PI);
        let (times, j) = pair.jacobi_field();
        for (i, &t) in times.iter().enumerate() {
            assert_abs_diff_eq!(j[i], (omega * t).sin() / omega, epsilon = 1e-10);
        }
    }

    #[test]
    fn stretching_factor_independent_of_v() {
        // k must not depend on which v(0) != 0 solution is used: replace v
        // by v + c u and renormalize by v_c(0).
        let pair = harmonic_pair(1.0, PI);
        let k_ref = pair.v_final();
        for c in [-2.0, 1.0, 5.0] {
            let v_c_t = pair.v_final() + c * pair.u_final();
            let v_c_0 = 1.0; // v(0) + c u(0)
            assert_abs_diff_eq!(v_c_t / v_c_0, k_ref, epsilon = 1e-9);
        }
    }

    #[test]
    fn focal_point_independent_of_momentum() {
        let pair = harmonic_pair(1.0, PI);
        let x0 = solve_trajectory(&pair, 1.0, 0.0).x.last().cloned().unwrap();
        for p in [1.0, -4.0, 10.0] {
            let x = solve_trajectory(&pair, 1.0, p).x.last().cloned().unwrap();
            assert_abs_diff_eq!(x, x0, epsilon = 1e-8);
        }
    }

    #[test]
    fn action_coefficients_free() {
        let form = action_coefficients(&free_pair(1.0), 1e-8).unwrap();
        assert_relative_eq!(form.a, 0.5, max_relative = 1e-10);
        assert_relative_eq!(form.b, -1.0, max_relative = 1e-10);
        assert_relative_eq!(form.c, 0.5, max_relative = 1e-10);
        assert_eq!(form.d, 0.0);
        assert_eq!(form.f, 0.0);
    }

    #[test]
    fn action_coefficients_harmonic_quarter() {
        // omega = 1, T = pi/4: A = C = 1/2, B = -sqrt(2).
        let form = action_coefficients(&harmonic_pair(1.0, PI / 4.0), 1e-8).unwrap();
        assert_relative_eq!(form.a, 0.5, max_relative = 1e-9);
        assert_relative_eq!(form.b, -2.0f64.sqrt(), max_relative = 1e-9);
        assert_relative_eq!(form.c, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn action_coefficients_harmonic_half() {
        // omega = 1, T = pi/2: A = C = 0, B = -1.
        let form = action_coefficients(&harmonic_pair(1.0, PI / 2.0), 1e-8).unwrap();
        assert_abs_diff_eq!(form.a, 0.0, epsilon = 1e-9);
        assert_relative_eq!(form.b, -1.0, max_relative = 1e-9);
        assert_abs_diff_eq!(form.c, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn action_coefficients_match_quadrature() {
        let pair = harmonic_pair(1.0, PI / 4.0);
        let form = action_coefficients(&pair, 1e-8).unwrap();
        for (x0, x1) in [(0.3, -0.7), (1.0, 1.0), (-2.0, 0.5)] {
            let by_quadrature = boundary_value_action(&pair, x0, x1).unwrap();
            assert_relative_eq!(form.action(x0, x1), by_quadrature, max_relative = 1e-8);
        }
    }

    #[test]
    fn action_coefficients_driven() {
        // Driven harmonic oscillator: the full form must match quadrature.
        let t = PI / 4.0;
        let pair = solve_fundamental(
            &CoefficientProfile::constant(1.0, t),
            &CoefficientProfile::constant(-0.8, t),
            &SolverSettings::default(),
        )
        .unwrap();
        let form = action_coefficients(&pair, 1e-8).unwrap();
        assert!(form.d != 0.0 || form.e != 0.0 || form.f != 0.0);
        for (x0, x1) in [(0.0, 0.0), (1.2, -0.4), (-0.9, 2.1)] {
            let by_quadrature = boundary_value_action(&pair, x0, x1).unwrap();
            assert_abs_diff_eq!(form.action(x0, x1), by_quadrature, epsilon = 1e-8);
        }
    }

    #[test]
    fn critical_form_rejected() {
        let err = action_coefficients(&harmonic_pair(1.0, PI), 1e-8).unwrap_err();
        assert!(matches!(err, Error::CriticalPotential));
    }

    #[test]
    fn coarse_grid_rejected() {
        let settings = SolverSettings {
            steps: 8,
            ..SolverSettings::default()
        };
        let err = solve_fundamental(
            &CoefficientProfile::zero(1.0),
            &CoefficientProfile::zero(1.0),
            &settings,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn richardson_estimate_small() {
        let settings = SolverSettings {
            check_convergence: true,
            ..SolverSettings::default()
        };
        let pair = solve_fundamental(
            &CoefficientProfile::constant(1.0, PI),
            &CoefficientProfile::zero(PI),
            &settings,
        )
        .unwrap();
        assert!(pair.richardson_error_u.unwrap() < 1e-10);
    }
}
