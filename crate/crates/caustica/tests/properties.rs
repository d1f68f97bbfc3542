//! Property tests for the structural invariants: Wronskian conservation,
//! action degeneracy at caustics, kernel moduli, norm preservation and the
//! variance/susceptibility inequalities.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use caustica::classical::{self, ActionQuadraticForm, SolverSettings};
use caustica::kernel;
use caustica::oracle::{self, GridState};
use caustica::slit::{self, SlitSetup};
use caustica::timefun::CoefficientProfile;

fn poly_lambda() -> impl Strategy<Value = (CoefficientProfile, f64)> {
    (
        -20.0f64..20.0,
        -8.0f64..8.0,
        -8.0f64..8.0,
        0.5f64..2.0,
    )
        .prop_map(|(c0, c1, c2, t)| {
            (
                CoefficientProfile::polynomial(vec![c0, c1, c2], t).unwrap(),
                t,
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wronskian_is_conserved((lambda, t) in poly_lambda()) {
        let mu = CoefficientProfile::zero(t);
        let pair = classical::solve_fundamental(&lambda, &mu, &SolverSettings::default()).unwrap();
        // For unstable lambda the pair grows exponentially and the absolute
        // drift scales with the product of the solution magnitudes.
        let growth: f64 = (0..pair.times.len())
            .map(|i| pair.u[i].abs() * pair.dv[i].abs() + pair.du[i].abs() * pair.v[i].abs())
            .fold(1.0, f64::max);
        let bound = 1e-9 * growth;
        prop_assert!(pair.wronskian_drift() <= bound,
            "drift {} exceeds {}", pair.wronskian_drift(), bound);
    }

    #[test]
    fn action_is_p_independent_at_caustics(
        n in 1usize..3,
        f in -3.0f64..3.0,
        a in -2.0f64..2.0,
        p in -5.0f64..5.0,
    ) {
        // Harmonic caustic omega T = n pi with a constant drive.
        let t = n as f64 * PI;
        let lambda = CoefficientProfile::constant(1.0, t);
        let mu = CoefficientProfile::constant(-f, t);
        let pair = classical::solve_fundamental(&lambda, &mu, &SolverSettings::default()).unwrap();
        let at_rest = classical::solve_trajectory(&pair, a, 0.0).action;
        let moving = classical::solve_trajectory(&pair, a, p).action;
        let scale = 1.0 + at_rest.abs() + p * p;
        prop_assert!((at_rest - moving).abs() <= 1e-6 * scale,
            "action {} vs {} at p = {}", at_rest, moving, p);
    }

    #[test]
    fn regular_kernel_has_fixed_modulus(
        fa in -3.0f64..3.0,
        fb in 0.1f64..4.0,
        fc in -3.0f64..3.0,
        sign in proptest::bool::ANY,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        hbar in 0.1f64..2.0,
        m in 0usize..4,
    ) {
        let form = ActionQuadraticForm {
            a: fa,
            b: if sign { fb } else { -fb },
            c: fc,
            d: 0.3,
            e: -0.1,
            f: 0.7,
        };
        let value = kernel::regular_kernel(&form, m, hbar, a, b).unwrap();
        let expect = (form.b.abs() / (2.0 * PI * hbar)).sqrt();
        prop_assert!((value.norm() - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn critical_pushforward_preserves_norm(
        omega in 0.5f64..2.0,
        a in -1.5f64..1.5,
        sigma0 in 0.3f64..1.2,
        tau in 0.5f64..2.0,
    ) {
        // omega T = pi, so k = -1 and the symmetric grid maps onto itself.
        let t = PI / omega;
        let lambda = CoefficientProfile::constant(omega * omega, t);
        let mu = CoefficientProfile::zero(t);
        let pair = classical::solve_fundamental(&lambda, &mu, &SolverSettings::default()).unwrap();
        let report = classical::caustic_report(&pair, 1e-8).unwrap();
        prop_assume!(report.critical);
        let kernel = kernel::critical_kernel(&report, &pair, 1.0).unwrap();

        let state = slit::initial_state(&SlitSetup::new(a, sigma0, tau, 1.0).unwrap());
        let grid = GridState::from_gaussian(&state, -12.0, 12.0, 1024);
        let xs = grid.grid();
        let pushed = kernel::apply_critical_kernel(&kernel, &xs, &grid.samples, &xs);
        let h = grid.dx();
        let norm_in: f64 = grid.samples.iter().map(|c| c.norm_sqr() * h).sum::<f64>();
        let norm_out: f64 = pushed.iter().map(|c| c.norm_sqr() * h).sum::<f64>();
        prop_assert!((norm_out - norm_in).abs() <= 1e-8 * norm_in,
            "norm {} -> {}", norm_in, norm_out);
    }

    #[test]
    fn evolve_agrees_with_variance_split(
        omega in 0.2f64..2.5,
        t in 0.3f64..1.2,
        a in -2.0f64..2.0,
        sigma0 in 0.3f64..2.0,
        tau in 0.5f64..3.0,
    ) {
        prop_assume!((omega * t).sin().abs() > 0.05);
        let setup = SlitSetup::new(a, sigma0, tau, 1.0).unwrap();
        let form = ActionQuadraticForm::harmonic(omega, t);
        let closed = slit::evolve(&setup, &form, 0).unwrap();
        let split = slit::variance_split(&setup, &form).unwrap();
        prop_assert!((closed.sigma() - split.sigma()).abs() <= 1e-9 * split.sigma());
        // The closed-form evolution keeps the state normalized.
        prop_assert!((closed.norm - 1.0).abs() <= 1e-9, "norm {}", closed.norm);
    }

    #[test]
    fn susceptibility_is_quantum_suppressed(
        omega in 0.2f64..2.5,
        t in 0.3f64..1.2,
        sigma0 in 0.3f64..2.0,
        p in -2.0f64..2.0,
        hbar in 0.05f64..2.0,
    ) {
        prop_assume!((omega * t).sin().abs() > 0.05);
        let setup = SlitSetup::with_momentum(1.0, sigma0, p, hbar).unwrap();
        let form = ActionQuadraticForm::harmonic(omega, t);
        let out = slit::susceptibility(&setup, &form).unwrap();
        prop_assert!(out.s >= 0.0);
        prop_assert!(out.s <= out.jacobi_abs + 1e-12,
            "S {} > |J| {}", out.s, out.jacobi_abs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn oracle_propagation_is_linear(
        a1 in -1.0f64..1.0,
        a2 in -1.0f64..1.0,
        wr in -1.0f64..1.0,
        wi in -1.0f64..1.0,
    ) {
        let t = 0.5;
        let lambda = CoefficientProfile::constant(1.0, t);
        let mu = CoefficientProfile::zero(t);
        let pack = |a: f64| {
            let state = slit::initial_state(&SlitSetup::new(a, 0.5, 1.0, 1.0).unwrap());
            GridState::from_gaussian(&state, -10.0, 10.0, 512)
        };
        let g1 = pack(a1);
        let g2 = pack(a2);
        let w = Complex64::new(wr, wi);
        let mut combined = g1.clone();
        for (c, s2) in combined.samples.iter_mut().zip(&g2.samples) {
            *c += w * s2;
        }
        let u1 = oracle::propagate(&g1, &lambda, &mu, 1.0, 0.0, t, 64).unwrap();
        let u2 = oracle::propagate(&g2, &lambda, &mu, 1.0, 0.0, t, 64).unwrap();
        let uc = oracle::propagate(&combined, &lambda, &mu, 1.0, 0.0, t, 64).unwrap();
        let mut worst = 0.0f64;
        for i in 0..uc.samples.len() {
            worst = worst.max((uc.samples[i] - u1.samples[i] - w * u2.samples[i]).norm());
        }
        prop_assert!(worst <= 1e-11, "superposition defect {}", worst);
    }

    #[test]
    fn profile_roundtrips_through_json((lambda, _t) in poly_lambda()) {
        let text = serde_json::to_string(&lambda).unwrap();
        let back: CoefficientProfile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, lambda);
    }
}
