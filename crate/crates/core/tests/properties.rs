use std::f64::consts::PI;

use eop_core::dynamics::{
    mandel, mean_n, mean_n2, norm_const, norm_const_series, timescales, weights, CoherentState,
};
use eop_core::mass::{MassKind, MassProfile};
use eop_core::polynomials::{
    admissible, jacobi_p, ode_residual, xm_jacobi, xm_jacobi_jet, xm_norm, xm_overlap, JacobiParams, XmParams,
};
use eop_core::scarf::{energy, shape_invariance_residual, SystemParams};
use eop_core::specfun::{bessel_i_scaled, gamma, integrate_de};
use eop_core::validation::gram_error;
use proptest::prelude::*;

fn admissible_params() -> impl Strategy<Value = XmParams> {
    (-0.9f64..4.0, -0.9f64..4.0, 0u32..=2).prop_filter_map("inadmissible", |(a, b, m)| {
        // Stay away from the boundaries of the admissible region, where the
        // denominator has a node close to the interval ends.
        let clear = (a - b).abs() > 0.05 && b.abs() > 0.05 && (a - m as f64 + 1.0).abs() > 0.05;
        (clear && admissible(a, b, m).is_admissible()).then(|| XmParams::new(a, b, m).ok()).flatten()
    })
}

fn profile() -> impl Strategy<Value = MassProfile> {
    prop_oneof![
        Just(MassProfile::constant()),
        (0.1f64..3.0).prop_map(|l| MassProfile::new(MassKind::Wos, l).unwrap()),
        (0.1f64..3.0).prop_map(|l| MassProfile::new(MassKind::Ws, l).unwrap()),
    ]
}

fn coherent_params() -> impl Strategy<Value = SystemParams> {
    admissible_params().prop_filter_map("sigma <= -1/2", |x| {
        (x.sigma() > -0.45).then(|| SystemParams::new(x, 1.0, 1.0).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_recurrence(nu in 0.05f64..8.0, z in 0.1f64..100.0) {
        let lo = bessel_i_scaled(nu - 1.0, z).unwrap();
        let mid = bessel_i_scaled(nu, z).unwrap();
        let hi = bessel_i_scaled(nu + 1.0, z).unwrap();
        prop_assert!(((lo - hi) - 2.0 * nu / z * mid).abs() <= 1e-10 * lo.max(hi));
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let a = gamma(x + 1.0).unwrap();
        prop_assert!((a - x * gamma(x).unwrap()).abs() <= 1e-12 * a);
    }

    #[test]
    fn monomials_integrate_exactly(p in 0i32..=10, shift in -0.5f64..0.5) {
        let exact = ((1.0 - shift).powi(p + 1) - (-1.0 - shift).powi(p + 1)) / (p + 1) as f64;
        let got = integrate_de(|g| (g - shift).powi(p), 1e-14).unwrap().value;
        prop_assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0));
    }

    #[test]
    fn lowest_degree_is_reduced_classical(x in admissible_params(), g in -0.99f64..0.99) {
        let m = x.m;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let want = sign * (1.0 - m as f64 / (x.alpha + 1.0))
            * jacobi_p(m as i32, JacobiParams::new(-x.alpha - 2.0, x.beta), g);
        prop_assert!((xm_jacobi(m, &x, g).unwrap() - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn ode_is_satisfied(x in admissible_params(), j in 0u32..=6, g in -0.95f64..0.95) {
        let n = x.m + j;
        let scale = xm_jacobi_jet(n, &x, g).unwrap().d2.abs().max(1.0);
        prop_assert!(ode_residual(n, &x, g).unwrap().abs() <= 1e-8 * scale);
    }

    #[test]
    fn spectrum_starts_at_zero_and_increases(p in coherent_params(), n in 1u32..200) {
        prop_assert_eq!(energy(&p, 0), 0.0);
        prop_assert!(energy(&p, n) > energy(&p, n - 1));
    }

    #[test]
    fn mu_derivative_is_root_mass(prof in profile(), u in -0.95f64..0.95) {
        let x = u * prof.half_width(1.0);
        let h = 1e-5 * prof.half_width(1.0);
        let d = (prof.mu(x + h).unwrap() - prof.mu(x - h).unwrap()) / (2.0 * h);
        let want = prof.mass(x).unwrap().sqrt();
        prop_assert!((d - want).abs() <= 1e-6 * want);
    }

    #[test]
    fn shape_invariance(x in admissible_params(), prof in profile(), u in -0.99f64..0.99, k in 0.5f64..2.0) {
        let p = SystemParams::new(x, k, 1.0).unwrap();
        let r = shape_invariance_residual(&p, &prof, u * prof.half_width(k)).unwrap();
        prop_assert!(r.abs() <= 1e-9 * k * k);
    }

    #[test]
    fn closed_forms_match_series(p in coherent_params(), j in 0.01f64..80.0) {
        let w = weights(&p, j, 250).unwrap();
        let total: f64 = w.iter().sum();
        let s1 = w.iter().enumerate().map(|(n, w)| n as f64 * w).sum::<f64>() / total;
        let s2 = w.iter().enumerate().map(|(n, w)| (n * n) as f64 * w).sum::<f64>() / total;
        let q = (s2 - s1 * s1) / s1 - 1.0;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(rel(norm_const(&p, j).unwrap(), norm_const_series(&p, j, 250).unwrap()) < 1e-10);
        prop_assert!(rel(mean_n(&p, j).unwrap(), s1) < 1e-10);
        prop_assert!(rel(mean_n2(&p, j).unwrap(), s2) < 1e-10);
        // Q is a small difference of O(<n>) terms; compare on that scale.
        prop_assert!((mandel(&p, j).unwrap() - q).abs() < 1e-10 * s1.max(1.0));
    }

    #[test]
    fn mandel_is_sub_poissonian(p in coherent_params(), j in 1e-6f64..1e4) {
        prop_assert!(mandel(&p, j).unwrap() < 0.0);
    }

    #[test]
    fn tail_is_bounded(p in coherent_params(), j in 0.1f64..80.0) {
        let cs = CoherentState::new(&p, j, 50).unwrap();
        let sum: f64 = cs.weights().iter().sum();
        prop_assert!(cs.tail() <= cs.tail_bound());
        prop_assert!((sum + cs.tail() - 1.0).abs() < 1e-12);
        prop_assert!(sum <= 1.0 + 1e-12 && sum >= 1.0 - cs.tail_bound() - 1e-12);
    }

    #[test]
    fn autocorrelation_revives(two_sigma in 0u32..8, m in 0u32..=2, j in 1.0f64..80.0, t in 0.0f64..13.0) {
        // alpha = 3/2 and beta chosen so that 2 sigma is the given integer.
        let beta = two_sigma as f64 + 2.0 * m as f64 - 1.5;
        let Ok(p) = SystemParams::unit(1.5, beta, m) else { return Ok(()) };
        prop_assume!(p.sigma() > -0.5);
        let cs = CoherentState::new(&p, j, 50).unwrap();
        let t_rev = timescales(&p, j).unwrap().t_rev;
        let a = cs.autocorrelation_sq(t);
        prop_assert!((a - cs.autocorrelation_sq(t + t_rev)).abs() < 1e-9);
        prop_assert!((a - cs.autocorrelation_sq_double_sum(t)).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
        prop_assert_eq!(t_rev, 4.0 * PI);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn xm_orthogonality(x in admissible_params(), dn in 0u32..=6, dl in 0u32..=6) {
        let (n, l) = (x.m + dn, x.m + dl);
        let q = xm_overlap(n, l, &x, 1e-13).unwrap();
        let cf = xm_norm(n, l, &x).unwrap();
        if n == l {
            prop_assert!((q - cf).abs() <= 1e-8 * cf.abs());
        } else {
            let scale = (xm_norm(n, n, &x).unwrap() * xm_norm(l, l, &x).unwrap()).sqrt();
            prop_assert!(q.abs() <= 1e-8 * scale.max(1.0));
        }
    }

    #[test]
    fn eigenstates_are_orthonormal(x in admissible_params(), prof in profile()) {
        let p = SystemParams::new(x, 1.0, 1.0).unwrap();
        prop_assert!(gram_error(&p, &prof, 5).unwrap() < 1e-8);
    }
}
