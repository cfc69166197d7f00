use abc_contrast::closed_form::{gaussian_g, psi_tg, rho_beta, rho_beta_abs2, AbcParameter, Packet1D};
use abc_contrast::detection::{contrast_infinity, p_abc_time_integral};
use abc_contrast::numerics::{erfc_complex, exp_erfc_scaled, QuadratureSpec};
use abc_contrast::pde_oracle::{contractivity_check, evolve_robin, Grid1D};
use abc_contrast::scattering_2d::{dp_abc_dtheta_farfield, dp_st_dtheta, Packet2D};
use num_complex::Complex64;
use proptest::prelude::*;

/// Fourth-order central first derivative.
fn d1<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative.
fn d2<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
}

fn beta_strategy() -> impl Strategy<Value = Complex64> {
    (-5.0..5.0f64, 0.5..20.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_form_obeys_the_robin_condition(
        k0 in 0.5..8.0f64, beta in beta_strategy(), l in 1.0..6.0f64, t in 0.1..3.0f64,
    ) {
        let f = |x: f64| psi_tg(x, t, k0, beta, l);
        let dpsi = d1(f, l, 1e-3);
        let bpsi = beta * f(l);
        let scale = dpsi.norm() + bpsi.norm() + f64::MIN_POSITIVE;
        prop_assert!((dpsi - bpsi).norm() < 1e-6 * scale, "{dpsi} vs {bpsi}");
    }

    #[test]
    fn closed_form_obeys_the_schroedinger_equation(
        k0 in 0.5..6.0f64, beta in beta_strategy(), l in 1.0..6.0f64,
        t in 0.2..3.0f64, x in -3.0..1.0f64,
    ) {
        let dt = d1(|s| psi_tg(x, s, k0, beta, l), t, 1e-3);
        let dxx = d2(|y| psi_tg(y, t, k0, beta, l), x, 1e-3);
        let lhs = 2.0 * Complex64::i() * dt;
        let scale = lhs.norm() + dxx.norm() + f64::MIN_POSITIVE;
        prop_assert!((lhs + dxx).norm() < 1e-5 * scale, "2i psi_t = {lhs}, psi_xx = {dxx}");
    }

    #[test]
    fn reflection_amplitude_conjugation_symmetry(k in 0.0..50.0f64, beta in beta_strategy()) {
        let mirrored = Complex64::new(-beta.re, beta.im);
        let a = rho_beta(k, beta).unwrap();
        let b = rho_beta(k, mirrored).unwrap();
        prop_assert!((a.conj() - b).norm() < 1e-14 * (1.0 + a.norm()));
        prop_assert!((rho_beta_abs2(k, beta) - a.norm_sqr()).abs() < 1e-12);
        prop_assert!(rho_beta_abs2(k, beta) <= 1.0 + 1e-15);
        prop_assert!(rho_beta_abs2(k, beta) >= -1e-15);
    }

    #[test]
    fn scaled_erfc_agrees_with_the_plain_product(
        x in -4.0..4.0f64, y in -4.0..4.0f64, a_re in -5.0..5.0f64, a_im in -5.0..5.0f64,
    ) {
        let z = Complex64::new(x, y);
        let a = Complex64::new(a_re, a_im);
        let direct = a.exp() * erfc_complex(z);
        let scaled = exp_erfc_scaled(a, z).unwrap();
        prop_assert!((direct - scaled).norm() <= 1e-12 * direct.norm().max(1e-300), "{direct} vs {scaled}");
    }

    #[test]
    fn erfc_symmetries(x in -4.0..4.0f64, y in -3.0..3.0f64) {
        let z = Complex64::new(x, y);
        let e = erfc_complex(z);
        let scale = 1.0 + e.norm();
        prop_assert!((erfc_complex(-z) - (2.0 - e)).norm() < 1e-13 * scale);
        prop_assert!((erfc_complex(z.conj()) - e.conj()).norm() < 1e-13 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn probabilities_stay_in_the_unit_interval(
        k0 in -6.0..8.0f64, beta in beta_strategy(), l in 4.0..12.0f64,
    ) {
        let p = Packet1D::gaussian(k0);
        let b = AbcParameter::physical(beta).unwrap();
        let spec = QuadratureSpec::default();
        let abc = p_abc_time_integral(&p, &b, l, &spec).unwrap();
        let c = contrast_infinity(&p, &b, &spec).unwrap();
        prop_assert!((0.0..=1.0).contains(&abc.value), "{abc:?}");
        prop_assert!((0.0..=1.0).contains(&c.value), "{c:?}");
        let mirrored = AbcParameter::physical(Complex64::new(-beta.re, beta.im)).unwrap();
        let c2 = contrast_infinity(&p, &mirrored, &spec).unwrap();
        prop_assert!((c.value - c2.value).abs() < 1e-9, "sign of Re beta changed C: {} vs {}", c.value, c2.value);
    }

    #[test]
    fn angular_densities_are_nonnegative(
        kx in -6.0..6.0f64, ky in -6.0..6.0f64, kappa in 0.5..10.0f64, frac in 0.01..0.99f64,
    ) {
        let p = Packet2D::new(kx, ky).unwrap();
        let alpha = std::f64::consts::FRAC_PI_2;
        let theta = alpha - std::f64::consts::PI * frac;
        let spec = QuadratureSpec::default();
        let st = dp_st_dtheta(&p, theta, &spec).unwrap();
        let far = dp_abc_dtheta_farfield(&p, theta, Complex64::new(0.0, kappa), alpha, &spec).unwrap();
        prop_assert!(st >= 0.0 && far >= 0.0, "{st} {far}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn discrete_norm_never_grows_under_an_absorbing_boundary(
        k0 in -4.0..4.0f64, re in -3.0..3.0f64, im in 0.0..10.0f64,
    ) {
        let grid = Grid1D::new(-15.0, 5.0, 2001, 5e-3).unwrap();
        let psi0 = grid.sample(|x| Complex64::from_polar(gaussian_g(x), k0 * x));
        let (_, ledger) = evolve_robin(&psi0, Complex64::new(re, im), &grid, 2.0).unwrap();
        for w in ledger.norms.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-13), "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn evolution_is_contractive(
        ka in -4.0..4.0f64, kb in -4.0..4.0f64, shift in -2.0..2.0f64, im in 0.0..10.0f64,
    ) {
        let grid = Grid1D::new(-15.0, 5.0, 2001, 5e-3).unwrap();
        let a = grid.sample(|x| Complex64::from_polar(gaussian_g(x), ka * x));
        let b = grid.sample(|x| Complex64::from_polar(gaussian_g(x - shift), kb * x));
        let r = contractivity_check(&a, &b, Complex64::new(0.5, im), &grid, 1.0).unwrap();
        prop_assert!(r.max_increase <= 1e-13 * r.initial_distance.powi(2), "{r:?}");
        prop_assert!(r.final_distance <= r.initial_distance * (1.0 + 1e-13));
    }
}
