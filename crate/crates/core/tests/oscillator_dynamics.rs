use num_complex::Complex64;
use proptest::prelude::*;
use qbm_core::bath_kernels::{BathSpec, BathSqueeze};
use qbm_core::gaussian_state::{CovarianceState, SqueezeParam};
use qbm_core::oscillator_dynamics::*;
mod common;

use common::*;

fn spec() -> OscillatorSpec {
    OscillatorSpec::from_resonance(1.0, 1.0, 0.1).unwrap()
}

fn squeezed(beta: f64, eta: f64, theta: f64) -> BathSpec {
    BathSpec::massless(beta, Some(SqueezeParam::new(eta, theta).unwrap()))
}

#[test]
fn f_matches_direct_convolution() {
    let (gamma, big_omega, w, t) = (0.1, 1.0, 0.7, 5.0);
    let sp = OscillatorSpec::from_resonance(1.0, big_omega, gamma).unwrap();
    let acc = convolution_oracle(gamma, big_omega, w, t);
    let got = f_aux(&sp, t, w).unwrap();
    assert!((got - acc).norm() < 1e-8, "{got} vs {acc}");
}

#[test]
fn covariance_matches_double_time_integral() {
    let sp = spec();
    let eps = 0.1;
    let quad = QuadratureConfig {
        rel_tol: 1e-10,
        ..QuadratureConfig::with_epsilon(eps)
    };
    let zero = CovarianceState::new(0.0, 0.0, 0.0);
    for &(eta, theta, t) in &[(0.0, 0.0, 2.0), (0.5, 0.3, 2.0), (0.5, 0.3, 5.0)] {
        let bath = squeezed(f64::INFINITY, eta, theta);
        let got = covariance_evolution(&sp, &bath, &zero, t, &quad)
            .unwrap()
            .xx;
        let want = xx_double_integral(&sp, eta, theta, eps, t, 1600);
        assert!(
            (got - want).abs() < 1e-4 * want.abs(),
            "η {eta} t {t}: {got} vs {want}"
        );
    }
}

#[test]
fn d2_transform_matches_sampled_response() {
    let sp = spec();
    let w = 0.5;
    // e^{−γt} is below 1e-17 by t = 400
    let n = 40_000;
    let h = 400.0 / n as f64;
    let ws = simpson_weights(n, h);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, wt) in ws.iter().enumerate() {
        let t = i as f64 * h;
        acc += Complex64::from_polar(d2_closed(t, 0.1, 1.0) * wt, w * t);
    }
    let got = d2_fourier(&sp, w);
    assert!((got - acc).norm() < 1e-4 * got.norm(), "{got} vs {acc}");
}

#[test]
fn d2_at_physical_frequency() {
    let sp = spec();
    let d = d2_fourier(&sp, sp.omega_r);
    let want = 1.0 / (2.0 * sp.gamma * sp.omega_r);
    assert!(d.re.abs() < 1e-12 * want);
    assert!((d.im - want).abs() < 1e-12 * want);
}

#[test]
fn massive_root_small_mass_expansion() {
    let (gamma, big_omega) = (0.1f64, 1.0f64);
    let expansion =
        |m: f64| gamma - gamma * m * m / (2.0 * (big_omega * big_omega + gamma * gamma));
    let err = |m: f64| (massive_roots(gamma, big_omega, m).unwrap().upsilon - expansion(m)).abs();
    let (a, b) = (err(0.05), err(0.025));
    assert!(a < 10.0 * 0.05f64.powi(4), "{a}");
    // fourth order: halving the mass cuts the gap by ~16
    assert!(a / b > 12.0 && a / b < 20.0, "ratio {}", a / b);
    let p = massive_roots(gamma, big_omega, 0.05).unwrap();
    assert!(p.upsilon < gamma && p.varpi > 0.0);
}

#[test]
fn massive_fundamental_solutions_keep_wronskian() {
    let sp = spec();
    let bath = BathSpec {
        beta: 1.0,
        squeeze: BathSqueeze::None,
        mass_i: 0.2,
        mass_f: 0.2,
    };
    let resp = Response::for_bath(&sp, &bath).unwrap();
    let p = massive_roots(sp.gamma, sp.resonance(), 0.2).unwrap();
    assert_eq!((resp.decay, resp.freq), (p.upsilon, p.varpi));
    for &t in &[0.0, 0.3, 4.0, 17.0, 60.0] {
        let w = resp.solutions(t).wronskian();
        assert!(
            (w - (-2.0 * p.upsilon * t).exp()).abs() < 1e-10,
            "t = {t}: {w}"
        );
    }
}

#[test]
fn late_time_forgets_the_squeeze_angle() {
    let sp = spec();
    let quad = QuadratureConfig::default();
    let init = CovarianceState::new(0.5, 0.5, 0.0);
    let t = 30.0 / sp.gamma;
    let a = covariance_evolution(&sp, &squeezed(0.3, 1.0, 0.0), &init, t, &quad).unwrap();
    let b = covariance_evolution(&sp, &squeezed(0.3, 1.0, 2.1), &init, t, &quad).unwrap();
    assert!((a.xx - b.xx).abs() < 1e-3 * a.xx, "{} vs {}", a.xx, b.xx);
    assert!((a.pp - b.pp).abs() < 1e-3 * a.pp, "{} vs {}", a.pp, b.pp);
}

#[test]
fn late_variance_against_frequency_oracle() {
    let sp = spec();
    let beta = 0.3;
    let quad = QuadratureConfig::default();
    let init = CovarianceState::new(0.5, 0.5, 0.0);
    let t = 30.0 / sp.gamma;
    let thermal = covariance_evolution(&sp, &BathSpec::massless(beta, None), &init, t, &quad)
        .unwrap()
        .xx;

    let want = late_xx_oracle(&sp, beta, quad.cutoff, 2_000_000);
    assert!((thermal - want).abs() < 1e-3 * want, "{thermal} vs {want}");

    let boosted = covariance_evolution(&sp, &squeezed(beta, 1.0, 0.0), &init, t, &quad)
        .unwrap()
        .xx;
    let ratio = boosted / thermal;
    assert!((ratio - 2f64.cosh()).abs() < 1e-3, "ratio {ratio}");
}

#[test]
fn variance_grows_with_temperature() {
    let sp = spec();
    let quad = QuadratureConfig::default();
    let mut last = 0.0;
    for &temp in &[0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let xx = late_time_covariance(&sp, &BathSpec::massless(1.0 / temp, None), &quad)
            .unwrap()
            .xx;
        assert!(xx > last, "T = {temp}: {xx} after {last}");
        last = xx;
    }
}

#[test]
fn nonstationary_part_dies_out() {
    let sp = spec();
    let quad = QuadratureConfig::default();
    for &t in &[15.0 / sp.gamma, 200.0, 300.0] {
        let (ns, st) = ns_st_split(&sp, &squeezed(0.3, 1.0, 0.0), t, &quad).unwrap();
        assert!(st > 0.0);
        assert!(ns.abs() < 1e-2 * st, "t = {t}: {ns} / {st}");
    }
    // I_ST at late times does not care about θ
    let t = 300.0;
    let (_, a) = ns_st_split(&sp, &squeezed(0.3, 1.0, 0.0), t, &quad).unwrap();
    let (_, b) = ns_st_split(&sp, &squeezed(0.3, 1.0, 4.0), t, &quad).unwrap();
    assert!((a - b).abs() < 1e-3 * a);
}

#[test]
fn uncertainty_holds_along_trajectory() {
    let sp = spec();
    let quad = QuadratureConfig::default();
    let init = CovarianceState::new(0.5, 0.5, 0.0);
    for bath in [
        squeezed(0.3, 1.0, 0.7),
        squeezed(f64::INFINITY, 0.5, 0.0),
        BathSpec::massless(2.0, None),
    ] {
        for i in 0..=20 {
            let t = 2.5 * i as f64;
            let c = covariance_evolution(&sp, &bath, &init, t, &quad).unwrap();
            assert!(
                c.determinant() >= 0.25 - 1e-9,
                "t = {t}: det {}",
                c.determinant()
            );
        }
    }
}

#[test]
fn hadamard_diagonal_is_driven_variance() {
    let sp = spec();
    let quad = QuadratureConfig::default();
    let bath = squeezed(0.5, 0.8, 1.1);
    for &t in &[0.5, 3.0, 12.0] {
        let h = chi_hadamard(&sp, &bath, t, t, &quad).unwrap();
        let xx = covariance_evolution(&sp, &bath, &CovarianceState::new(0.0, 0.0, 0.0), t, &quad)
            .unwrap()
            .xx;
        assert!(
            (h.total - xx).abs() < 1e-8 * xx,
            "t = {t}: {} vs {xx}",
            h.total
        );
        let swapped = chi_hadamard(&sp, &bath, t, 0.5 * t, &quad).unwrap();
        let again = chi_hadamard(&sp, &bath, 0.5 * t, t, &quad).unwrap();
        assert!((swapped.total - again.total).abs() < 1e-10 * h.total.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wronskian_decays_at_twice_the_damping(t in 0.0f64..80.0, gamma in 0.0f64..0.9, big_omega in 0.1f64..5.0) {
        let sp = OscillatorSpec::from_resonance(1.0, big_omega, gamma).unwrap();
        let w = fundamental_solutions(&sp, t).unwrap().wronskian();
        prop_assert!((w - (-2.0 * gamma * t).exp()).abs() < 1e-10, "{}", w);
    }

    #[test]
    fn f_dot_is_the_derivative_of_f(t in 0.1f64..40.0, w in -5.0f64..5.0) {
        let sp = spec();
        let h = 1e-5;
        let fd = (f_aux(&sp, t + h, w).unwrap() - f_aux(&sp, t - h, w).unwrap()) / (2.0 * h);
        let an = f_dot(&sp, t, w).unwrap();
        prop_assert!((fd - an).norm() < 1e-6, "{} vs {}", fd, an);
        if w != 0.0 {
            let via_g = Complex64::new(0.0, -w) * d2_fourier(&sp, w) * Complex64::from_polar(1.0, -w * t) * g_aux(&sp, t, w).unwrap();
            prop_assert!((via_g - an).norm() < 1e-12 * an.norm().max(1.0));
        }
    }
}
