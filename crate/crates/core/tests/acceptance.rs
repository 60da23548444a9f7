//! Acceptance run: one PASS/FAIL line per criterion, details indented below.
//!
//! Exits 0 even when a criterion fails so the rest of the workspace suite
//! still runs; set ACCEPTANCE_STRICT=1 to get a nonzero exit on any FAIL.

mod common;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qbm_core::bath_kernels::{bath_fdr, BathSpec, BathSqueeze};
use qbm_core::energy_fdr::*;
use qbm_core::gaussian_state::*;
use qbm_core::oscillator_dynamics::*;
use qbm_core::parallel;
use qbm_core::parametric_mode::*;
use qbm_core::Error;
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = (bool, Vec<String>);
/// Name, check and runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<f64>);

fn spec(gamma: f64) -> OscillatorSpec {
    OscillatorSpec::from_resonance(1.0, 1.0, gamma).unwrap()
}

fn squeezed(beta: f64, eta: f64, theta: f64) -> BathSpec {
    BathSpec::massless(beta, Some(SqueezeParam::new(eta, theta).unwrap()))
}

fn vacuum() -> CovarianceState {
    CovarianceState::new(0.5, 0.5, 0.0)
}

fn parametric_bath(beta: f64, mass_i: f64, mass_f: f64) -> BathSpec {
    let prof = MassProfile {
        mass_i,
        mass_f,
        t_i: 0.0,
        t_f: 2.0,
        shape: ProfileShape::Tanh,
    };
    let sp = squeeze_spectrum(&prof, &log_k_grid(0.01, 50.0, 64).unwrap(), 1e-10).unwrap();
    BathSpec {
        beta,
        squeeze: BathSqueeze::Spectrum(sp),
        mass_i,
        mass_f,
    }
}

fn log_times(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// `n` deterministic draws from a proptest strategy.
fn draws<S: Strategy>(strategy: S, n: usize, seed: u8) -> Vec<S::Value> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn cosh_boost() -> Outcome {
    let sp = spec(0.1);
    let q = QuadratureConfig::with_cutoff(1000.0);
    let t = 30.0 / sp.gamma;
    let xx = |eta: f64| {
        covariance_evolution(&sp, &squeezed(0.3, eta, 0.0), &vacuum(), t, &q)
            .unwrap()
            .xx
    };
    let ratio = xx(1.0) / xx(0.0);
    let rel = (ratio / 2f64.cosh() - 1.0).abs();
    (
        rel < 5e-3,
        vec![format!(
            "xx ratio {ratio:.6} vs cosh 2 = {:.6}, rel {rel:.2e}",
            2f64.cosh()
        )],
    )
}

fn energy_balance() -> Outcome {
    let sp = spec(0.1);
    let q = QuadratureConfig::default();
    let t = [30.0 / sp.gamma];
    let mut ok = true;
    let mut notes = Vec::new();
    for eta in [0.0, 1.0] {
        let r = flux_report(&sp, &squeezed(0.3, eta, 0.0), &vacuum(), &t, &q).unwrap();
        ok &= r.balance_residual < 1e-3;
        notes.push(format!(
            "case A η = {eta}: residual {:.2e} (limit 1e-3)",
            r.balance_residual
        ));
    }
    let r = flux_report(&sp, &parametric_bath(0.3, 0.0, 0.5), &vacuum(), &t, &q).unwrap();
    ok &= r.balance_residual < 1e-2;
    notes.push(format!(
        "case B tanh 0 -> 0.5, 64 k: residual {:.2e} (limit 1e-2)",
        r.balance_residual
    ));
    (ok, notes)
}

fn oscillator_fdr() -> Outcome {
    let sp = spec(0.1);
    let grid: Vec<f64> = (0..1000).map(|i| -10.0 + 20.0 * i as f64 / 999.0).collect();
    let a = fdr_oscillator(&sp, &squeezed(10.0, 1.0, 0.0), &grid).unwrap();
    let pgrid: Vec<f64> = (1..=1000).map(|i| 0.5 + 9.5 * i as f64 / 1000.0).collect();
    let b = fdr_oscillator(&sp, &parametric_bath(1.0, 0.5, 0.25), &pgrid).unwrap();
    (
        a.max_rel_deviation < 1e-10 && b.max_rel_deviation < 1e-6,
        vec![
            format!(
                "massless η = 1, β = 10, 1000 points: {:.2e} (limit 1e-10)",
                a.max_rel_deviation
            ),
            format!(
                "parametric 0.5 -> 0.25 on (0.5, 10]: {:.2e} (limit 1e-6)",
                b.max_rel_deviation
            ),
        ],
    )
}

fn bath_relation() -> Outcome {
    let mut worst = 0.0f64;
    for (mi, mf) in [(0.0, 0.5), (0.5, 0.25)] {
        for beta in [0.1, 1.0, 10.0] {
            let bath = parametric_bath(beta, mi, mf);
            let lo = if mi > 0.0 { 1.001 * mi } else { 1e-3 };
            let (a, b) = (f64::ln(lo), f64::ln(1e3));
            for i in 0..=400 {
                let w = (a + (b - a) * i as f64 / 400.0).exp();
                for s in [1.0, -1.0] {
                    let (lhs, rhs) = bath_fdr(s * w, &bath).unwrap();
                    worst = worst.max((lhs - rhs).abs() / lhs.abs());
                }
            }
        }
    }
    (
        worst < 1e-10,
        vec![format!(
            "worst relative gap {worst:.2e} over 2 profiles x 3 temperatures (limit 1e-10)"
        )],
    )
}

fn decay_classes() -> Outcome {
    let sp = spec(0.1);
    let q = QuadratureConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for theta in [0.0, PI / 6.0, PI / 2.0] {
        let (ns, st) = ns_st_split(&sp, &squeezed(0.3, 1.0, theta), 15.0 / sp.gamma, &q).unwrap();
        ok &= ns.abs() < 1e-2 * st;
        notes.push(format!(
            "I_NS/I_ST at 15/γ, θ = {theta:.3}: {:.2e}",
            (ns / st).abs()
        ));
    }
    let window = log_times(20.0, 200.0, 8);
    let eps = QuadratureConfig::with_epsilon(0.05);
    for (n, target) in [(1u32, -2.0), (2, -2.0), (0, -3.0)] {
        let quad = if n == 0 { &eps } else { &q };
        let fit = jn_falloff(&sp, 1.0, n, &window, quad).unwrap();
        ok &= (fit.exponent - target).abs() <= 0.3;
        let past = jn_falloff(&sp, 1.0, n, &log_times(100.0, 1000.0, 6), quad).unwrap();
        notes.push(format!(
            "J n = {n}: exponent {:.3} on [20, 200] (target {target} ± 0.3); {:.3} on [100, 1000]",
            fit.exponent, past.exponent
        ));
    }
    (ok, notes)
}

fn two_time_stationarity() -> Outcome {
    let sp = spec(0.1);
    let q = QuadratureConfig::default();
    let eta = 1.0f64;
    let bath = squeezed(f64::INFINITY, eta, 0.0);
    let n = 9;
    let ts: Vec<f64> = (0..n)
        .map(|i| 20.0 + 20.0 * i as f64 / (n - 1) as f64)
        .collect();
    let cells = parallel::map_range(n * n, |c| {
        let k = chi_hadamard(&sp, &bath, ts[c / n], ts[c % n], &q).unwrap();
        // squeeze factors divided out: cosh 2η on one part, sinh 2η on the other
        (
            k.stationary / (2.0 * eta).cosh(),
            k.nonstationary / (2.0 * eta).sinh(),
        )
    });
    let worst_ratio = cells
        .iter()
        .map(|(st, ns)| (ns / st).abs())
        .fold(0.0, f64::max);
    let mut worst_spread = 0.0f64;
    for d in 0..n - 1 {
        let vals: Vec<f64> = (0..n - d).map(|i| cells[(i + d) * n + i].0).collect();
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        worst_spread = worst_spread.max((hi - lo) / hi.abs().max(lo.abs()));
    }
    (
        worst_ratio < 1e-2 && worst_spread < 1e-3,
        vec![
            format!("worst |NS|/|ST| on the 9x9 grid: {worst_ratio:.2e} (limit 1e-2)"),
            format!(
                "worst spread of ST along t + t' at fixed t - t': {worst_spread:.2e} (limit 1e-3)"
            ),
        ],
    )
}

fn invariant_suites() -> Outcome {
    let n = 1000;
    let mut ok = true;
    let mut notes = Vec::new();
    let mut report = |name: &str, fails: usize, extra: String| {
        ok &= fails == 0;
        notes.push(format!("{name}: {fails}/{n} draws fail{extra}"));
    };

    let cases = draws((0.0f64..80.0, 0.0f64..0.9, 0.1f64..5.0), n, 1);
    let fails = parallel::map(&cases, |&(t, g, w)| {
        let w = fundamental_solutions(&OscillatorSpec::from_resonance(1.0, w, g).unwrap(), t)
            .unwrap()
            .wronskian();
        (w - (-2.0 * g * t).exp()).abs() >= 1e-10
    });
    report(
        "oscillator Wronskian = e^{-2γt}",
        fails.iter().filter(|f| **f).count(),
        String::new(),
    );

    let shapes = proptest::prop_oneof![
        proptest::strategy::Just(ProfileShape::Tanh),
        (1u32..5).prop_map(ProfileShape::SmoothStep),
        proptest::strategy::Just(ProfileShape::Step),
    ];
    let cases = draws(
        (0.05f64..20.0, 0.0f64..1.5, 0.0f64..1.5, 0.2f64..5.0, shapes),
        n,
        2,
    );
    let fails = parallel::map(&cases, |&(k, mi, mf, width, shape)| {
        let p = MassProfile {
            mass_i: mi,
            mass_f: mf,
            t_i: 0.0,
            t_f: width,
            shape,
        };
        let grid: Vec<f64> = (0..=8).map(|i| (width + 2.0) * i as f64 / 8.0).collect();
        let sol = integrate_mode(k, &p, &grid, 1e-10).unwrap();
        let mode = sol.max_wronskian_drift() >= 1e-8;
        let pair = bogoliubov_from_mode(&sol, k.hypot(mi), width + 1.0).unwrap();
        let scale = pair.alpha.norm_sqr() + pair.beta.norm_sqr();
        (mode, pair.wronskian_defect().abs() >= 1e-8 * scale)
    });
    report(
        "mode Wronskian = 1",
        fails.iter().filter(|f| f.0).count(),
        String::new(),
    );
    report(
        "|α|² − |β|² = 1",
        fails.iter().filter(|f| f.1).count(),
        String::new(),
    );

    let cases = draws(
        (
            0.01f64..0.5,
            0.1f64..10.0,
            0.0f64..2.0,
            0.0f64..(2.0 * PI),
            0.0f64..60.0,
            0.0f64..1.0,
        ),
        n,
        3,
    );
    let quad = QuadratureConfig::default();
    let dets = parallel::map(&cases, |&(g, beta, eta, theta, t, sq)| {
        let init = CovarianceState::from_decomposition(
            &StateDecomposition::new(
                1.0,
                SqueezeParam {
                    eta: sq,
                    theta: 0.0,
                },
            ),
            1.0,
            1.0,
        );
        covariance_evolution(&spec(g), &squeezed(beta, eta, theta), &init, t, &quad)
            .unwrap()
            .determinant()
    });
    let worst = dets.iter().cloned().fold(f64::INFINITY, f64::min);
    report(
        "Robertson-Schrödinger along trajectories",
        dets.iter().filter(|d| **d < 0.25 - 1e-9).count(),
        format!(", smallest det {worst:.12}"),
    );

    let cases = draws(
        (
            1.0f64..100.0,
            0.0f64..5.0,
            0.0f64..(2.0 * PI),
            0.2f64..5.0,
            0.2f64..5.0,
        ),
        n,
        4,
    );
    let errs = parallel::map(&cases, |&(xi, eta, theta, m, w)| {
        let cov = CovarianceState::from_decomposition(
            &StateDecomposition::new(xi, SqueezeParam { eta, theta }),
            m,
            w,
        );
        let d = extract_squeeze(&cov, m, w).unwrap();
        let th = if eta > 1e-6 {
            angle_gap(d.squeeze.theta, theta)
        } else {
            0.0
        };
        ((d.xi - xi).abs() / xi)
            .max((d.squeeze.eta - eta).abs())
            .max(th)
    });
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    report(
        "squeeze round trip within 1e-8",
        errs.iter().filter(|e| **e >= 1e-8).count(),
        format!(", worst {worst:.2e}; f64 covariances carry ~2ε·cosh²2η in det near η = 5"),
    );

    let cases = draws((0.01f64..100.0, 0.1f64..10.0), n, 5);
    let fails = parallel::map(&cases, |&(beta, w)| {
        let cov = CovarianceState::thermal(1.0, w, beta);
        let x = beta * w;
        let nbar = 1.0 / x.exp_m1();
        let s = nbar * (nbar + 1.0);
        let tol = 1e-12 + 8.0 * f64::EPSILON * (0.25 + s) / (s * (1.0 + s) * x);
        match effective_temperature(&cov, w) {
            Ok(b) => (b - beta).abs() > tol * beta,
            Err(Error::InvalidState(_)) => !(cov.uncertainty() <= 0.0 && x > 30.0),
            Err(_) => true,
        }
    });
    report(
        "β_eff of a thermal state = β",
        fails.iter().filter(|f| **f).count(),
        String::new(),
    );
    (ok, notes)
}

fn finite_coupling() -> Outcome {
    let q = QuadratureConfig::with_cutoff(1000.0);
    let init = CovarianceState::new(2.0, 1.0, 0.0);
    let bath = BathSpec::massless(10.0, None);
    let mut ok = true;
    let mut notes = Vec::new();
    let mut plateaus = Vec::new();
    for g in [0.3, 0.1, 0.03] {
        let sp = spec(g);
        let times: Vec<f64> = (1..=30).map(|i| 15.0 / g * i as f64 / 30.0).collect();
        let rows = parallel::map(&times, |&t| {
            let c = covariance_evolution(&sp, &bath, &init, t, &q).unwrap();
            let d = extract_squeeze(&c, sp.m, sp.omega_r).unwrap();
            ((2.0 * d.squeeze.eta).sinh().powi(2), d.squeeze.theta.sin())
        });
        let late: Vec<f64> = rows[24..].iter().map(|r| r.0).collect();
        let plateau = late.iter().sum::<f64>() / late.len() as f64;
        let drift = late.iter().map(|v| (v - plateau).abs()).fold(0.0, f64::max) / plateau;
        let early_sin = rows[..10].iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        let late_sin = rows[24..].iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        ok &= drift < 0.05 && late_sin < early_sin;
        plateaus.push(plateau);
        notes.push(format!(
            "γ = {g}: sinh²2η plateau {plateau:.4e} (spread {drift:.1e}); max |sin θ| early {early_sin:.3}, late {late_sin:.3}"
        ));
    }
    ok &= plateaus.windows(2).all(|w| w[0] > w[1]);
    notes.push("plateaus ordered 0.3 > 0.1 > 0.03".to_string());
    (ok, notes)
}

fn oracle_equivalence() -> Outcome {
    let sp = spec(0.1);
    let f = f_aux(&sp, 5.0, 0.7).unwrap();
    let conv = (f - common::convolution_oracle(0.1, 1.0, 0.7, 5.0)).norm();

    let eps = 0.1;
    let quad = QuadratureConfig {
        rel_tol: 1e-10,
        ..QuadratureConfig::with_epsilon(eps)
    };
    let zero = CovarianceState::new(0.0, 0.0, 0.0);
    let mut dbl = 0.0f64;
    for &(eta, theta, t) in &[(0.0, 0.0, 2.0), (0.5, 0.3, 5.0)] {
        let got = covariance_evolution(&sp, &squeezed(f64::INFINITY, eta, theta), &zero, t, &quad)
            .unwrap()
            .xx;
        let want = common::xx_double_integral(&sp, eta, theta, eps, t, 1600);
        dbl = dbl.max((got - want).abs() / want.abs());
    }

    let lq = OscillatorSpec::new(1.0, 1.0, 0.1).unwrap();
    let q = QuadratureConfig::default();
    let got = late_time_covariance(&lq, &BathSpec::massless(1.0, None), &q)
        .unwrap()
        .xx;
    let want = common::late_xx_oracle(&lq, 1.0, q.cutoff, 10_000_000);
    let trap = (got - want).abs() / want;
    (
        conv < 1e-8 && dbl < 1e-4 && trap < 1e-6,
        vec![
            format!("f vs direct convolution: {conv:.2e} (limit 1e-8)"),
            format!("covariance vs double time integral, t <= 5: {dbl:.2e} relative (limit 1e-4)"),
            format!("late xx vs 10^7-point trapezoid: {trap:.2e} relative (limit 1e-6)"),
        ],
    )
}

fn main() {
    // the libtest flags cargo forwards (e.g. --nocapture) are ignored
    let criteria: [Criterion; 9] = [
        ("cosh 2η boost", cosh_boost, Some(30.0)),
        ("energy balance", energy_balance, Some(120.0)),
        ("oscillator FDR pointwise", oscillator_fdr, Some(10.0)),
        ("bath FDR (parametric)", bath_relation, None),
        ("nonstationarity decay classes", decay_classes, None),
        ("two-time stationarity", two_time_stationarity, None),
        ("invariant suites", invariant_suites, Some(60.0)),
        ("finite-coupling trajectories", finite_coupling, None),
        ("oracle equivalence", oracle_equivalence, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (mut ok, mut notes) = run();
        let secs = start.elapsed().as_secs_f64();
        if let Some(b) = budget {
            ok &= secs < *b;
            notes.push(format!("runtime {secs:.1} s (budget {b} s)"));
        } else {
            notes.push(format!("runtime {secs:.1} s"));
        }
        println!("{} {}. {name}", if ok { "PASS" } else { "FAIL" }, i + 1);
        for n in notes {
            println!("    {n}");
        }
        failed += usize::from(!ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && failed > 0 {
        std::process::exit(1);
    }
}
