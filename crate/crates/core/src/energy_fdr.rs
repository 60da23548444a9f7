//! Energy exchange between detector and bath, the late-time power balance,
//! falloff of the nonstationary power terms, and fluctuation-dissipation
//! relations for the detector.

use crate::bath_kernels::{BathSpec, BathSqueeze};
use crate::error::{domain, Error, Result};
use crate::gaussian_state::CovarianceState;
use crate::oscillator_dynamics::{
    covariance_evolution, noise_integral, OscillatorSpec, QuadratureConfig, Response,
};
use crate::parallel;
use crate::quadrature::{
    bessel_j1, coth_half, integrate, Domain, IntegralSpec, Regulator, Tolerance,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Powers delivered by the noise (P_ξ) and returned through damping (P_γ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxReport {
    pub times: Vec<f64>,
    pub p_xi: Vec<f64>,
    pub p_gamma: Vec<f64>,
    /// |P_ξ + P_γ| / |P_γ| at the last time.
    pub balance_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdrReport {
    pub omegas: Vec<f64>,
    pub hadamard_side: Vec<f64>,
    pub dissipation_side: Vec<f64>,
    pub max_rel_deviation: f64,
}

/// P_ξ(t) = 8πγ ∫ noise measure × {−sinh 2η·2Re[e^{−iωt}e^{iθ}ḟ] + cosh 2η·2Re[e^{iωt}ḟ]}.
pub fn power_in(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain(format!("t must be >= 0, got {t}")));
    }
    let resp = Response::for_bath(spec, bath)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let v = noise_integral(bath, &resp, quad, 2.0 * t, true, |w, sq| {
        let (_, fd) = resp.f_and_dot(t, w);
        let back = Complex64::from_polar(1.0, sq.theta - w * t);
        let fwd = Complex64::from_polar(1.0, w * t);
        [-sq.sinh2() * 2.0 * (back * fd).re + sq.cosh2() * 2.0 * (fwd * fd).re]
    })?;
    Ok(8.0 * PI * spec.gamma * v.0[0])
}

/// P_γ(t) = −(2Υ/m)⟨p²(t)⟩, Υ being the decay rate of the detector
/// (γ for the massless bath).
pub fn power_out(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    init: &CovarianceState,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let resp = Response::for_bath(spec, bath)?;
    if spec.gamma == 0.0 {
        return Ok(0.0);
    }
    let cov = covariance_evolution(spec, bath, init, t, quad)?;
    Ok(-2.0 * resp.decay / spec.m * cov.pp)
}

/// Stationary power P(∞) = 8πγ ∫ noise measure × cosh 2η_κ · 2ω Im d̃₂(ω).
pub fn late_time_power(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let resp = Response::for_bath(spec, bath)?;
    let v = noise_integral(bath, &resp, quad, 0.0, true, |w, sq| {
        [sq.cosh2() * 2.0 * w * resp.d2_fourier(w).im]
    })?;
    Ok(8.0 * PI * spec.gamma * v.0[0])
}

/// Sample both powers on `times` and report the balance at the last time.
pub fn flux_report(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    init: &CovarianceState,
    times: &[f64],
    quad: &QuadratureConfig,
) -> Result<FluxReport> {
    if times.is_empty() {
        return Err(Error::Shape("flux report needs at least one time".into()));
    }
    let rows = parallel::map(times, |&t| -> Result<(f64, f64)> {
        Ok((
            power_in(spec, bath, t, quad)?,
            power_out(spec, bath, init, t, quad)?,
        ))
    });
    let mut p_xi = Vec::with_capacity(times.len());
    let mut p_gamma = Vec::with_capacity(times.len());
    for r in rows {
        let (a, b) = r?;
        p_xi.push(a);
        p_gamma.push(b);
    }
    let (a, b) = (*p_xi.last().unwrap(), *p_gamma.last().unwrap());
    Ok(FluxReport {
        times: times.to_vec(),
        p_xi,
        p_gamma,
        balance_residual: (a + b).abs() / b.abs(),
    })
}

/// Relative rate |d⟨p²⟩/dt| / ⟨p²⟩ at time t, by central difference.
pub fn stationarity(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    init: &CovarianceState,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let h = 0.05;
    let ahead = covariance_evolution(spec, bath, init, t + h, quad)?.pp;
    let behind = covariance_evolution(spec, bath, init, (t - h).max(0.0), quad)?.pp;
    let mid = covariance_evolution(spec, bath, init, t, quad)?.pp;
    Ok(((ahead - behind) / (t + h - (t - h).max(0.0))).abs() / mid)
}

/// Thermal weight for J: `Single(n)` is e^{−nβω}, `Tail(n)` is
/// Σ_{n′ ≥ n} e^{−n′βω} = e^{−nβω}/(1 − e^{−βω}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JTerm {
    Single(u32),
    Tail(u32),
}

/// J(t) = ∫(dω/2π)(ω/4π) w(ω)(−iω d̃₂(ω) e^{−2iωt}) for the thermal weight w.
/// The vacuum term (n = 0) needs the exponential regulator in `quad`.
pub fn jn_value(
    spec: &OscillatorSpec,
    beta: f64,
    term: JTerm,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    spec.validate()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain("beta must be positive and finite"));
    }
    let resp = spec.response();
    let (n, tail) = match term {
        JTerm::Single(n) => (n, false),
        JTerm::Tail(n) => (n, true),
    };
    if tail && n == 0 {
        return Err(domain("the thermal tail starts at n = 1"));
    }
    let regulator = if n == 0 {
        match quad.regulator() {
            Some(r @ Regulator::Exponential(_)) => Some(r),
            _ => {
                return Err(Error::Configuration(
                    "the vacuum term needs the exponential regulator (epsilon > 0)".into(),
                ))
            }
        }
    } else {
        None
    };
    let rate = n as f64 * beta;
    let norm = 1.0 / (8.0 * PI * PI);
    let integrand = move |w: f64| {
        let mut weight = w * (-rate * w).exp();
        if tail {
            weight /= -(-beta * w).exp_m1();
        }
        Complex64::new(0.0, -w)
            * resp.d2_fourier(w)
            * Complex64::from_polar(norm * weight, -2.0 * w * t)
    };
    // the decay rate sets where the thermal weight is negligible
    let upper = if rate > 0.0 {
        60.0 / rate
    } else {
        f64::INFINITY
    };
    let domain_ = if upper.is_finite() {
        Domain::Finite(0.0, upper)
    } else {
        Domain::SemiInfinite(0.0)
    };
    let breaks = vec![
        resp.freq - 3.0 * resp.decay,
        resp.freq,
        resp.freq + 3.0 * resp.decay,
    ];
    // at large t |J| is many orders below ∫|integrand|, which sets the
    // roundoff floor of any quadrature; ask for no better than that
    let scale = integrate(
        &IntegralSpec::new(move |w: f64| integrand(w).norm(), domain_)
            .regulator(regulator)
            .breakpoints(breaks.clone()),
        &Tolerance {
            rel: 1e-6,
            abs: 0.0,
            max_subdivisions: quad.max_subdivisions,
        },
    )?
    .value;
    let spec_ = IntegralSpec::new(integrand, domain_)
        .regulator(regulator)
        .oscillation(2.0 * t)
        .breakpoints(breaks);
    let tol = Tolerance {
        rel: quad.rel_tol.min(1e-9),
        abs: 1e-13 * scale,
        max_subdivisions: quad.max_subdivisions,
    };
    Ok(integrate(&spec_, &tol)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalloffFit {
    pub exponent: f64,
    pub times: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

/// Least-squares slope of ln|J| against ln t. For n ≥ 1 the thermal tail
/// Σ_{n′≥n} J_{n′} is fitted (the part of the coth weight from level n up);
/// n = 0 fits the vacuum term.
pub fn jn_falloff(
    spec: &OscillatorSpec,
    beta: f64,
    n: u32,
    t_list: &[f64],
    quad: &QuadratureConfig,
) -> Result<FalloffFit> {
    if t_list.len() < 3 {
        return Err(Error::Estimation(
            "need at least three times to fit a slope".into(),
        ));
    }
    let (lo, hi) = t_list
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &t| (a.min(t), b.max(t)));
    if !(lo > 0.0) || hi / lo < 10.0 {
        return Err(Error::Estimation(format!(
            "fit window [{lo}, {hi}] spans less than a decade"
        )));
    }
    let term = if n == 0 {
        JTerm::Single(0)
    } else {
        JTerm::Tail(n)
    };
    let values = parallel::map(t_list, |&t| jn_value(spec, beta, term, t, quad));
    let mut magnitudes = Vec::with_capacity(t_list.len());
    for v in values {
        magnitudes.push(v?.norm());
    }
    let xs: Vec<f64> = t_list.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = magnitudes.iter().map(|m| m.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(FalloffFit {
        exponent: sxy / sxx,
        times: t_list.to_vec(),
        magnitudes,
    })
}

/// Retarded function of the detector including the bath's dissipation,
/// (1/m)/(ω_r² − ω² − 2iγ sgn(ω) κ). The real self-energy is absorbed into ω_r.
pub fn detector_retarded(spec: &OscillatorSpec, bath: &BathSpec, omega: f64) -> Complex64 {
    let kappa = bath.kappa(omega);
    let denom = Complex64::new(
        spec.omega_r * spec.omega_r - omega * omega,
        -2.0 * spec.gamma * omega.signum() * kappa,
    );
    denom.inv() / spec.m
}

/// Both sides of the detector's FDR on `omega_grid`: the Hadamard transform
/// e²|G̃_R|² (κ/4π) coth(β|ω|/2) cosh 2η_κ, and the dissipation side
/// coth(βω/2) cosh 2η_κ Im G̃_R(ω). Frequencies at or below the field
/// threshold are dropped.
pub fn fdr_oscillator(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    omega_grid: &[f64],
) -> Result<FdrReport> {
    spec.validate()?;
    bath.validate()?;
    let massless = bath.mass_i == 0.0 && !matches!(bath.squeeze, BathSqueeze::Spectrum(_));
    let e2 = 8.0 * PI * spec.gamma * spec.m;
    let mut report = FdrReport {
        omegas: Vec::new(),
        hadamard_side: Vec::new(),
        dissipation_side: Vec::new(),
        max_rel_deviation: 0.0,
    };
    for &w in omega_grid {
        if !(w.abs() > bath.mass_i) {
            continue;
        }
        let cosh2 = bath.squeeze_at_frequency(w).cosh2();
        let (had, dis) = if massless {
            let d = spec.response().d2_fourier(w);
            let had = 2.0 * spec.gamma * w.abs() / spec.m
                * cosh2
                * coth_half(bath.beta * w.abs())
                * d.norm_sqr();
            let dis = coth_half(bath.beta * w) * cosh2 * d.im / spec.m;
            (had, dis)
        } else {
            let g = detector_retarded(spec, bath, w);
            let noise = bath.kappa(w) / (4.0 * PI) * coth_half(bath.beta * w.abs()) * cosh2;
            (
                e2 * g.norm_sqr() * noise,
                coth_half(bath.beta * w) * cosh2 * g.im,
            )
        };
        let dev = (had - dis).abs() / had.abs().max(dis.abs()).max(f64::MIN_POSITIVE);
        report.max_rel_deviation = report.max_rel_deviation.max(dev);
        report.omegas.push(w);
        report.hadamard_side.push(had);
        report.dissipation_side.push(dis);
    }
    if report.omegas.is_empty() {
        return Err(Error::BelowThreshold(
            "no frequency in the grid is above threshold".into(),
        ));
    }
    Ok(report)
}

/// Endpoint contribution of the memory tail at coincidence.
///
/// The non-contact part of the kernel, (m/τ)J₁(mτ), stays finite (→ m²/2)
/// as τ → 0, so ∫₀^δ (m/τ)J₁(mτ)dτ must vanish with δ. Starting from the
/// window length and halving `levels` times, returns the contribution of
/// the last window. The full memory integral over the window must be finite.
pub fn gamma_kernel_check(mass: f64, t_range: (f64, f64), levels: u32) -> Result<f64> {
    if !(mass >= 0.0) {
        return Err(domain("mass must be >= 0"));
    }
    let (t0, t1) = t_range;
    if !(t1 > t0) {
        return Err(domain("need a non-empty time window"));
    }
    if mass == 0.0 {
        return Ok(0.0);
    }
    let tail = move |tau: f64| {
        if tau == 0.0 {
            0.5 * mass * mass
        } else {
            mass / tau * bessel_j1(mass * tau)
        }
    };
    let tol = Tolerance {
        rel: 1e-12,
        abs: 1e-300,
        max_subdivisions: 10_000,
    };
    let whole = integrate(
        &IntegralSpec::new(tail, Domain::Finite(0.0, t1 - t0)).oscillation(mass),
        &tol,
    )?;
    if !whole.value.is_finite() {
        return Err(Error::Convergence {
            message: "memory integral is not finite".into(),
            partial: whole.value,
            error: whole.error,
        });
    }
    let delta = (t1 - t0) * 0.5f64.powi(levels as i32);
    let end = integrate(&IntegralSpec::new(tail, Domain::Finite(0.0, delta)), &tol)?;
    Ok(end.value.abs())
}
