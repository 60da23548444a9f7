//! Detector oscillator driven by the bath: fundamental solutions, the
//! auxiliary response functions f and ḟ, covariance evolution and the
//! two-time Hadamard function.

use crate::bath_kernels::{check_spectrum_tail, spectrum_breakpoints, BathSpec, KernelValue};
use crate::error::{domain, Error, Result};
use crate::gaussian_state::{CovarianceState, SqueezeParam};
use crate::quadrature::{integrate, Domain, IntegralSpec, Vector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use crate::quadrature::QuadratureConfig;

/// Oscillator mass, physical frequency and damping γ = e²/8πm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    pub m: f64,
    pub omega_r: f64,
    pub gamma: f64,
}

impl OscillatorSpec {
    pub fn new(m: f64, omega_r: f64, gamma: f64) -> Result<Self> {
        let s = OscillatorSpec { m, omega_r, gamma };
        s.validate()?;
        Ok(s)
    }

    /// Spec with resonance frequency Ω instead of ω_r.
    pub fn from_resonance(m: f64, resonance: f64, gamma: f64) -> Result<Self> {
        Self::new(m, resonance.hypot(gamma), gamma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) || !(self.omega_r > 0.0) || !(self.gamma >= 0.0) {
            return Err(domain(format!(
                "need m > 0, omega_r > 0, gamma >= 0; got ({}, {}, {})",
                self.m, self.omega_r, self.gamma
            )));
        }
        if !(self.omega_r > self.gamma) {
            return Err(Error::UnsupportedRegime(format!(
                "only the underdamped regime omega_r > gamma is supported (omega_r = {}, gamma = {})",
                self.omega_r, self.gamma
            )));
        }
        Ok(())
    }

    /// Coupling e with e² = 8πγm.
    pub fn coupling(&self) -> f64 {
        (8.0 * PI * self.gamma * self.m).sqrt()
    }

    /// Resonance frequency Ω = √(ω_r² − γ²).
    pub fn resonance(&self) -> f64 {
        ((self.omega_r - self.gamma) * (self.omega_r + self.gamma)).sqrt()
    }

    pub fn response(&self) -> Response {
        Response {
            m: self.m,
            decay: self.gamma,
            freq: self.resonance(),
        }
    }
}

/// Decay rate and oscillation frequency of the detector after coupling to
/// a massive bath, from the root 𝔷 of the local equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassiveOscParams {
    pub upsilon: f64,
    pub varpi: f64,
    pub root: Complex64,
}

/// 𝔷 = −√(γ² − Ω² ∓ 2γ√(m_f² − Ω²)) on the branch that tends to −γ + iΩ as
/// m_f → 0. The other sign gives the complex conjugate.
pub fn massive_roots(gamma: f64, resonance: f64, mass_f: f64) -> Result<MassiveOscParams> {
    if !(gamma >= 0.0) || !(resonance > 0.0) || !(mass_f >= 0.0) {
        return Err(domain("need gamma >= 0, resonance > 0, mass >= 0"));
    }
    if mass_f >= resonance {
        return Err(Error::UnsupportedRegime(format!(
            "field mass {mass_f} is not below the resonance {resonance}; root branch is ambiguous"
        )));
    }
    let q = ((resonance - mass_f) * (resonance + mass_f)).sqrt();
    let inner = Complex64::new(gamma * gamma - resonance * resonance, -2.0 * gamma * q);
    let root = -inner.sqrt();
    Ok(MassiveOscParams {
        upsilon: -root.re,
        varpi: root.im.abs(),
        root,
    })
}

/// Both branches of [`massive_roots`].
pub fn massive_root_pair(
    gamma: f64,
    resonance: f64,
    mass_f: f64,
) -> Result<(Complex64, Complex64)> {
    let p = massive_roots(gamma, resonance, mass_f)?;
    let q = ((resonance - mass_f) * (resonance + mass_f)).sqrt();
    let other = -Complex64::new(gamma * gamma - resonance * resonance, 2.0 * gamma * q).sqrt();
    Ok((p.root, other))
}

/// Damped response d₂ of the local equation χ̈ + 2Υχ̇ + (ϖ² + Υ²)χ = F/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub m: f64,
    pub decay: f64,
    pub freq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSolutions {
    pub d1: f64,
    pub d2: f64,
    pub d1_dot: f64,
    pub d2_dot: f64,
}

impl FundamentalSolutions {
    pub fn wronskian(&self) -> f64 {
        self.d1 * self.d2_dot - self.d1_dot * self.d2
    }
}

impl Response {
    /// Response for the given bath: massless uses (γ, Ω), a massive final
    /// field uses the roots (Υ, ϖ).
    pub fn for_bath(spec: &OscillatorSpec, bath: &BathSpec) -> Result<Self> {
        spec.validate()?;
        if bath.mass_f > 0.0 {
            let p = massive_roots(spec.gamma, spec.resonance(), bath.mass_f)?;
            Ok(Response {
                m: spec.m,
                decay: p.upsilon,
                freq: p.varpi,
            })
        } else {
            Ok(spec.response())
        }
    }

    /// ϖ² + Υ², the squared frequency in the denominator of d̃₂.
    pub fn omega_sq(&self) -> f64 {
        self.freq * self.freq + self.decay * self.decay
    }

    pub fn solutions(&self, t: f64) -> FundamentalSolutions {
        let e = (-self.decay * t).exp();
        let (s, c) = (self.freq * t).sin_cos();
        let sinc = s / self.freq;
        FundamentalSolutions {
            d1: e * (c + self.decay * sinc),
            d2: e * sinc,
            d1_dot: -e * self.omega_sq() * sinc,
            d2_dot: e * (c - self.decay * sinc),
        }
    }

    /// d̃₂(ω) = 1/(ϖ² + Υ² − ω² − 2iΥω), transform convention ∫dt e^{+iωt}.
    pub fn d2_fourier(&self, omega: f64) -> Complex64 {
        Complex64::new(self.omega_sq() - omega * omega, -2.0 * self.decay * omega).inv()
    }

    /// f(t; ω) = ∫₀ᵗ ds d₂(t−s) e^{−iωs} and its time derivative.
    pub fn f_and_dot(&self, t: f64, omega: f64) -> (Complex64, Complex64) {
        let s = self.solutions(t);
        let d = self.d2_fourier(omega);
        let phase = Complex64::from_polar(1.0, -omega * t);
        let f = d * (phase - s.d1 + Complex64::new(0.0, omega * s.d2));
        let fd = d
            * (Complex64::new(0.0, -omega) * phase - s.d1_dot
                + Complex64::new(0.0, omega * s.d2_dot));
        (f, fd)
    }

    /// Frequencies where the resonance makes the integrands sharp.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        for &k in &[-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0] {
            let p = self.freq + k * self.decay;
            if p > 0.0 {
                pts.push(p);
            }
        }
        pts
    }
}

/// d₁, d₂ and their derivatives for the massless bath.
pub fn fundamental_solutions(spec: &OscillatorSpec, t: f64) -> Result<FundamentalSolutions> {
    spec.validate()?;
    if !(t >= 0.0) {
        return Err(domain(format!("t must be >= 0, got {t}")));
    }
    Ok(spec.response().solutions(t))
}

pub fn f_aux(spec: &OscillatorSpec, t: f64, omega: f64) -> Result<Complex64> {
    spec.validate()?;
    if !(t >= 0.0) {
        return Err(domain(format!("t must be >= 0, got {t}")));
    }
    Ok(spec.response().f_and_dot(t, omega).0)
}

/// ḟ(t; ω) = −iω d̃₂(ω) e^{−iωt} g(t; ω), evaluated without the 1/ω in g.
pub fn f_dot(spec: &OscillatorSpec, t: f64, omega: f64) -> Result<Complex64> {
    spec.validate()?;
    if !(t >= 0.0) {
        return Err(domain(format!("t must be >= 0, got {t}")));
    }
    Ok(spec.response().f_and_dot(t, omega).1)
}

/// g(t; ω) = 1 − i e^{iωt} ḋ₁/ω − ḋ₂ e^{iωt}. It has a simple pole at ω = 0
/// whenever ḋ₁(t) ≠ 0; use [`f_dot`] there.
pub fn g_aux(spec: &OscillatorSpec, t: f64, omega: f64) -> Result<Complex64> {
    spec.validate()?;
    if omega == 0.0 {
        return Err(domain(
            "g has a pole at omega = 0; use f_dot, which stays finite",
        ));
    }
    let s = spec.response().solutions(t);
    let phase = Complex64::from_polar(1.0, omega * t);
    Ok(Complex64::new(1.0, 0.0) - Complex64::new(0.0, s.d1_dot / omega) * phase - phase * s.d2_dot)
}

pub fn d2_fourier(spec: &OscillatorSpec, omega: f64) -> Complex64 {
    spec.response().d2_fourier(omega)
}

/// Integrate `g(ω, squeeze)` against the bath's noise measure
/// (dω/2π)(κ/4π)coth(βω/2) over ω above threshold.
pub(crate) fn noise_integral<const N: usize, G>(
    bath: &BathSpec,
    resp: &Response,
    quad: &QuadratureConfig,
    hint: f64,
    divergent: bool,
    g: G,
) -> Result<Vector<N>>
where
    G: Fn(f64, SqueezeParam) -> [f64; N] + Sync,
{
    bath.validate()?;
    check_spectrum_tail(bath)?;
    let norm = 1.0 / (8.0 * PI * PI);
    let integrand = |w: f64| {
        let weight = norm * bath.kappa_coth(w);
        let mut v = g(w, bath.squeeze_at_frequency(w));
        for x in v.iter_mut() {
            *x *= weight;
        }
        Vector(v)
    };
    let mut breaks = resp.breakpoints();
    breaks.extend(spectrum_breakpoints(bath));
    let spec = IntegralSpec::new(integrand, Domain::SemiInfinite(bath.mass_i))
        .regulator(quad.regulator())
        .oscillation(hint)
        .breakpoints(breaks)
        .divergent(divergent);
    Ok(integrate(&spec, &quad.tolerance())?.value)
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("t must be finite and >= 0, got {t}")))
    }
}

/// Bath-driven parts of (xx, pp, xp) at time t, without the initial state.
pub fn driven_covariance(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<CovarianceState> {
    check_time(t)?;
    let resp = Response::for_bath(spec, bath)?;
    if t == 0.0 {
        return Ok(CovarianceState::new(0.0, 0.0, 0.0));
    }
    let v = noise_integral(bath, &resp, quad, 2.0 * t, true, |w, sq| {
        let (f, fd) = resp.f_and_dot(t, w);
        let rot = Complex64::from_polar(1.0, sq.theta);
        let (c, s) = (sq.cosh2(), sq.sinh2());
        [
            -s * 2.0 * (f * f * rot).re + c * 2.0 * f.norm_sqr(),
            -s * 2.0 * (fd * fd * rot).re + c * 2.0 * fd.norm_sqr(),
            -s * 2.0 * (f * fd * rot).re + c * 2.0 * (f * fd.conj()).re,
        ]
    })?;
    let e2 = 8.0 * PI * spec.gamma * spec.m;
    Ok(CovarianceState::new(
        e2 / (spec.m * spec.m) * v.0[0],
        e2 * v.0[1],
        e2 / spec.m * v.0[2],
    ))
}

/// Homogeneous (initial-state) parts of the covariance at time t.
pub fn homogeneous_covariance(resp: &Response, init: &CovarianceState, t: f64) -> CovarianceState {
    let s = resp.solutions(t);
    let m = resp.m;
    CovarianceState::new(
        s.d1 * s.d1 * init.xx + s.d2 * s.d2 * init.pp / (m * m) + 2.0 * s.d1 * s.d2 * init.xp / m,
        m * m * s.d1_dot * s.d1_dot * init.xx
            + s.d2_dot * s.d2_dot * init.pp
            + 2.0 * m * s.d1_dot * s.d2_dot * init.xp,
        m * s.d1 * s.d1_dot * init.xx
            + s.d2 * s.d2_dot * init.pp / m
            + (s.d1 * s.d2_dot + s.d2 * s.d1_dot) * init.xp,
    )
}

/// Covariance of the detector at time t from initial covariance `init`.
pub fn covariance_evolution(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    init: &CovarianceState,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<CovarianceState> {
    check_time(t)?;
    let resp = Response::for_bath(spec, bath)?;
    let h = homogeneous_covariance(&resp, init, t);
    let d = driven_covariance(spec, bath, t, quad)?;
    Ok(CovarianceState::new(h.xx + d.xx, h.pp + d.pp, h.xp + d.xp))
}

/// (I_NS, I_ST) of the position variance for a constant-squeeze bath.
pub fn ns_st_split(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    check_time(t)?;
    if matches!(bath.squeeze, crate::bath_kernels::BathSqueeze::Spectrum(_)) {
        return Err(Error::Configuration(
            "the I_NS/I_ST split needs a constant squeeze".into(),
        ));
    }
    let resp = Response::for_bath(spec, bath)?;
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    let v = noise_integral(bath, &resp, quad, 2.0 * t, true, |w, sq| {
        let (f, _) = resp.f_and_dot(t, w);
        let rot = Complex64::from_polar(1.0, sq.theta);
        [-2.0 * (f * f * rot).re, 2.0 * f.norm_sqr()]
    })?;
    Ok((v.0[0], v.0[1].max(0.0)))
}

/// Bath-driven part of ½⟨{χ(t), χ(t′)}⟩ split into stationary and
/// nonstationary components.
pub fn chi_hadamard(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    t: f64,
    t_prime: f64,
    quad: &QuadratureConfig,
) -> Result<KernelValue> {
    check_time(t)?;
    check_time(t_prime)?;
    let resp = Response::for_bath(spec, bath)?;
    if t == 0.0 || t_prime == 0.0 {
        return Ok(KernelValue::new(0.0, 0.0));
    }
    let v = noise_integral(bath, &resp, quad, t + t_prime, true, |w, sq| {
        let (f1, _) = resp.f_and_dot(t, w);
        let (f2, _) = resp.f_and_dot(t_prime, w);
        let rot = Complex64::from_polar(1.0, sq.theta);
        [
            sq.cosh2() * 2.0 * (f1 * f2.conj()).re,
            -sq.sinh2() * 2.0 * (f1 * f2 * rot).re,
        ]
    })?;
    let scale = 8.0 * PI * spec.gamma / spec.m;
    Ok(KernelValue::new(scale * v.0[0], scale * v.0[1]))
}

/// Late-time limits xx(∞) = (e²/m²)∫ cosh 2η·2|d̃₂|² and
/// pp(∞) = e²∫ cosh 2η·2ω²|d̃₂|² against the noise measure; xp(∞) = 0.
/// pp needs the regulator.
pub fn late_time_covariance(
    spec: &OscillatorSpec,
    bath: &BathSpec,
    quad: &QuadratureConfig,
) -> Result<CovarianceState> {
    let resp = Response::for_bath(spec, bath)?;
    let v = noise_integral(bath, &resp, quad, 0.0, true, |w, sq| {
        let a = 2.0 * sq.cosh2() * resp.d2_fourier(w).norm_sqr();
        [a, a * w * w]
    })?;
    let e2 = 8.0 * PI * spec.gamma * spec.m;
    Ok(CovarianceState::new(
        e2 / (spec.m * spec.m) * v.0[0],
        e2 * v.0[1],
        0.0,
    ))
}
