//! Two-point functions of the free bath field at the detector's position.

use crate::error::{domain, Error, Result};
use crate::gaussian_state::{wrap_angle, SqueezeParam};
use crate::quadrature::{
    bessel_j1, coth_half, integrate, omega_coth, Domain, IntegralSpec, QuadratureConfig, Vector,
    Weight,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Mode-dependent squeeze sampled on an ascending k-grid, interpolated with
/// monotone cubics in ln k. Above the grid η = 0; below it the first sample
/// is held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSpectrum {
    k: Vec<f64>,
    eta: Vec<f64>,
    /// Unwrapped so the interpolant does not jump across 2π.
    theta: Vec<f64>,
    #[serde(skip)]
    eta_slopes: Vec<f64>,
    #[serde(skip)]
    theta_slopes: Vec<f64>,
}

impl SqueezeSpectrum {
    pub fn new(k: Vec<f64>, eta: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if k.len() < 2 || eta.len() != k.len() || theta.len() != k.len() {
            return Err(Error::Shape(format!(
                "spectrum needs >= 2 samples of equal length, got k {} eta {} theta {}",
                k.len(),
                eta.len(),
                theta.len()
            )));
        }
        if k[0] <= 0.0 || k.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain(
                "spectrum k-grid must be positive and strictly ascending",
            ));
        }
        if eta.iter().chain(theta.iter()).any(|x| !x.is_finite()) || eta.iter().any(|&e| e < 0.0) {
            return Err(domain("spectrum samples must be finite with eta >= 0"));
        }
        let mut unwrapped = theta;
        for i in 1..unwrapped.len() {
            let d = unwrapped[i] - unwrapped[i - 1];
            unwrapped[i] -= (d / (2.0 * PI)).round() * 2.0 * PI;
        }
        let x: Vec<f64> = k.iter().map(|v| v.ln()).collect();
        let eta_slopes = pchip_slopes(&x, &eta);
        let theta_slopes = pchip_slopes(&x, &unwrapped);
        Ok(SqueezeSpectrum {
            k,
            eta,
            theta: unwrapped,
            eta_slopes,
            theta_slopes,
        })
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    /// Angles wrapped into [0, 2π).
    pub fn theta(&self) -> Vec<f64> {
        self.theta.iter().map(|&t| wrap_angle(t)).collect()
    }

    pub fn k_max(&self) -> f64 {
        *self.k.last().unwrap()
    }

    pub fn at(&self, k: f64) -> SqueezeParam {
        let n = self.k.len();
        if k > self.k[n - 1] {
            return SqueezeParam::none();
        }
        if k <= self.k[0] {
            return SqueezeParam {
                eta: self.eta[0],
                theta: wrap_angle(self.theta[0]),
            };
        }
        let x = k.ln();
        let i = match self.k.binary_search_by(|v| v.partial_cmp(&k).unwrap()) {
            Ok(i) => {
                return SqueezeParam {
                    eta: self.eta[i],
                    theta: wrap_angle(self.theta[i]),
                }
            }
            Err(i) => i - 1,
        };
        let x0 = self.k[i].ln();
        let x1 = self.k[i + 1].ln();
        let eta = hermite(
            x,
            x0,
            x1,
            self.eta[i],
            self.eta[i + 1],
            self.eta_slopes[i],
            self.eta_slopes[i + 1],
        );
        let theta = hermite(
            x,
            x0,
            x1,
            self.theta[i],
            self.theta[i + 1],
            self.theta_slopes[i],
            self.theta_slopes[i + 1],
        );
        SqueezeParam {
            eta: eta.max(0.0),
            theta: wrap_angle(theta),
        }
    }

    /// Serde skips the slopes; call after deserializing.
    pub fn rebuild(self) -> Result<Self> {
        SqueezeSpectrum::new(self.k, self.eta, self.theta)
    }
}

/// Fritsch-Carlson slopes for a monotone piecewise-cubic Hermite interpolant.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

fn hermite(x: f64, x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub enum BathSqueeze {
    #[default]
    None,
    Constant(SqueezeParam),
    Spectrum(SqueezeSpectrum),
}

/// Thermal bath, optionally squeezed, with field mass m_i before and m_f
/// after a parametric process. `beta = ∞` is the zero-temperature bath.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub beta: f64,
    pub squeeze: BathSqueeze,
    pub mass_i: f64,
    pub mass_f: f64,
}

impl BathSpec {
    pub fn massless(beta: f64, squeeze: Option<SqueezeParam>) -> Self {
        BathSpec {
            beta,
            squeeze: squeeze.map_or(BathSqueeze::None, BathSqueeze::Constant),
            mass_i: 0.0,
            mass_f: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) {
            return Err(domain(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.mass_i >= 0.0 && self.mass_f >= 0.0) {
            return Err(domain("field masses must be >= 0"));
        }
        Ok(())
    }

    /// Squeeze of the mode with wavenumber `k`.
    pub fn squeeze_at(&self, k: f64) -> SqueezeParam {
        match &self.squeeze {
            BathSqueeze::None => SqueezeParam::none(),
            BathSqueeze::Constant(s) => *s,
            BathSqueeze::Spectrum(sp) => sp.at(k),
        }
    }

    /// Wavenumber κ = √(ω² − m_i²) of the initial-mass mode at frequency ω.
    pub fn kappa(&self, omega: f64) -> f64 {
        let w = omega.abs();
        ((w - self.mass_i) * (w + self.mass_i)).max(0.0).sqrt()
    }

    /// Squeeze of the mode that oscillates at frequency ω.
    pub fn squeeze_at_frequency(&self, omega: f64) -> SqueezeParam {
        self.squeeze_at(self.kappa(omega))
    }

    /// κ·coth(βω/2) for ω above threshold, finite at ω → 0 when massless.
    pub fn kappa_coth(&self, omega: f64) -> f64 {
        if self.mass_i == 0.0 {
            omega_coth(omega, self.beta)
        } else {
            self.kappa(omega) * coth_half(self.beta * omega)
        }
    }
}

/// A two-point function split into the part depending on t − t′ and the
/// part depending on t + t′.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub stationary: f64,
    pub nonstationary: f64,
    pub total: f64,
}

impl KernelValue {
    pub fn new(stationary: f64, nonstationary: f64) -> Self {
        KernelValue {
            stationary,
            nonstationary,
            total: stationary + nonstationary,
        }
    }
}

fn check_times(t: f64, t_prime: f64) -> Result<()> {
    if t >= 0.0 && t_prime >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("times must be >= 0, got ({t}, {t_prime})")))
    }
}

/// Coincident-point Hadamard function of a massless squeezed thermal bath:
/// ∫(dω/2π)(ω/4π)coth(βω/2)·2{cosh 2η cos ω(t−t′) − sinh 2η cos(ω(t+t′) − θ)}.
pub fn hadamard_massless_coincident(
    bath: &BathSpec,
    t: f64,
    t_prime: f64,
    quad: &QuadratureConfig,
) -> Result<KernelValue> {
    bath.validate()?;
    check_times(t, t_prime)?;
    if bath.mass_i != 0.0 || bath.mass_f != 0.0 {
        return Err(Error::Configuration(
            "massless kernel called with a massive bath".into(),
        ));
    }
    let sq = match &bath.squeeze {
        BathSqueeze::Spectrum(_) => {
            return Err(Error::Configuration(
                "massless kernel takes a constant squeeze; use hadamard_parametric".into(),
            ))
        }
        _ => bath.squeeze_at(0.0),
    };
    let (c, s) = (sq.cosh2(), sq.sinh2());
    let tau = t - t_prime;
    let sigma = t + t_prime;
    let theta = sq.theta;
    let norm = 1.0 / (4.0 * PI * PI);
    let spec = IntegralSpec::new(
        move |w: f64| Vector([norm * (w * tau).cos(), -norm * (w * sigma - theta).cos()]),
        Domain::SemiInfinite(0.0),
    )
    .weight(Weight::CothHalfBeta { beta: bath.beta })
    .regulator(quad.regulator())
    .oscillation(tau.abs().max(sigma))
    .divergent(true);
    let est = integrate(&spec, &quad.tolerance())?;
    let nonstationary = if s == 0.0 { 0.0 } else { s * est.value.0[1] };
    Ok(KernelValue::new(c * est.value.0[0], nonstationary))
}

/// Contact part of the retarded kernel, handled analytically downstream
/// as local damping plus a frequency shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContactTerm {
    DeltaPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetardedKernel {
    pub contact: ContactTerm,
    /// Smooth memory tail −(1/4π)(m/τ)J₁(mτ).
    pub tail: f64,
}

/// Retarded Green's function of the massive field at the source point,
/// for τ > 0.
pub fn retarded_massive(tau: f64, mass: f64) -> Result<RetardedKernel> {
    if !(tau > 0.0) {
        return Err(Error::Causality(format!(
            "retarded kernel needs tau > 0, got {tau}"
        )));
    }
    if !(mass >= 0.0) {
        return Err(domain("mass must be >= 0"));
    }
    let tail = if mass == 0.0 {
        0.0
    } else {
        -(mass / tau) * bessel_j1(mass * tau) / (4.0 * PI)
    };
    Ok(RetardedKernel {
        contact: ContactTerm::DeltaPrime,
        tail,
    })
}

/// Coincident Hadamard function of a (possibly massive) bath with
/// mode-dependent squeeze, after the parametric process:
/// ∫_{m_i}^∞ dω (κ/4π²) coth(βω/2){cosh 2η_κ cos ω(t−t′) − sinh 2η_κ cos(ω(t+t′) − θ_κ)}.
pub fn hadamard_parametric(
    bath: &BathSpec,
    t: f64,
    t_prime: f64,
    quad: &QuadratureConfig,
) -> Result<KernelValue> {
    bath.validate()?;
    check_times(t, t_prime)?;
    check_spectrum_tail(bath)?;
    let tau = t - t_prime;
    let sigma = t + t_prime;
    let norm = 1.0 / (4.0 * PI * PI);
    let b = bath.clone();
    let spec = IntegralSpec::new(
        move |w: f64| {
            let sq = b.squeeze_at_frequency(w);
            let weight = norm * b.kappa_coth(w);
            Vector([
                weight * sq.cosh2() * (w * tau).cos(),
                -weight * sq.sinh2() * (w * sigma - sq.theta).cos(),
            ])
        },
        Domain::SemiInfinite(bath.mass_i),
    )
    .regulator(quad.regulator())
    .oscillation(tau.abs().max(sigma))
    .breakpoints(spectrum_breakpoints(bath))
    .divergent(true);
    let est = integrate(&spec, &quad.tolerance())?;
    Ok(KernelValue::new(est.value.0[0], est.value.0[1]))
}

/// Frequencies of the spectrum's sample points, so panels never straddle
/// the edge where the interpolant drops to zero.
pub(crate) fn spectrum_breakpoints(bath: &BathSpec) -> Vec<f64> {
    match &bath.squeeze {
        BathSqueeze::Spectrum(sp) => {
            let kmax = sp.k_max();
            let kmin = sp.k()[0];
            vec![kmin.hypot(bath.mass_i), kmax.hypot(bath.mass_i)]
        }
        _ => Vec::new(),
    }
}

/// A spectrum must have decayed by its last sample, otherwise cutting η to
/// zero above the grid is a visible step.
pub(crate) fn check_spectrum_tail(bath: &BathSpec) -> Result<()> {
    if let BathSqueeze::Spectrum(sp) = &bath.squeeze {
        let peak = sp.eta().iter().cloned().fold(0.0, f64::max);
        let last = *sp.eta().last().unwrap();
        if peak > 0.0 && last > 1e-3 * peak {
            return Err(Error::Resolution(format!(
                "squeeze spectrum still at {last:e} (peak {peak:e}) at k = {}; extend the k-grid",
                sp.k_max()
            )));
        }
    }
    Ok(())
}

/// Both sides of the bath's fluctuation-dissipation relation at frequency ω.
///
/// `lhs` is the stationary Hadamard transform, collapsed from the k-integral
/// with δ(|ω| − ω_k); `rhs` is coth(βω/2) cosh 2η_κ · Im G̃_R(ω) with the odd
/// spectral function Im G̃_R(ω) = sgn(ω) κ/4π.
pub fn bath_fdr(omega: f64, bath: &BathSpec) -> Result<(f64, f64)> {
    bath.validate()?;
    let w = omega.abs();
    if !(w > bath.mass_i) {
        return Err(Error::BelowThreshold(format!(
            "|omega| = {w} is not above the field mass {}",
            bath.mass_i
        )));
    }
    let k = bath.kappa(w);
    let cosh2 = bath.squeeze_at(k).cosh2();
    let coth_abs = coth_half(bath.beta * w);
    // ∫ k² dk/(2π²) · 1/(4ω_k) · 2π δ(|ω| − ω_k), with dk/dω = ω/k
    let lhs = k * k * (w / k) / (4.0 * w) * 2.0 * PI / (2.0 * PI * PI) * coth_abs * cosh2;
    let im_retarded = omega.signum() * k / (4.0 * PI);
    let rhs = omega.signum() * coth_abs * cosh2 * im_retarded;
    Ok((lhs, rhs))
}

/// Truncated expansion coth(x/2) = 1 + 2 Σ_{n=1}^{n_max} e^{−nx}, x = βω.
pub fn coth_expansion(x: f64, n_max: u32) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("series diverges for x = {x} <= 0")));
    }
    let q = (-x).exp();
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..n_max {
        term *= q;
        sum += term;
    }
    Ok(1.0 + 2.0 * sum)
}
