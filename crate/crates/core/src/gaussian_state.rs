//! Gaussian-state algebra: squeezed thermal moments, Bogoliubov pairs,
//! covariance <-> squeeze conversion and effective temperatures.

use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Slack allowed below the Robertson-Schrodinger bound before a covariance
/// is rejected.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

/// Guard for arccoth near 1.
const ARCCOTH_GUARD: f64 = 1e-12;

/// Wrap an angle into [0, 2π).
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Squeeze ζ = η e^{iθ} in polar form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParam {
    pub eta: f64,
    pub theta: f64,
}

impl SqueezeParam {
    pub fn new(eta: f64, theta: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(domain(format!(
                "squeeze magnitude must be finite and >= 0, got {eta}"
            )));
        }
        if !theta.is_finite() {
            return Err(domain("squeeze angle must be finite"));
        }
        Ok(SqueezeParam {
            eta,
            theta: wrap_angle(theta),
        })
    }

    pub fn none() -> Self {
        SqueezeParam {
            eta: 0.0,
            theta: 0.0,
        }
    }

    pub fn cosh2(&self) -> f64 {
        (2.0 * self.eta).cosh()
    }

    pub fn sinh2(&self) -> f64 {
        (2.0 * self.eta).sinh()
    }

    /// The single-mode squeeze as a Bogoliubov pair, α = cosh η and
    /// β = −e^{−iθ} sinh η.
    pub fn bogoliubov(&self) -> BogoliubovPair {
        BogoliubovPair {
            alpha: Complex64::new(self.eta.cosh(), 0.0),
            beta: -Complex64::from_polar(self.eta.sinh(), -self.theta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovPair {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl BogoliubovPair {
    /// |α|² − |β|² − 1, zero for a canonical transformation.
    pub fn wronskian_defect(&self) -> f64 {
        let a = self.alpha.norm();
        let b = self.beta.norm();
        (a - b) * (a + b) - 1.0
    }

    /// η = asinh|β| and θ = −arg(−β α*), so that a pair from
    /// [`SqueezeParam::bogoliubov`] maps back to itself.
    pub fn squeeze(&self) -> SqueezeParam {
        let eta = self.beta.norm().asinh();
        let phase = -self.beta * self.alpha.conj();
        let theta = if eta == 0.0 {
            0.0
        } else {
            wrap_angle(-phase.arg())
        };
        SqueezeParam { eta, theta }
    }
}

/// Equal-time second moments (⟨χ²⟩, ⟨p²⟩, ½⟨{χ,p}⟩), ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceState {
    pub xx: f64,
    pub pp: f64,
    pub xp: f64,
}

/// xx·pp − xp·xp with one rounding (Kahan's difference of products).
fn det2(xx: f64, pp: f64, xp: f64) -> f64 {
    let w = xp * xp;
    let e = (-xp).mul_add(xp, w);
    let f = xx.mul_add(pp, -w);
    f + e
}

impl CovarianceState {
    pub fn new(xx: f64, pp: f64, xp: f64) -> Self {
        CovarianceState { xx, pp, xp }
    }

    /// Thermal state of a free oscillator.
    pub fn thermal(m: f64, omega: f64, beta: f64) -> Self {
        let c = crate::quadrature::coth_half(beta * omega);
        CovarianceState {
            xx: c / (2.0 * m * omega),
            pp: m * omega * c / 2.0,
            xp: 0.0,
        }
    }

    /// Determinant xx·pp − xp².
    pub fn determinant(&self) -> f64 {
        det2(self.xx, self.pp, self.xp)
    }

    /// Uncertainty function xx·pp − xp² − ¼; zero for pure states.
    pub fn uncertainty(&self) -> f64 {
        self.determinant() - 0.25
    }

    pub fn is_physical(&self) -> bool {
        self.xx >= 0.0 && self.pp >= 0.0 && self.uncertainty() >= -UNCERTAINTY_SLACK
    }

    /// Build the covariance from (Ξ, η, θ):
    /// xx = Ξ[cosh 2η − sinh 2η cos θ]/(2mω), pp = mωΞ[cosh 2η + sinh 2η cos θ]/2,
    /// xp = −Ξ sinh 2η sin θ / 2.
    pub fn from_decomposition(dec: &StateDecomposition, m: f64, omega_r: f64) -> Self {
        let eta = dec.squeeze.eta;
        let theta = dec.squeeze.theta;
        let s = (2.0 * eta).sinh();
        let low = (-2.0 * eta).exp();
        // cosh 2η ∓ sinh 2η cos θ without cancellation when η is large
        let minus = low + 2.0 * s * (0.5 * theta).sin().powi(2);
        let plus = low + 2.0 * s * (0.5 * theta).cos().powi(2);
        CovarianceState {
            xx: dec.xi * minus / (2.0 * m * omega_r),
            pp: m * omega_r * dec.xi * plus / 2.0,
            xp: -0.5 * dec.xi * s * theta.sin(),
        }
    }
}

/// Thermal factor Ξ and squeeze extracted from a covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDecomposition {
    pub xi: f64,
    pub squeeze: SqueezeParam,
    /// Set when η = 0 and θ carries no information.
    pub degenerate: bool,
}

impl StateDecomposition {
    pub fn new(xi: f64, squeeze: SqueezeParam) -> Self {
        StateDecomposition {
            xi,
            squeeze,
            degenerate: squeeze.eta == 0.0,
        }
    }

    /// ϑ with Ξ = coth(ϑ/2); infinite for a pure state.
    pub fn vartheta(&self) -> f64 {
        2.0 * arccoth(self.xi)
    }
}

/// arccoth x = ½ ln((x+1)/(x−1)) for x > 1; +∞ within the guard of 1.
pub fn arccoth(x: f64) -> f64 {
    if x <= 1.0 + ARCCOTH_GUARD {
        return f64::INFINITY;
    }
    0.5 * ((x + 1.0) / (x - 1.0)).ln()
}

/// Bose-Einstein occupation 1/(e^{βω} − 1).
pub fn bose_occupation(beta: f64, omega: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

/// (⟨a²⟩, ⟨a†a⟩) of a squeezed thermal mode with thermal occupation `nbar`.
pub fn squeezed_thermal_moments(eta: f64, theta: f64, nbar: f64) -> Result<(Complex64, f64)> {
    if !(eta >= 0.0) {
        return Err(domain(format!("eta must be >= 0, got {eta}")));
    }
    if !(nbar >= 0.0) {
        return Err(domain(format!("occupation must be >= 0, got {nbar}")));
    }
    let a_sq = -Complex64::from_polar((2.0 * eta).sinh() * (nbar + 0.5), theta);
    let adag_a = (2.0 * eta).cosh() * nbar + eta.sinh().powi(2);
    Ok((a_sq, adag_a))
}

/// Occupation after a Bogoliubov mix with |δ|² = `delta_sq`: n + 2|δ|²(n + ½).
pub fn amplified_number(n: f64, delta_sq: f64) -> Result<f64> {
    if !(n >= 0.0) || !(delta_sq >= 0.0) {
        return Err(domain("occupation and mixing weight must be >= 0"));
    }
    Ok(n + 2.0 * delta_sq * (n + 0.5))
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {x}")))
    }
}

/// ⟨χ²⟩ of a free oscillator prepared in a squeezed thermal state.
pub fn free_squeezed_variance(
    m: f64,
    omega_r: f64,
    beta: f64,
    eta: f64,
    theta: f64,
    t: f64,
) -> Result<f64> {
    check_positive("mass", m)?;
    check_positive("frequency", omega_r)?;
    check_positive("beta", beta)?;
    if !(eta >= 0.0) {
        return Err(domain(format!("eta must be >= 0, got {eta}")));
    }
    let thermal = crate::quadrature::coth_half(beta * omega_r) / (2.0 * m * omega_r);
    let factor = (2.0 * eta).cosh() - (2.0 * omega_r * t - theta).cos() * (2.0 * eta).sinh();
    Ok(factor * thermal)
}

/// Split a covariance into thermal factor Ξ and squeeze (η, θ) relative to
/// a free oscillator of mass `m` and frequency `omega_r`.
pub fn extract_squeeze(cov: &CovarianceState, m: f64, omega_r: f64) -> Result<StateDecomposition> {
    check_positive("mass", m)?;
    check_positive("frequency", omega_r)?;
    let det = cov.determinant();
    // rounding the elements alone moves det by a few ulps of xx·pp
    let slack = UNCERTAINTY_SLACK.max(4.0 * f64::EPSILON * (cov.xx * cov.pp + cov.xp * cov.xp));
    if !(cov.xx > 0.0 && cov.pp > 0.0) || det < 0.25 - slack || !det.is_finite() {
        return Err(Error::InvalidState(format!(
            "covariance ({}, {}, {}) violates the uncertainty bound",
            cov.xx, cov.pp, cov.xp
        )));
    }
    let xi = (2.0 * det.sqrt()).max(1.0);
    let a = cov.xx * m * omega_r;
    let b = cov.pp / (m * omega_r);
    let diff = b - a;
    let s = diff.hypot(2.0 * cov.xp) / xi;
    let eta = 0.5 * s.asinh();
    if eta == 0.0 {
        return Ok(StateDecomposition {
            xi,
            squeeze: SqueezeParam::none(),
            degenerate: true,
        });
    }
    let theta = wrap_angle((-2.0 * cov.xp).atan2(diff));
    Ok(StateDecomposition {
        xi,
        squeeze: SqueezeParam { eta, theta },
        degenerate: false,
    })
}

/// Inverse effective temperature from the uncertainty function 𝔖:
/// β_eff = (2/ω) ln[(1 + √(1+4𝔖))/(2√𝔖)].
pub fn effective_temperature(cov: &CovarianceState, omega_r: f64) -> Result<f64> {
    check_positive("frequency", omega_r)?;
    let s = cov.uncertainty();
    if !(s > 0.0) {
        return Err(Error::InvalidState(format!(
            "uncertainty function {s:e} is not positive; the state is pure or unphysical"
        )));
    }
    // (1+√(1+4S))/(2√S) = √((Ξ+1)/(Ξ−1)) with Ξ = √(1+4S); the second
    // form keeps digits when S is small.
    let xi_minus_one = 4.0 * s / (1.0 + (1.0 + 4.0 * s).sqrt());
    Ok((1.0 + 2.0 / xi_minus_one).ln() / omega_r)
}

/// β_s solving coth(β_s ω/2) = coth(βω/2)·cosh 2η. `beta = ∞` is allowed.
pub fn effective_temp_squeezed(beta: f64, omega_r: f64, eta: f64) -> Result<f64> {
    check_positive("beta", beta)?;
    check_positive("frequency", omega_r)?;
    if !(eta >= 0.0) {
        return Err(domain(format!("eta must be >= 0, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(beta);
    }
    let x = crate::quadrature::coth_half(beta * omega_r) * (2.0 * eta).cosh();
    Ok(2.0 * arccoth(x) / omega_r)
}

/// Out-state number per ±k pair: 2(|β|² + ½)(n̄ + ½) − ½.
pub fn two_mode_out_number(nbar_in: f64, beta_sq: f64) -> Result<f64> {
    if !(nbar_in >= 0.0) || !(beta_sq >= 0.0) {
        return Err(domain("occupation and |beta|^2 must be >= 0"));
    }
    Ok(2.0 * (beta_sq + 0.5) * (nbar_in + 0.5) - 0.5)
}

/// Amplitude of |n, n⟩ in the two-mode squeezed vacuum: (−tanh η e^{iθ})ⁿ / cosh η.
pub fn two_mode_vacuum_amplitude(eta: f64, theta: f64, n: u32) -> Result<Complex64> {
    if !(eta >= 0.0) {
        return Err(domain(format!("eta must be >= 0, got {eta}")));
    }
    let r = -Complex64::from_polar(eta.tanh(), theta);
    Ok(r.powu(n) / eta.cosh())
}
