//! Regulated frequency integrals, the Bessel J₁ function and a causal
//! convolution used to cross-check closed forms.

mod bessel;
mod convolution;
mod extrapolation;
mod kronrod;
mod value;

pub use bessel::bessel_j1;
pub use convolution::convolve_response;
pub use extrapolation::wynn_epsilon;
pub use value::{QuadValue, Vector};

use crate::error::{Error, Result};
use crate::parallel;
use kronrod::{adaptive, AdaptiveOutcome};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this value of βω the thermal weight switches to its series.
pub const COTH_SERIES_THRESHOLD: f64 = 1e-3;

/// Regulated factor drops below e^{-51} ≈ 7e-23 past this many e-folds.
const DECAY_EFOLDS: f64 = 51.0;

const MAX_INITIAL_PANELS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// `[a, b]`
    Finite(f64, f64),
    /// `[a, ∞)`
    SemiInfinite(f64),
}

/// Spectral weight multiplying the integrand. Both thermal weights carry
/// the factor ω of a three-dimensional massless density of states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Weight {
    None,
    /// ω·coth(βω/2); `beta = ∞` gives |ω|.
    CothHalfBeta {
        beta: f64,
    },
    /// ω·e^{−nβω}
    Boltzmann {
        n: u32,
        beta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regulator {
    /// Integrate only up to Λ.
    HardCutoff(f64),
    /// Multiply by e^{−εω}.
    Exponential(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-8,
            abs: 1e-12,
            max_subdivisions: 200_000,
        }
    }
}

/// Regulator and tolerance settings shared by every frequency integral.
///
/// `epsilon > 0` selects the exponential factor e^{−εω}; otherwise the hard
/// cutoff Λ is used. An infinite cutoff with `epsilon = 0` leaves divergent
/// integrals unregulated, which `integrate` rejects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub cutoff: f64,
    pub epsilon: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let t = Tolerance::default();
        QuadratureConfig {
            cutoff: 1000.0,
            epsilon: 0.0,
            rel_tol: t.rel,
            abs_tol: t.abs,
            max_subdivisions: t.max_subdivisions,
        }
    }
}

impl QuadratureConfig {
    pub fn with_cutoff(cutoff: f64) -> Self {
        QuadratureConfig {
            cutoff,
            ..Default::default()
        }
    }

    pub fn with_epsilon(epsilon: f64) -> Self {
        QuadratureConfig {
            cutoff: f64::INFINITY,
            epsilon,
            ..Default::default()
        }
    }

    pub fn regulator(&self) -> Option<Regulator> {
        if self.epsilon > 0.0 {
            Some(Regulator::Exponential(self.epsilon))
        } else if self.cutoff.is_finite() && self.cutoff > 0.0 {
            Some(Regulator::HardCutoff(self.cutoff))
        } else {
            None
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// Everything `integrate` needs to know about one integral.
pub struct IntegralSpec<F> {
    pub integrand: F,
    pub domain: Domain,
    pub weight: Weight,
    pub regulator: Option<Regulator>,
    /// Largest angular frequency of oscillation in the integrand; 0 if none.
    pub oscillation_hint: f64,
    /// Points where the integrand has narrow structure (resonances).
    pub breakpoints: Vec<f64>,
    /// Set for integrands that diverge without a regulator.
    pub divergent: bool,
}

impl<F> IntegralSpec<F> {
    pub fn new(integrand: F, domain: Domain) -> Self {
        IntegralSpec {
            integrand,
            domain,
            weight: Weight::None,
            regulator: None,
            oscillation_hint: 0.0,
            breakpoints: Vec::new(),
            divergent: false,
        }
    }

    pub fn weight(mut self, weight: Weight) -> Self {
        self.weight = weight;
        self
    }

    pub fn regulator(mut self, regulator: Option<Regulator>) -> Self {
        self.regulator = regulator;
        self
    }

    pub fn oscillation(mut self, hint: f64) -> Self {
        self.oscillation_hint = hint.abs();
        self
    }

    pub fn breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn divergent(mut self, divergent: bool) -> Self {
        self.divergent = divergent;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
    /// Rounding, not the rule, bounds the achievable error.
    pub roundoff_limited: bool,
}

/// ω·coth(βω/2), even in ω, with the series 2/β + βω²/6 − β³ω⁴/360 for
/// small βω and |ω| at zero temperature.
pub fn omega_coth(omega: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        return omega.abs();
    }
    let x = beta * omega;
    if x.abs() < COTH_SERIES_THRESHOLD {
        let w2 = omega * omega;
        2.0 / beta + beta * w2 / 6.0 - beta * beta * beta * w2 * w2 / 360.0
    } else {
        omega / (0.5 * x).tanh()
    }
}

/// coth(x/2) for x ≠ 0, equal to 1 at x = ∞.
pub fn coth_half(x: f64) -> f64 {
    if x.is_infinite() {
        return x.signum();
    }
    1.0 / (0.5 * x).tanh()
}

impl Weight {
    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            Weight::None => 1.0,
            Weight::CothHalfBeta { beta } => omega_coth(omega, beta),
            Weight::Boltzmann { n, beta } => {
                if n == 0 {
                    omega
                } else {
                    omega * (-(n as f64) * beta * omega).exp()
                }
            }
        }
    }

    fn decay_rate(&self) -> f64 {
        match *self {
            Weight::Boltzmann { n, beta } if n > 0 && beta.is_finite() => n as f64 * beta,
            _ => 0.0,
        }
    }
}

/// Integrate `spec` to the requested tolerance.
///
/// Finite (or regulated) ranges are split at the breakpoints and into
/// panels one oscillation period wide, then refined adaptively with a
/// 21-point Gauss-Kronrod rule. Unregulated oscillatory tails are summed
/// half-period by half-period and accelerated with Wynn's epsilon
/// algorithm; non-oscillatory tails are mapped onto [0, 1).
pub fn integrate<V, F>(spec: &IntegralSpec<F>, tol: &Tolerance) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V + Sync,
{
    if spec.divergent && spec.regulator.is_none() {
        return Err(Error::Configuration(
            "integrand diverges without a cutoff or exponential regulator".into(),
        ));
    }
    let (lo, mut hi) = match spec.domain {
        Domain::Finite(a, b) => (a, Some(b)),
        Domain::SemiInfinite(a) => (a, None),
    };
    let mut decay = spec.weight.decay_rate();
    let mut eps = 0.0;
    match spec.regulator {
        Some(Regulator::HardCutoff(cut)) => {
            if !(cut > 0.0) {
                return Err(Error::Configuration(format!(
                    "cutoff must be positive, got {cut}"
                )));
            }
            hi = Some(hi.map_or(cut, |b| b.min(cut)));
        }
        Some(Regulator::Exponential(e)) => {
            if !(e > 0.0) {
                return Err(Error::Configuration(format!(
                    "regulator scale must be positive, got {e}"
                )));
            }
            eps = e;
            decay += e;
        }
        None => {}
    }
    let weight = spec.weight;
    let f = &spec.integrand;
    let g = move |w: f64| {
        let mut factor = weight.eval(w);
        if eps > 0.0 {
            factor *= (-eps * w).exp();
        }
        f(w) * factor
    };
    let max_bp = spec.breakpoints.iter().cloned().fold(lo, f64::max);
    if hi.is_none() && decay > 0.0 {
        hi = Some(max_bp.max(lo) + DECAY_EFOLDS / decay);
    }
    match hi {
        Some(b) => {
            if b <= lo {
                return Ok(Estimate {
                    value: V::zero(),
                    error: 0.0,
                    evaluations: 0,
                    panels: 0,
                    roundoff_limited: false,
                });
            }
            let edges = partition(lo, b, spec.oscillation_hint, &spec.breakpoints)?;
            let out = adaptive(&g, &edges, tol.rel, tol.abs, tol.max_subdivisions)?;
            Ok(to_estimate(out))
        }
        None if spec.oscillation_hint > 0.0 => oscillatory_tail(
            &g,
            lo,
            max_bp,
            spec.oscillation_hint,
            &spec.breakpoints,
            tol,
        ),
        None => {
            let scale = (max_bp - lo).max(1.0);
            let h = move |u: f64| {
                let one_minus = 1.0 - u;
                let w = lo + scale * u / one_minus;
                g(w) * (scale / (one_minus * one_minus))
            };
            let mut edges = vec![0.0];
            let mut mapped: Vec<f64> = spec
                .breakpoints
                .iter()
                .filter(|&&p| p > lo)
                .map(|&p| (p - lo) / (scale + p - lo))
                .collect();
            mapped.sort_by(|a, b| a.partial_cmp(b).unwrap());
            edges.extend(mapped);
            edges.push(1.0);
            edges.dedup();
            let out = adaptive(&h, &edges, tol.rel, tol.abs, tol.max_subdivisions)?;
            Ok(to_estimate(out))
        }
    }
}

fn to_estimate<V: QuadValue>(out: AdaptiveOutcome<V>) -> Estimate<V> {
    Estimate {
        value: out.value,
        error: out.error,
        evaluations: out.evaluations,
        panels: out.panels,
        roundoff_limited: out.roundoff_limited,
    }
}

/// Panel edges on `[a, b]`: breakpoints first, then panels one period of
/// `hint` wide inside every piece.
fn partition(a: f64, b: f64, hint: f64, breakpoints: &[f64]) -> Result<Vec<f64>> {
    let mut cuts: Vec<f64> = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .cloned()
        .filter(|&p| p > a && p < b)
        .collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.extend(inner);
    cuts.push(b);
    cuts.dedup();
    if hint <= 0.0 {
        return Ok(cuts);
    }
    let period = 2.0 * PI / hint;
    let total = ((b - a) / period).ceil() as usize + cuts.len();
    if total > MAX_INITIAL_PANELS {
        return Err(Error::Resolution(format!(
            "{total} oscillation panels needed on [{a}, {b}]; lower the cutoff or the time"
        )));
    }
    let mut edges = Vec::with_capacity(total + 1);
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let n = ((x1 - x0) / period).ceil().max(1.0) as usize;
        let step = (x1 - x0) / n as f64;
        for i in 0..n {
            edges.push(x0 + step * i as f64);
        }
    }
    edges.push(b);
    Ok(edges)
}

/// `[a, ∞)` without a decaying factor: integrate up to the last breakpoint,
/// then sum half-period cycles and extrapolate the partial sums.
fn oscillatory_tail<V, G>(
    g: &G,
    a: f64,
    start: f64,
    hint: f64,
    breakpoints: &[f64],
    tol: &Tolerance,
) -> Result<Estimate<V>>
where
    V: QuadValue,
    G: Fn(f64) -> V + Sync,
{
    let head_edges = partition(a, start.max(a), hint, breakpoints)?;
    let head = if start > a {
        adaptive(g, &head_edges, tol.rel, tol.abs * 0.1, tol.max_subdivisions)?
    } else {
        AdaptiveOutcome {
            value: V::zero(),
            error: 0.0,
            evaluations: 0,
            panels: 0,
            roundoff_limited: false,
        }
    };
    let half = PI / hint;
    let mut partial: Vec<Vec<f64>> = Vec::new();
    let mut running = head.value;
    let mut evaluations = head.evaluations;
    let mut panels = head.panels;
    let mut cycle_error = head.error;
    let mut cycles = 0usize;
    let batch = 32usize;
    let max_cycles = tol.max_subdivisions.max(64);
    let mut parts = Vec::new();
    loop {
        let base = start.max(a) + half * cycles as f64;
        let results: Vec<Result<AdaptiveOutcome<V>>> = parallel::map_range(batch, |i| {
            let x0 = base + half * i as f64;
            adaptive(g, &[x0, x0 + half], 1e-13, tol.abs * 1e-3, 500)
        });
        let mut last_norm = 0.0;
        for r in results {
            let r = r?;
            running = running + r.value;
            evaluations += r.evaluations;
            panels += r.panels;
            cycle_error += r.error;
            last_norm = r.value.norm();
            parts.clear();
            running.to_parts(&mut parts);
            partial.push(parts.clone());
        }
        cycles += batch;
        let target = tol.abs.max(tol.rel * running.norm());
        if last_norm <= 1e-3 * target {
            return Ok(Estimate {
                value: running,
                error: cycle_error + last_norm,
                evaluations,
                panels,
                roundoff_limited: false,
            });
        }
        let ncomp = partial[0].len();
        let mut extrapolated = vec![0.0; ncomp];
        let mut err: f64 = 0.0;
        for c in 0..ncomp {
            let seq: Vec<f64> = partial.iter().map(|p| p[c]).collect();
            let (v, e) = wynn_epsilon(&seq);
            extrapolated[c] = v;
            err = err.max(e);
        }
        if cycles >= 64 && err + cycle_error <= target {
            return Ok(Estimate {
                value: V::from_parts(&extrapolated),
                error: err + cycle_error,
                evaluations,
                panels,
                roundoff_limited: false,
            });
        }
        if cycles >= max_cycles {
            return Err(Error::Convergence {
                message: format!("oscillatory tail did not settle after {cycles} cycles"),
                partial: V::from_parts(&extrapolated).norm(),
                error: err,
            });
        }
    }
}
