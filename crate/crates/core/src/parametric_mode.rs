//! Parametric bath modes: φ̈ + (k² + m²(t))φ = 0, its fundamental solutions
//! and the Bogoliubov coefficients they imply.

use crate::bath_kernels::SqueezeSpectrum;
use crate::error::{domain, Error, Result};
use crate::gaussian_state::BogoliubovPair;
use crate::ode::Stepper;
use crate::parallel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileShape {
    /// tanh in m², centred on the window, width a sixth of it, rescaled so
    /// the endpoints are hit exactly.
    Tanh,
    /// Generalized smoothstep polynomial of the given order in m².
    SmoothStep(u32),
    /// Sudden jump at the midpoint of the window.
    Step,
}

/// Field mass switching from `mass_i` (t ≤ t_i) to `mass_f` (t ≥ t_f).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassProfile {
    pub mass_i: f64,
    pub mass_f: f64,
    pub t_i: f64,
    pub t_f: f64,
    pub shape: ProfileShape,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

impl MassProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass_i >= 0.0 && self.mass_f >= 0.0) {
            return Err(domain("profile masses must be >= 0"));
        }
        if !(self.t_f > self.t_i) || !self.t_i.is_finite() || !self.t_f.is_finite() {
            return Err(domain(format!(
                "need t_f > t_i, got [{}, {}]",
                self.t_i, self.t_f
            )));
        }
        Ok(())
    }

    /// Jump time of the Step shape.
    pub fn jump_time(&self) -> f64 {
        0.5 * (self.t_i + self.t_f)
    }

    /// Fraction of the way from m_i² to m_f², in [0, 1].
    pub fn progress(&self, t: f64) -> f64 {
        if t <= self.t_i {
            return 0.0;
        }
        if t >= self.t_f {
            return 1.0;
        }
        let width = self.t_f - self.t_i;
        match self.shape {
            ProfileShape::Tanh => {
                let edge = 3.0f64.tanh();
                let x = (t - self.jump_time()) / (width / 6.0);
                ((x.tanh() + edge) / (2.0 * edge)).clamp(0.0, 1.0)
            }
            ProfileShape::SmoothStep(order) => {
                let x = (t - self.t_i) / width;
                let mut poly = 0.0;
                for n in 0..=order {
                    poly += binomial(order + n, n)
                        * binomial(2 * order + 1, order - n)
                        * (-x).powi(n as i32);
                }
                (x.powi(order as i32 + 1) * poly).clamp(0.0, 1.0)
            }
            ProfileShape::Step => {
                if t >= self.jump_time() {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn mass_sq(&self, t: f64) -> f64 {
        let a = self.mass_i * self.mass_i;
        let b = self.mass_f * self.mass_f;
        a + (b - a) * self.progress(t)
    }

    pub fn mass(&self, t: f64) -> f64 {
        self.mass_sq(t).sqrt()
    }
}

/// Fundamental solutions of one mode, with d1(0) = 1, ḋ1(0) = 0, d2(0) = 0,
/// ḋ2(0) = 1 imposed at the first grid time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    pub k: f64,
    pub profile: MassProfile,
    pub times: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d1_dot: Vec<f64>,
    pub d2_dot: Vec<f64>,
    /// The second solution was rescaled every step to pin the Wronskian.
    pub renormalized: bool,
}

impl ModeSolution {
    pub fn wronskian(&self, i: usize) -> f64 {
        self.d1[i] * self.d2_dot[i] - self.d2[i] * self.d1_dot[i]
    }

    pub fn max_wronskian_drift(&self) -> f64 {
        (0..self.times.len())
            .map(|i| (self.wronskian(i) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        self.k * self.k + self.profile.mass_sq(t)
    }

    /// (d1, ḋ1, d2, ḋ2) at time `t` inside the grid, propagated from the
    /// previous sample (exactly where the mass is constant).
    pub fn state_at(&self, t: f64) -> Result<[f64; 4]> {
        let n = self.times.len();
        let (t0, t1) = (self.times[0], self.times[n - 1]);
        if !(t >= t0 && t <= t1) {
            return Err(domain(format!(
                "t = {t} outside the solved window [{t0}, {t1}]"
            )));
        }
        let i = match self.times.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok([self.d1[i], self.d1_dot[i], self.d2[i], self.d2_dot[i]]),
            Err(i) => i - 1,
        };
        let mut y = [self.d1[i], self.d1_dot[i], self.d2[i], self.d2_dot[i]];
        let mut stepper = Stepper::new(STATE_TOL, 0.05 / omega_bound(self.k, &self.profile));
        propagate(
            self.k,
            &self.profile,
            self.times[i],
            t,
            &mut y,
            &mut stepper,
            false,
        )?;
        Ok(y)
    }
}

/// Local tolerance used when re-propagating between stored samples.
const STATE_TOL: f64 = 1e-13;

fn omega_bound(k: f64, profile: &MassProfile) -> f64 {
    (k * k + profile.mass_i.max(profile.mass_f).powi(2))
        .sqrt()
        .max(1e-3)
}

/// Advance the state from `a` to `b`: closed form outside the process
/// window, adaptive stepping inside, with the window edges as step ends.
fn propagate(
    k: f64,
    profile: &MassProfile,
    a: f64,
    b: f64,
    y: &mut [f64; 4],
    stepper: &mut Stepper,
    renormalize: bool,
) -> Result<()> {
    if matches!(profile.shape, ProfileShape::Step) {
        let jump = profile.jump_time();
        let k2 = k * k;
        if a < jump && b > jump {
            *y = free_step(k2 + profile.mass_sq(a), jump - a, *y);
            *y = free_step(k2 + profile.mass_sq(b), b - jump, *y);
        } else {
            *y = free_step(k2 + profile.mass_sq(0.5 * (a + b)), b - a, *y);
        }
        return Ok(());
    }
    let k2 = k * k;
    let rhs = |t: f64, y: &[f64; 4]| {
        let w2 = k2 + profile.mass_sq(t);
        [y[1], -w2 * y[0], y[3], -w2 * y[2]]
    };
    let mut cuts = vec![a];
    for &c in &[profile.t_i, profile.t_f] {
        if c > a && c < b {
            cuts.push(c);
        }
    }
    cuts.push(b);
    for seg in cuts.windows(2) {
        let (s0, s1) = (seg[0], seg[1]);
        let mid = 0.5 * (s0 + s1);
        if mid <= profile.t_i || mid >= profile.t_f {
            *y = free_step(k2 + profile.mass_sq(mid), s1 - s0, *y);
        } else if renormalize {
            // renormalize on a fine sub-grid so drift cannot accumulate
            let omega_max = omega_bound(k, profile);
            let pieces = ((s1 - s0) * omega_max).ceil().max(1.0) as usize;
            for p in 0..pieces {
                let x0 = s0 + (s1 - s0) * p as f64 / pieces as f64;
                let x1 = if p + 1 == pieces {
                    s1
                } else {
                    s0 + (s1 - s0) * (p + 1) as f64 / pieces as f64
                };
                stepper.advance(&rhs, x0, x1, y)?;
                let wr = y[0] * y[3] - y[2] * y[1];
                y[2] /= wr;
                y[3] /= wr;
            }
        } else {
            stepper.advance(&rhs, s0, s1, y)?;
        }
    }
    Ok(())
}

/// Options for [`integrate_mode_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOptions {
    pub tol: f64,
    /// Rescale the second solution after every step so the Wronskian stays 1.
    pub renormalize: bool,
    /// Tighter-tolerance reruns allowed before giving up on the drift bound.
    pub retries: u32,
}

impl ModeOptions {
    pub fn new(tol: f64) -> Self {
        ModeOptions {
            tol,
            renormalize: false,
            retries: 3,
        }
    }
}

/// Free evolution at constant ω² over an interval of length `dt`.
fn free_step(omega_sq: f64, dt: f64, y: [f64; 4]) -> [f64; 4] {
    let w = omega_sq.sqrt();
    let (c, s_over_w, w_s) = if w == 0.0 {
        (1.0, dt, 0.0)
    } else {
        let (s, c) = (w * dt).sin_cos();
        (c, s / w, w * s)
    };
    [
        c * y[0] + s_over_w * y[1],
        -w_s * y[0] + c * y[1],
        c * y[2] + s_over_w * y[3],
        -w_s * y[2] + c * y[3],
    ]
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid.windows(2).any(|w| !(w[1] > w[0]))
        || grid.iter().any(|t| !t.is_finite())
    {
        return Err(Error::Shape(
            "time grid must be non-empty, finite and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Solve both fundamental solutions on `grid` with local error control `tol`.
pub fn integrate_mode(
    k: f64,
    profile: &MassProfile,
    grid: &[f64],
    tol: f64,
) -> Result<ModeSolution> {
    integrate_mode_with(k, profile, grid, &ModeOptions::new(tol))
}

pub fn integrate_mode_with(
    k: f64,
    profile: &MassProfile,
    grid: &[f64],
    opts: &ModeOptions,
) -> Result<ModeSolution> {
    profile.validate()?;
    check_grid(grid)?;
    if !(k >= 0.0) {
        return Err(domain(format!("wavenumber must be >= 0, got {k}")));
    }
    if !(opts.tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    if matches!(profile.shape, ProfileShape::Step) {
        return Ok(step_solution(k, profile, grid));
    }
    let mut tol = opts.tol;
    let mut last_drift = f64::NAN;
    for _ in 0..=opts.retries {
        let sol = run_stepper(k, profile, grid, tol, opts.renormalize)?;
        let drift = sol.max_wronskian_drift();
        if drift <= 10.0 * opts.tol {
            return Ok(sol);
        }
        last_drift = drift;
        tol /= 10.0;
    }
    Err(Error::Convergence {
        message: format!("Wronskian drift stays above {} at k = {k}", 10.0 * opts.tol),
        partial: 1.0 + last_drift,
        error: last_drift,
    })
}

fn run_stepper(
    k: f64,
    profile: &MassProfile,
    grid: &[f64],
    tol: f64,
    renormalize: bool,
) -> Result<ModeSolution> {
    let n = grid.len();
    let mut out = ModeSolution {
        k,
        profile: *profile,
        times: grid.to_vec(),
        d1: Vec::with_capacity(n),
        d2: Vec::with_capacity(n),
        d1_dot: Vec::with_capacity(n),
        d2_dot: Vec::with_capacity(n),
        renormalized: renormalize,
    };
    let mut y = [1.0, 0.0, 0.0, 1.0];
    let push = |out: &mut ModeSolution, y: &[f64; 4]| {
        out.d1.push(y[0]);
        out.d1_dot.push(y[1]);
        out.d2.push(y[2]);
        out.d2_dot.push(y[3]);
    };
    push(&mut out, &y);
    let mut stepper = Stepper::new(tol, 0.05 / omega_bound(k, profile));
    for w in grid.windows(2) {
        propagate(k, profile, w[0], w[1], &mut y, &mut stepper, renormalize)?;
        push(&mut out, &y);
    }
    Ok(out)
}

/// Exact solution for a sudden jump: free evolution, then continuity of
/// the mode and its derivative at the jump.
fn step_solution(k: f64, profile: &MassProfile, grid: &[f64]) -> ModeSolution {
    let k2 = k * k;
    let before = k2 + profile.mass_i * profile.mass_i;
    let after = k2 + profile.mass_f * profile.mass_f;
    let jump = profile.jump_time();
    let t0 = grid[0];
    let at_jump = if jump > t0 {
        free_step(before, jump - t0, [1.0, 0.0, 0.0, 1.0])
    } else {
        [1.0, 0.0, 0.0, 1.0]
    };
    let mut out = ModeSolution {
        k,
        profile: *profile,
        times: grid.to_vec(),
        d1: Vec::with_capacity(grid.len()),
        d2: Vec::with_capacity(grid.len()),
        d1_dot: Vec::with_capacity(grid.len()),
        d2_dot: Vec::with_capacity(grid.len()),
        renormalized: false,
    };
    for &t in grid {
        let y = if t < jump {
            free_step(before, t - t0, [1.0, 0.0, 0.0, 1.0])
        } else {
            free_step(after, t - jump.max(t0), at_jump)
        };
        out.d1.push(y[0]);
        out.d1_dot.push(y[1]);
        out.d2.push(y[2]);
        out.d2_dot.push(y[3]);
    }
    out
}

/// Bogoliubov coefficients of the in-mode u = d1 − iω_i d2 against the
/// positive/negative frequency modes of frequency `omega_proj`, with the
/// plane-wave phases evaluated at `phase_time`:
/// α = e^{iΩt}√(Ω/ω_i)(u + iu̇/Ω)/2, β = e^{−iΩt}√(Ω/ω_i)(u − iu̇/Ω)/2.
pub fn bogoliubov_projected(
    state: [f64; 4],
    omega_i: f64,
    omega_proj: f64,
    phase_time: f64,
) -> Result<BogoliubovPair> {
    if !(omega_i > 0.0) || !(omega_proj > 0.0) {
        return Err(domain("Bogoliubov projection needs positive frequencies"));
    }
    let [d1, d1_dot, d2, d2_dot] = state;
    let u = Complex64::new(d1, -omega_i * d2);
    let u_dot = Complex64::new(d1_dot, -omega_i * d2_dot);
    let i = Complex64::i();
    let norm = 0.5 * (omega_proj / omega_i).sqrt();
    let phase = Complex64::from_polar(1.0, omega_proj * phase_time);
    Ok(BogoliubovPair {
        alpha: phase * (u + i * u_dot / omega_proj) * norm,
        beta: phase.conj() * (u - i * u_dot / omega_proj) * norm,
    })
}

/// Bogoliubov pair at time `t`, projected on the instantaneous frequency
/// ω(t). While the mass still equals m_i this is
/// α = (e^{iω_i t}/2ω_i)[ω_i d1 + iḋ1 − iω_i² d2 + ω_i ḋ2] and the matching β;
/// after the process the moduli are frozen.
pub fn bogoliubov_from_mode(sol: &ModeSolution, omega_i: f64, t: f64) -> Result<BogoliubovPair> {
    if !(omega_i > 0.0) {
        return Err(domain(format!("omega_i must be positive, got {omega_i}")));
    }
    let state = sol.state_at(t)?;
    let w = sol.omega_sq(t).sqrt();
    bogoliubov_projected(state, omega_i, w, t)
}

/// Squeeze spectrum left by the process: per k, solve the mode up to t_f
/// and project on the final frequency with the time origin moved to t_f.
/// η_k = asinh|β_k|, θ_k = arg(−α_k β_k*).
pub fn squeeze_spectrum(
    profile: &MassProfile,
    k_grid: &[f64],
    tol: f64,
) -> Result<SqueezeSpectrum> {
    profile.validate()?;
    if profile.t_i < 0.0 {
        return Err(domain(
            "in-modes are fixed at t = 0; the process must start at t_i >= 0",
        ));
    }
    if k_grid.is_empty() || k_grid[0] <= 0.0 || k_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Shape(
            "k-grid must be positive and strictly ascending".into(),
        ));
    }
    let results = parallel::map(k_grid, |&k| -> Result<(f64, f64)> {
        let omega_i = k.hypot(profile.mass_i);
        let omega_f = k.hypot(profile.mass_f);
        let sol = integrate_mode(k, profile, &[0.0, profile.t_f], tol)?;
        let state = [sol.d1[1], sol.d1_dot[1], sol.d2[1], sol.d2_dot[1]];
        let pair = bogoliubov_projected(state, omega_i, omega_f, 0.0)?;
        let sq = pair.squeeze();
        Ok((sq.eta, sq.theta))
    });
    let mut eta = Vec::with_capacity(k_grid.len());
    let mut theta = Vec::with_capacity(k_grid.len());
    for r in results {
        let (e, t) = r?;
        eta.push(e);
        theta.push(t);
    }
    SqueezeSpectrum::new(k_grid.to_vec(), eta, theta)
}

/// Log-uniform wavenumber grid.
pub fn log_k_grid(k_min: f64, k_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(k_min > 0.0 && k_max > k_min) || n < 2 {
        return Err(domain("log grid needs 0 < k_min < k_max and n >= 2"));
    }
    let (a, b) = (k_min.ln(), k_max.ln());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                k_max
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}
