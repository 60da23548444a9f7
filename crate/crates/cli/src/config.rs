//! Run configuration: TOML schema, validation, sweep expansion and the
//! built-in figure presets.
//!
//! Natural units ħ = c = k_B = 1. Frequencies are in units of whichever
//! frequency the config normalizes to (Ω or ω_r); the manifest records the
//! resolved values, so nothing depends on a hidden default.

use anyhow::{anyhow, bail, Context, Result};
use qbm_core::bath_kernels::{BathSpec, BathSqueeze, SqueezeSpectrum};
use qbm_core::gaussian_state::{CovarianceState, SqueezeParam};
use qbm_core::oscillator_dynamics::{OscillatorSpec, QuadratureConfig};
use qbm_core::parametric_mode::{log_k_grid, squeeze_spectrum, MassProfile, ProfileShape};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Massless bath with a constant squeeze (η, θ).
    ConstantSqueeze,
    /// Bath squeezed by a parametric change of the field mass.
    Parametric,
    /// Unsqueezed or squeezed bath; the detector's own squeeze is tracked.
    FiniteCoupling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Product {
    Spectrum,
    Covariances,
    NsSt,
    Fluxes,
    Fdr,
    HadamardSurface,
    SqueezeTrajectory,
}

impl Product {
    pub fn file_name(self) -> &'static str {
        match self {
            Product::Spectrum => "spectrum.csv",
            Product::Covariances => "covariances.csv",
            Product::NsSt => "ins_vs_t.csv",
            Product::Fluxes => "fluxes.csv",
            Product::Fdr => "fdr.csv",
            Product::HadamardSurface => "hadamard_surface.csv",
            Product::SqueezeTrajectory => "squeeze_trajectory.csv",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Product::Spectrum => &["k", "eta", "theta"],
            Product::Covariances => &["t", "xx", "pp", "xp", "det_minus_quarter"],
            Product::NsSt => &["t", "theta", "I_NS", "I_ST"],
            Product::Fluxes => &["t", "p_xi", "p_gamma"],
            Product::Fdr => &["omega", "hadamard_side", "dissipation_side"],
            Product::HadamardSurface => &["t", "t_prime", "stationary", "nonstationary"],
            Product::SqueezeTrajectory => &["t", "xi", "eta", "theta", "sinh2_2eta", "sin_theta"],
        }
    }

    fn needs_time(self) -> bool {
        matches!(
            self,
            Product::Covariances | Product::NsSt | Product::Fluxes | Product::SqueezeTrajectory
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oscillator {
    pub m: f64,
    pub gamma: f64,
    /// Resonance frequency Ω = √(ω_r² − γ²); give this or `omega_r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bath {
    /// Inverse temperature; `inf` for a zero-temperature bath.
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Constant field mass (non-parametric scenarios).
    #[serde(default)]
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Tanh,
    Step,
    SmoothStep(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub mass_i: f64,
    pub mass_f: f64,
    pub t_i: f64,
    pub t_f: f64,
    pub shape: Shape,
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
    #[serde(default = "default_mode_tol")]
    pub mode_tol: f64,
    /// CSV with columns k, eta[, theta]; replaces the computed spectrum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_csv: Option<PathBuf>,
}

fn default_mode_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub xx: f64,
    pub pp: f64,
    #[serde(default)]
    pub xp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / n)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_rel")]
    pub rel_tol: f64,
    #[serde(default = "default_abs")]
    pub abs_tol: f64,
    #[serde(default = "default_subdivisions")]
    pub max_subdivisions: usize,
}

fn default_cutoff() -> f64 {
    QuadratureConfig::default().cutoff
}
fn default_rel() -> f64 {
    QuadratureConfig::default().rel_tol
}
fn default_abs() -> f64 {
    QuadratureConfig::default().abs_tol
}
fn default_subdivisions() -> usize {
    QuadratureConfig::default().max_subdivisions
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            cutoff: default_cutoff(),
            epsilon: 0.0,
            rel_tol: default_rel(),
            abs_tol: default_abs(),
            max_subdivisions: default_subdivisions(),
        }
    }
}

impl Quadrature {
    pub fn to_core(self) -> QuadratureConfig {
        QuadratureConfig {
            cutoff: self.cutoff,
            epsilon: self.epsilon,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }

    pub fn describe(&self) -> String {
        if self.epsilon > 0.0 {
            format!("exponential e^(-epsilon*omega), epsilon = {}", self.epsilon)
        } else if self.cutoff.is_finite() {
            format!("hard cutoff Lambda = {}", self.cutoff)
        } else {
            "none".to_string()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdrGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Surface {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    /// Dotted path of the swept value, e.g. "bath.beta".
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

pub const SWEEPABLE: &[&str] = &[
    "oscillator.m",
    "oscillator.gamma",
    "oscillator.resonance",
    "oscillator.omega_r",
    "bath.beta",
    "bath.eta",
    "bath.theta",
    "bath.mass",
    "profile.mass_i",
    "profile.mass_f",
    "profile.t_f",
    "initial.xx",
    "initial.pp",
    "quadrature.cutoff",
    "quadrature.epsilon",
];

impl Sweep {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !SWEEPABLE.contains(&self.parameter.as_str()) {
            bail!(
                "cannot sweep '{}'; sweepable: {}",
                self.parameter,
                SWEEPABLE.join(", ")
            );
        }
        let pts = match (&self.values, self.start, self.stop, self.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
            _ => bail!("sweep needs either `values` or all of `start`, `stop`, `steps`"),
        };
        if pts.is_empty() {
            bail!("sweep over '{}' has no points", self.parameter);
        }
        if pts.iter().any(|v| v.is_nan()) {
            bail!("sweep over '{}' contains NaN", self.parameter);
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub outputs: Vec<Product>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub oscillator: Oscillator,
    pub bath: Bath,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Initial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fdr: Option<FdrGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<Surface>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

/// A validated sweep point with every input built.
pub struct Resolved {
    pub spec: OscillatorSpec,
    pub bath: BathSpec,
    pub init: CovarianceState,
    pub quad: QuadratureConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Fill every default so the config written to the manifest is complete.
    /// Relative spectrum paths are resolved against `base`.
    pub fn resolve(mut self, base: &Path) -> Result<Self> {
        if self.outputs.is_empty() {
            self.outputs = match self.scenario {
                Scenario::ConstantSqueeze => vec![Product::Covariances, Product::NsSt],
                Scenario::Parametric => {
                    vec![Product::Spectrum, Product::Covariances, Product::Fluxes]
                }
                Scenario::FiniteCoupling => vec![Product::Covariances, Product::SqueezeTrajectory],
            };
        }
        self.outputs.sort();
        self.outputs.dedup();
        if self.scenario != Scenario::Parametric {
            self.bath.eta.get_or_insert(0.0);
            self.bath.theta.get_or_insert(0.0);
        }
        if self.initial.is_none() {
            // ground state of the uncoupled oscillator
            let spec = self.oscillator_spec()?;
            self.initial = Some(Initial {
                xx: 0.5 / (spec.m * spec.omega_r),
                pp: 0.5 * spec.m * spec.omega_r,
                xp: 0.0,
            });
        }
        if let Some(p) = self.profile.as_mut() {
            if let Some(csv) = p.spectrum_csv.as_mut() {
                if csv.is_relative() {
                    *csv = base.join(&*csv);
                }
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.scenario, &self.profile) {
            (Scenario::Parametric, None) => {
                bail!("the parametric scenario needs a [profile] section")
            }
            (Scenario::ConstantSqueeze | Scenario::FiniteCoupling, Some(_)) => {
                bail!("a [profile] section is only allowed in the parametric scenario")
            }
            _ => {}
        }
        if self.scenario == Scenario::Parametric {
            if self.bath.eta.is_some() || self.bath.theta.is_some() || self.bath.mass != 0.0 {
                bail!("in the parametric scenario the squeeze and masses come from [profile]; drop bath.eta, bath.theta, bath.mass");
            }
            if self.outputs.contains(&Product::NsSt) {
                bail!("ns_st needs a constant squeeze; not available in the parametric scenario");
            }
        } else if self.outputs.contains(&Product::Spectrum) {
            bail!("the spectrum product belongs to the parametric scenario");
        }
        if self.scenario == Scenario::ConstantSqueeze
            && self.bath.mass != 0.0
            && self.outputs.contains(&Product::NsSt)
        {
            bail!("ns_st needs a massless bath");
        }
        if self.outputs.iter().any(|p| p.needs_time()) {
            let t = self
                .time
                .ok_or_else(|| anyhow!("requested outputs need a [time] grid"))?;
            if t.points == 0 || !(t.start >= 0.0) || !(t.stop >= t.start) || !t.stop.is_finite() {
                bail!("time grid needs 0 <= start <= stop < inf and points >= 1");
            }
        }
        if self.outputs.contains(&Product::Fdr) {
            let f = self
                .fdr
                .ok_or_else(|| anyhow!("the fdr product needs an [fdr] grid"))?;
            if f.points < 2 || !(f.omega_max > f.omega_min) {
                bail!("fdr grid needs omega_min < omega_max and points >= 2");
            }
        }
        if self.outputs.contains(&Product::HadamardSurface) {
            let s = self
                .surface
                .ok_or_else(|| anyhow!("hadamard_surface needs a [surface] grid"))?;
            if s.points < 2 || !(s.t_min >= 0.0) || !(s.t_max > s.t_min) {
                bail!("surface grid needs 0 <= t_min < t_max and points >= 2");
            }
        }
        if let Some(sw) = &self.sweep {
            sw.points()?;
            if sw.parameter.starts_with("profile.") && self.profile.is_none() {
                bail!(
                    "cannot sweep '{}' without a [profile] section",
                    sw.parameter
                );
            }
            if sw.parameter == "oscillator.resonance" && self.oscillator.resonance.is_none()
                || sw.parameter == "oscillator.omega_r" && self.oscillator.omega_r.is_none()
            {
                bail!(
                    "sweep over '{}' needs that frequency to be the one given",
                    sw.parameter
                );
            }
            if matches!(
                sw.parameter.as_str(),
                "bath.eta" | "bath.theta" | "bath.mass"
            ) && self.scenario == Scenario::Parametric
            {
                bail!("cannot sweep '{}' in the parametric scenario", sw.parameter);
            }
        }
        // builds every core object once so bad numbers fail as config errors
        self.oscillator_spec()?;
        self.bath_without_spectrum()?;
        if let Some(p) = &self.profile {
            mass_profile(p)
                .validate()
                .map_err(|e| anyhow!("profile: {e}"))?;
            if p.spectrum_csv.is_none() {
                log_k_grid(p.k_min, p.k_max, p.k_points)
                    .map_err(|e| anyhow!("profile k grid: {e}"))?;
            }
        }
        Ok(())
    }

    pub fn oscillator_spec(&self) -> Result<OscillatorSpec> {
        let o = &self.oscillator;
        let spec = match (o.resonance, o.omega_r) {
            (Some(r), None) => OscillatorSpec::from_resonance(o.m, r, o.gamma),
            (None, Some(w)) => OscillatorSpec::new(o.m, w, o.gamma),
            _ => bail!("give exactly one of oscillator.resonance and oscillator.omega_r"),
        };
        spec.map_err(|e| anyhow!("oscillator: {e}"))
    }

    fn bath_without_spectrum(&self) -> Result<BathSpec> {
        let b = &self.bath;
        let (squeeze, mass_i, mass_f) = match &self.profile {
            Some(p) => (BathSqueeze::None, p.mass_i, p.mass_f),
            None => {
                let sq = SqueezeParam::new(b.eta.unwrap_or(0.0), b.theta.unwrap_or(0.0))
                    .map_err(|e| anyhow!("bath: {e}"))?;
                (BathSqueeze::Constant(sq), b.mass, b.mass)
            }
        };
        let bath = BathSpec {
            beta: b.beta,
            squeeze,
            mass_i,
            mass_f,
        };
        bath.validate().map_err(|e| anyhow!("bath: {e}"))?;
        Ok(bath)
    }

    /// Squeeze spectrum of the parametric scenario, read or computed.
    pub fn spectrum(&self) -> qbm_core::Result<Option<SqueezeSpectrum>> {
        let Some(p) = &self.profile else {
            return Ok(None);
        };
        if let Some(path) = &p.spectrum_csv {
            return read_spectrum(path).map(Some);
        }
        let k = log_k_grid(p.k_min, p.k_max, p.k_points)?;
        squeeze_spectrum(&mass_profile(p), &k, p.mode_tol).map(Some)
    }

    /// Core inputs for this (already swept) config.
    pub fn build(&self, spectrum: Option<SqueezeSpectrum>) -> Result<Resolved> {
        let spec = self.oscillator_spec()?;
        let mut bath = self.bath_without_spectrum()?;
        if let Some(sp) = spectrum {
            bath.squeeze = BathSqueeze::Spectrum(sp);
        }
        let i = self
            .initial
            .ok_or_else(|| anyhow!("config was not resolved"))?;
        let init = CovarianceState::new(i.xx, i.pp, i.xp);
        if !init.is_physical() {
            bail!(
                "initial covariance ({}, {}, {}) violates the uncertainty relation",
                i.xx,
                i.pp,
                i.xp
            );
        }
        Ok(Resolved {
            spec,
            bath,
            init,
            quad: self.quadrature.to_core(),
        })
    }

    /// Copy of this config with the swept parameter set to `value`.
    pub fn with_parameter(&self, path: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let profile = || anyhow!("no [profile] section");
        match path {
            "oscillator.m" => c.oscillator.m = value,
            "oscillator.gamma" => c.oscillator.gamma = value,
            "oscillator.resonance" => c.oscillator.resonance = Some(value),
            "oscillator.omega_r" => c.oscillator.omega_r = Some(value),
            "bath.beta" => c.bath.beta = value,
            "bath.eta" => c.bath.eta = Some(value),
            "bath.theta" => c.bath.theta = Some(value),
            "bath.mass" => c.bath.mass = value,
            "profile.mass_i" => c.profile.as_mut().ok_or_else(profile)?.mass_i = value,
            "profile.mass_f" => c.profile.as_mut().ok_or_else(profile)?.mass_f = value,
            "profile.t_f" => c.profile.as_mut().ok_or_else(profile)?.t_f = value,
            "initial.xx" => {
                c.initial
                    .get_or_insert(Initial {
                        xx: 0.0,
                        pp: 0.0,
                        xp: 0.0,
                    })
                    .xx = value
            }
            "initial.pp" => {
                c.initial
                    .get_or_insert(Initial {
                        xx: 0.0,
                        pp: 0.0,
                        xp: 0.0,
                    })
                    .pp = value
            }
            "quadrature.cutoff" => c.quadrature.cutoff = value,
            "quadrature.epsilon" => c.quadrature.epsilon = value,
            other => bail!("cannot sweep '{other}'"),
        }
        c.sweep = None;
        Ok(c)
    }
}

fn mass_profile(p: &Profile) -> MassProfile {
    let shape = match p.shape {
        Shape::Tanh => ProfileShape::Tanh,
        Shape::Step => ProfileShape::Step,
        Shape::SmoothStep(n) => ProfileShape::SmoothStep(n),
    };
    MassProfile {
        mass_i: p.mass_i,
        mass_f: p.mass_f,
        t_i: p.t_i,
        t_f: p.t_f,
        shape,
    }
}

/// Spectrum exchange format: header row, columns k, eta and optionally theta.
pub fn read_spectrum(path: &Path) -> qbm_core::Result<SqueezeSpectrum> {
    let bad = |msg: String| qbm_core::Error::Configuration(format!("{}: {msg}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (ki, ei) = match (col("k"), col("eta")) {
        (Some(k), Some(e)) => (k, e),
        _ => return Err(bad("needs columns k and eta".into())),
    };
    let ti = col("theta");
    let (mut k, mut eta, mut theta) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> qbm_core::Result<f64> {
            rec.get(i)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|e| bad(format!("{e} in row {:?}", rec)))
        };
        k.push(num(ki)?);
        eta.push(num(ei)?);
        theta.push(match ti {
            Some(i) => num(i)?,
            None => 0.0,
        });
    }
    SqueezeSpectrum::new(k, eta, theta)
}

/// Figure presets. Presets 4, 5, tan2eta and tanphi measure frequencies in
/// units of Omega; 6, 7 and grn3d in units of omega_r. The `note` says which.
pub const FIGURES: &[&str] = &["4", "5", "6", "7", "grn3d", "tan2eta", "tanphi"];

pub fn preset(figure: &str) -> Result<RunConfig> {
    let text = match figure {
        "4" | "5" => format!(
            r#"
scenario = "constant_squeeze"
outputs = ["ns_st"]
note = "I_NS and I_ST for three squeeze angles; units of Omega; m = 1, Omega = 1, gamma = 0.1, beta = 0.3, eta = 1 (free choice)."

[oscillator]
m = 1.0
gamma = 0.1
resonance = 1.0

[bath]
beta = 0.3
eta = 1.0

[initial]
xx = 0.5
pp = 0.5

[time]
start = 0.0
stop = 200.0
points = 81

[sweep]
parameter = "bath.theta"
values = [0.0, {}, {}]
"#,
            PI / 6.0,
            PI / 2.0
        ),
        "6" => format!(
            r#"
scenario = "constant_squeeze"
outputs = ["covariances"]
note = "<chi^2(t)> for three squeeze angles; units of omega_r; m = 1, omega_r = 1, gamma = 0.3, beta = 10, eta = 1 (free choice)."

[oscillator]
m = 1.0
gamma = 0.3
omega_r = 1.0

[bath]
beta = 10.0
eta = 1.0

[initial]
xx = 0.5
pp = 0.5

[time]
start = 0.0
stop = 30.0
points = 61

[sweep]
parameter = "bath.theta"
values = [0.0, {}, {}]
"#,
            PI / 6.0,
            PI / 2.0
        ),
        "7" => r#"
scenario = "constant_squeeze"
outputs = ["covariances"]
note = "<chi^2(t)> for four temperatures; units of omega_r; m = 1, omega_r = 1, gamma = 0.3, eta = 2, theta = 0."

[oscillator]
m = 1.0
gamma = 0.3
omega_r = 1.0

[bath]
beta = 10.0
eta = 2.0
theta = 0.0

[initial]
xx = 0.5
pp = 0.5

[time]
start = 0.0
stop = 20.0
points = 41

[sweep]
parameter = "bath.beta"
values = [100.0, 10.0, 1.0, 0.1]
"#
        .to_string(),
        "grn3d" => r#"
scenario = "constant_squeeze"
outputs = ["hadamard_surface"]
note = "Two-time Hadamard function of the detector; units of omega_r; omega_r = 1, gamma = 0.1, zero temperature, theta = 0, eta = 1 (squeeze factors divide out of the plotted ratio)."

[oscillator]
m = 1.0
gamma = 0.1
omega_r = 1.0

[bath]
beta = inf
eta = 1.0
theta = 0.0

[surface]
t_min = 20.0
t_max = 40.0
points = 21
"#
        .to_string(),
        "tan2eta" | "tanphi" => r#"
scenario = "finite_coupling"
outputs = ["squeeze_trajectory"]
note = "Squeeze of the detector state, sinh^2 2eta and sin theta; units of Omega; m = 1, Omega = 1, beta = 10, Lambda = 1000, <chi^2(0)> = 2, <p^2(0)> = 1."

[oscillator]
m = 1.0
gamma = 0.1
resonance = 1.0

[bath]
beta = 10.0

[initial]
xx = 2.0
pp = 1.0

[time]
start = 0.0
stop = 500.0
points = 51

[quadrature]
cutoff = 1000.0

[sweep]
parameter = "oscillator.gamma"
values = [0.3, 0.1, 0.03]
"#
        .to_string(),
        other => bail!("unknown figure '{other}'; known: {}", FIGURES.join(", ")),
    };
    RunConfig::parse(&text)
}
