//! Evaluates a resolved config, writes the CSV products and the manifest.

use crate::config::{Product, RunConfig};
use anyhow::{Context, Result};
use qbm_core::energy_fdr::{fdr_oscillator, flux_report};
use qbm_core::gaussian_state::extract_squeeze;
use qbm_core::oscillator_dynamics::{chi_hadamard, covariance_evolution, ns_st_split};
use qbm_core::parallel;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Config,
    Numerical,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub point: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<String>,
    pub kind: FailureKind,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub product: Product,
    pub path: String,
    pub sha256: String,
    pub rows: usize,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub point: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<String>,
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepInfo {
    pub parameter: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Fully resolved config; TOML keeps `inf` for zero temperature.
    pub config_toml: String,
    pub config_sha256: String,
    pub regulator: String,
    pub threads: usize,
    pub parallel: bool,
    pub started_unix_s: u64,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepInfo>,
    pub files: Vec<FileEntry>,
    pub summaries: Vec<Summary>,
    pub failures: Vec<Failure>,
}

impl RunManifest {
    /// 0 when every point succeeded, 3 if any failure was numerical, else 2.
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else if self
            .failures
            .iter()
            .any(|f| f.kind == FailureKind::Numerical)
        {
            3
        } else {
            2
        }
    }
}

type Rows = Vec<Vec<f64>>;

struct PointOutput {
    tables: BTreeMap<Product, Rows>,
    summaries: Vec<(&'static str, f64)>,
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn classify(e: &anyhow::Error) -> FailureKind {
    match e.downcast_ref::<qbm_core::Error>() {
        Some(err) if err.is_numerical() => FailureKind::Numerical,
        _ => FailureKind::Config,
    }
}

fn collect<T>(v: Vec<qbm_core::Result<T>>) -> qbm_core::Result<Vec<T>> {
    v.into_iter().collect()
}

fn evaluate(cfg: &RunConfig) -> Result<PointOutput> {
    let spectrum = cfg.spectrum()?;
    let r = cfg.build(spectrum.clone())?;
    let (spec, bath, init, quad) = (&r.spec, &r.bath, &r.init, &r.quad);
    let mut out = PointOutput {
        tables: BTreeMap::new(),
        summaries: Vec::new(),
    };
    let wants = |p| cfg.outputs.contains(&p);
    let times = cfg.time.map(|t| t.values()).unwrap_or_default();

    if wants(Product::Spectrum) {
        if let Some(sp) = &spectrum {
            let theta = sp.theta();
            let rows = sp
                .k()
                .iter()
                .zip(sp.eta())
                .zip(theta)
                .map(|((&k, &e), th)| vec![k, e, th])
                .collect();
            out.tables.insert(Product::Spectrum, rows);
        }
    }

    if wants(Product::Covariances) || wants(Product::SqueezeTrajectory) {
        let covs = collect(parallel::map(&times, |&t| {
            covariance_evolution(spec, bath, init, t, quad)
        }))?;
        if wants(Product::Covariances) {
            let rows: Rows = times
                .iter()
                .zip(&covs)
                .map(|(&t, c)| vec![t, c.xx, c.pp, c.xp, c.determinant() - 0.25])
                .collect();
            if let Some(last) = rows.last() {
                out.summaries.push(("final_xx", last[1]));
                out.summaries.push(("final_pp", last[2]));
            }
            out.tables.insert(Product::Covariances, rows);
        }
        if wants(Product::SqueezeTrajectory) {
            let mut rows = Vec::with_capacity(times.len());
            for (&t, c) in times.iter().zip(&covs) {
                let d = extract_squeeze(c, spec.m, spec.omega_r)?;
                let (eta, theta) = (d.squeeze.eta, d.squeeze.theta);
                rows.push(vec![
                    t,
                    d.xi,
                    eta,
                    theta,
                    (2.0 * eta).sinh().powi(2),
                    theta.sin(),
                ]);
            }
            if let Some(last) = rows.last() {
                out.summaries.push(("final_sinh2_2eta", last[4]));
                out.summaries.push(("final_sin_theta", last[5]));
            }
            out.tables.insert(Product::SqueezeTrajectory, rows);
        }
    }

    if wants(Product::NsSt) {
        let theta = cfg.bath.theta.unwrap_or(0.0);
        let split = collect(parallel::map(&times, |&t| ns_st_split(spec, bath, t, quad)))?;
        let rows: Rows = times
            .iter()
            .zip(split)
            .map(|(&t, (ns, st))| vec![t, theta, ns, st])
            .collect();
        if let Some(last) = rows.last() {
            out.summaries.push(("final_ns_over_st", last[2] / last[3]));
        }
        out.tables.insert(Product::NsSt, rows);
    }

    if wants(Product::Fluxes) {
        let rep = flux_report(spec, bath, init, &times, quad)?;
        let rows = (0..rep.times.len())
            .map(|i| vec![rep.times[i], rep.p_xi[i], rep.p_gamma[i]])
            .collect();
        out.summaries
            .push(("balance_residual", rep.balance_residual));
        out.tables.insert(Product::Fluxes, rows);
    }

    if let (true, Some(g)) = (wants(Product::Fdr), cfg.fdr) {
        let n = (g.points - 1) as f64;
        let grid: Vec<f64> = (0..g.points)
            .map(|i| g.omega_min + (g.omega_max - g.omega_min) * i as f64 / n)
            .collect();
        let rep = fdr_oscillator(spec, bath, &grid)?;
        let rows = (0..rep.omegas.len())
            .map(|i| vec![rep.omegas[i], rep.hadamard_side[i], rep.dissipation_side[i]])
            .collect();
        out.summaries
            .push(("fdr_max_rel_deviation", rep.max_rel_deviation));
        out.tables.insert(Product::Fdr, rows);
    }

    if let (true, Some(s)) = (wants(Product::HadamardSurface), cfg.surface) {
        let n = (s.points - 1) as f64;
        let ts: Vec<f64> = (0..s.points)
            .map(|i| s.t_min + (s.t_max - s.t_min) * i as f64 / n)
            .collect();
        let pairs: Vec<(f64, f64)> = ts
            .iter()
            .flat_map(|&a| ts.iter().map(move |&b| (a, b)))
            .collect();
        let vals = collect(parallel::map(&pairs, |&(a, b)| {
            chi_hadamard(spec, bath, a, b, quad)
        }))?;
        let rows = pairs
            .iter()
            .zip(vals)
            .map(|(&(a, b), v)| vec![a, b, v.stationary, v.nonstationary])
            .collect();
        out.tables.insert(Product::HadamardSurface, rows);
    }

    Ok(out)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs `cfg` (already resolved) and writes everything under `out_dir`.
pub fn execute(
    cfg: &RunConfig,
    out_dir: &Path,
    threads: usize,
    figure: Option<&str>,
) -> Result<RunManifest> {
    let started = Instant::now();
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let started_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let config_toml = cfg.to_toml()?;
    let config_sha256 = hex(&Sha256::digest(config_toml.as_bytes()));

    let sweep = match &cfg.sweep {
        Some(sw) => Some((sw.parameter.clone(), sw.points()?)),
        None => None,
    };
    let points: Vec<Option<f64>> = match &sweep {
        Some((_, vals)) => vals.iter().map(|&v| Some(v)).collect(),
        None => vec![None],
    };

    let results = parallel::with_threads(threads, || {
        parallel::map(&points, |v| match (v, &sweep) {
            (Some(v), Some((path, _))) => cfg.with_parameter(path, *v).and_then(|c| {
                c.validate()?;
                evaluate(&c)
            }),
            _ => evaluate(cfg),
        })
    });

    let mut failures = Vec::new();
    let mut summaries = Vec::new();
    let mut ok: Vec<(Option<f64>, PointOutput)> = Vec::new();
    for (i, (v, r)) in points.iter().zip(results).enumerate() {
        let sweep_value = v.map(fmt);
        match r {
            Ok(o) => {
                for &(name, value) in &o.summaries {
                    summaries.push(Summary {
                        point: i,
                        sweep_value: sweep_value.clone(),
                        name,
                        value,
                    });
                }
                ok.push((*v, o));
            }
            Err(e) => failures.push(Failure {
                point: i,
                sweep_value,
                kind: classify(&e),
                message: format!("{e:#}"),
            }),
        }
    }

    let mut files = Vec::new();
    for &product in &cfg.outputs {
        let mut columns: Vec<String> = product.columns().iter().map(|s| s.to_string()).collect();
        if let Some((path, _)) = &sweep {
            columns.insert(0, path.clone());
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&columns)?;
        let mut rows = 0;
        for (v, o) in &ok {
            let Some(table) = o.tables.get(&product) else {
                continue;
            };
            for row in table {
                let mut rec: Vec<String> = Vec::with_capacity(row.len() + 1);
                if let Some(v) = v {
                    rec.push(fmt(*v));
                }
                rec.extend(row.iter().map(|&x| fmt(x)));
                w.write_record(&rec)?;
                rows += 1;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        let name = product.file_name();
        std::fs::write(out_dir.join(name), &bytes).with_context(|| format!("writing {name}"))?;
        files.push(FileEntry {
            product,
            path: name.to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
            rows,
            columns,
        });
    }

    let manifest = RunManifest {
        tool: "qbm",
        version: env!("CARGO_PKG_VERSION"),
        figure: figure.map(str::to_string),
        note: cfg.note.clone(),
        config_toml,
        config_sha256,
        regulator: cfg.quadrature.describe(),
        threads,
        parallel: parallel::is_parallel(),
        started_unix_s,
        wall_time_s: started.elapsed().as_secs_f64(),
        sweep: sweep.map(|(parameter, vals)| SweepInfo {
            parameter,
            values: vals.into_iter().map(fmt).collect(),
        }),
        files,
        summaries,
        failures,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(out_dir.join("manifest.json"), json + "\n").context("writing manifest.json")?;
    Ok(manifest)
}
