//! 21-point Gauss-Kronrod rule and the globally adaptive driver built on it.
#![allow(clippy::excessive_precision)] // tabulated nodes and weights, kept as published

use super::value::{CompensatedSum, QuadValue};
use crate::error::{Error, Result};
use crate::parallel;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_132_941,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub(crate) const EVALS_PER_PANEL: usize = 21;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel<V: QuadValue> {
    pub a: f64,
    pub b: f64,
    pub value: V,
    pub error: f64,
    /// Error level below which rounding dominates; such panels are not split.
    pub floor: f64,
}

/// Apply the rule on `[a, b]`. Non-finite samples are reported as an error
/// because they poison every later reduction.
pub(crate) fn gk21<V, F>(f: &F, a: f64, b: f64) -> Result<Panel<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = V::zero();
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    if !resk.is_finite() {
        return Err(Error::Convergence {
            message: format!("integrand not finite on [{a}, {b}]"),
            partial: f64::NAN,
            error: f64::INFINITY,
        });
    }
    let reskh = resk * 0.5;
    let mut resabs = fc.norm() * WGK[10];
    let mut resasc = (fc - reskh).norm() * WGK[10];
    for j in 0..10 {
        resabs += WGK[j] * (fv1[j].norm() + fv2[j].norm());
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let hl = half.abs();
    let result = resk * half;
    resabs *= hl;
    resasc *= hl;
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Ok(Panel {
        a,
        b,
        value: result,
        error: err,
        floor,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AdaptiveOutcome<V: QuadValue> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
    pub roundoff_limited: bool,
}

/// Globally adaptive integration starting from the given partition.
/// Panels are refined in batches, each batch evaluated through
/// [`parallel::map`]; since every panel result is independent and the
/// reduction order is fixed, the outcome does not depend on threading.
pub(crate) fn adaptive<V, F>(
    f: &F,
    edges: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<AdaptiveOutcome<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V + Sync,
{
    let intervals: Vec<(f64, f64)> = edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    if intervals.is_empty() {
        return Ok(AdaptiveOutcome {
            value: V::zero(),
            error: 0.0,
            evaluations: 0,
            panels: 0,
            roundoff_limited: false,
        });
    }
    let mut panels: Vec<Panel<V>> = parallel::map(&intervals, |&(a, b)| gk21(f, a, b))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut evaluations = panels.len() * EVALS_PER_PANEL;
    let mut splits = 0usize;
    loop {
        let mut sum = CompensatedSum::new();
        let mut err = 0.0;
        for p in &panels {
            sum.add(p.value);
            err += p.error;
        }
        let value = sum.value();
        let target = abs_tol.max(rel_tol * value.norm());
        if err <= target {
            return Ok(AdaptiveOutcome {
                value,
                error: err,
                evaluations,
                panels: panels.len(),
                roundoff_limited: false,
            });
        }
        let per_panel = target / panels.len() as f64;
        let mut candidates: Vec<usize> = (0..panels.len())
            .filter(|&i| {
                let p = &panels[i];
                let width_ok = (p.b - p.a) > 1e-13 * p.a.abs().max(p.b.abs()).max(1e-300);
                p.error > p.floor * 1.0001 && width_ok && p.error > per_panel
            })
            .collect();
        if candidates.is_empty() {
            return Ok(AdaptiveOutcome {
                value,
                error: err,
                evaluations,
                panels: panels.len(),
                roundoff_limited: true,
            });
        }
        if splits >= max_subdivisions {
            return Err(Error::Convergence {
                message: format!(
                    "subdivision limit {max_subdivisions} reached with {} panels",
                    panels.len()
                ),
                partial: value.norm(),
                error: err,
            });
        }
        candidates.sort_by(|&i, &j| {
            panels[j]
                .error
                .partial_cmp(&panels[i].error)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(&j))
        });
        let budget = (max_subdivisions - splits).clamp(1, 4096);
        candidates.truncate(budget);
        let halves: Vec<(f64, f64, f64)> = candidates
            .iter()
            .map(|&i| {
                let p = &panels[i];
                (p.a, 0.5 * (p.a + p.b), p.b)
            })
            .collect();
        let children: Vec<Result<(Panel<V>, Panel<V>)>> =
            parallel::map(&halves, |&(a, m, b)| Ok((gk21(f, a, m)?, gk21(f, m, b)?)));
        for (slot, child) in candidates.iter().zip(children) {
            let (left, right) = child?;
            panels[*slot] = left;
            panels.push(right);
        }
        splits += candidates.len();
        evaluations += 2 * EVALS_PER_PANEL * candidates.len();
    }
}
