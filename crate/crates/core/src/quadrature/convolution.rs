//! Time-domain causal convolution on a uniform grid.

use super::value::QuadValue;
use crate::error::{Error, Result};

/// `out[j] = ∫₀^{t_j} kernel(t_j − s) source(s) ds` with a real `kernel` and
/// a `source` sampled on the same uniform `grid` starting at 0.
///
/// Composite Simpson weights, with a 3/8 panel at the tail when the number
/// of intervals is odd; the first interval falls back to the trapezoid rule.
pub fn convolve_response<V: QuadValue>(
    kernel: &[f64],
    source: &[V],
    grid: &[f64],
) -> Result<Vec<V>> {
    let n = grid.len();
    if kernel.len() != n || source.len() != n {
        return Err(Error::Shape(format!(
            "kernel {} / source {} / grid {} lengths differ",
            kernel.len(),
            source.len(),
            n
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if grid[0] != 0.0 {
        return Err(Error::Shape("grid must start at 0".into()));
    }
    let h = if n > 1 { grid[1] - grid[0] } else { 0.0 };
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300) {
            return Err(Error::Shape("grid is not uniform".into()));
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        simpson_weights(j, &mut weights);
        let mut acc = V::zero();
        for (i, w) in weights.iter().enumerate() {
            acc = acc + source[i] * (kernel[j - i] * w);
        }
        out.push(acc * h);
    }
    Ok(out)
}

/// Weights (in units of h) for integrating over `intervals` equal steps.
fn simpson_weights(intervals: usize, w: &mut Vec<f64>) {
    w.clear();
    w.resize(intervals + 1, 0.0);
    match intervals {
        0 => {}
        1 => {
            w[0] = 0.5;
            w[1] = 0.5;
        }
        _ => {
            let (simpson_end, tail) = if intervals.is_multiple_of(2) {
                (intervals, false)
            } else {
                (intervals - 3, true)
            };
            if simpson_end > 0 {
                for i in (0..simpson_end).step_by(2) {
                    w[i] += 1.0 / 3.0;
                    w[i + 1] += 4.0 / 3.0;
                    w[i + 2] += 1.0 / 3.0;
                }
            }
            if tail {
                let s = simpson_end;
                w[s] += 3.0 / 8.0;
                w[s + 1] += 9.0 / 8.0;
                w[s + 2] += 9.0 / 8.0;
                w[s + 3] += 3.0 / 8.0;
            }
        }
    }
}
