//! Bessel function of the first kind, order one.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// J₁(x) for x ≥ 0 (odd extension for x < 0).
///
/// Power series below 8, Miller's backward recurrence up to 25 and the
/// Hankel asymptotic expansion beyond. Absolute accuracy is near 1e-15 for
/// x ≤ 1000.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x < SERIES_LIMIT {
        series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        backward_recurrence(x)
    } else {
        hankel(x)
    }
}

fn series(x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    for k in 1..60 {
        let kf = k as f64;
        term *= -h2 / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn backward_recurrence(x: f64) -> f64 {
    let mut n = x as usize + 40;
    if n % 2 == 1 {
        n += 1;
    }
    let two_over_x = 2.0 / x;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    let mut k = n;
    while k > 0 {
        let j_prev = (k as f64) * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        k -= 1;
        if k.is_multiple_of(2) && k > 0 {
            norm += 2.0 * j_cur;
        }
        if k == 1 {
            j1 = j_cur;
        }
        if j_cur.abs() > 1e200 {
            j_cur *= 1e-200;
            j_next *= 1e-200;
            norm *= 1e-200;
            j1 *= 1e-200;
        }
    }
    norm += j_cur; // J_0
    j1 / norm
}

fn hankel(x: f64) -> f64 {
    // P ~ Σ (-1)^k a_{2k} / x^{2k}, Q ~ Σ (-1)^k a_{2k+1} / x^{2k+1} with
    // a_j = Π_{i=1..j} (4 - (2i-1)^2) / (j! 8^j).
    let mu = 4.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for j in 1..200 {
        let jf = j as f64;
        let odd = 2.0 * jf - 1.0;
        term *= (mu - odd * odd) / (jf * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        match j % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // cos(x - 3π/4) and sin(x - 3π/4) without forming the shifted argument.
    let cos_chi = (s - c) * FRAC_1_SQRT_2;
    let sin_chi = -(s + c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
