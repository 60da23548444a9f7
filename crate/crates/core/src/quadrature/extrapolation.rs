//! Wynn's epsilon algorithm for accelerating sequences of partial sums.

/// Extrapolate the limit of `sums` and return it with an error estimate.
/// Uses the even columns of the epsilon table built from the last (at most
/// 50) entries.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n < 3 {
        let last = sums[n - 1];
        let err = if n == 2 {
            (sums[1] - sums[0]).abs()
        } else {
            f64::INFINITY
        };
        return (last, err);
    }
    let start = n.saturating_sub(50);
    let s = &sums[start..];
    let m = s.len();
    // prev: column k-1, cur: column k; eps_{-1} = 0, eps_0 = s.
    let mut prev = vec![0.0; m + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[m - 1];
    let mut best_err = (s[m - 1] - s[m - 2]).abs() + (s[m - 1] - s[m - 3]).abs();
    let mut k = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let p = prev[i + 1];
            if d == 0.0 || !d.is_finite() {
                next.push(f64::INFINITY);
            } else {
                next.push(p + 1.0 / d);
            }
        }
        k += 1;
        if k % 2 == 0 && next.len() >= 3 {
            let l = next.len();
            let (e0, e1, e2) = (next[l - 1], next[l - 2], next[l - 3]);
            if e0.is_finite() && e1.is_finite() && e2.is_finite() {
                let err = (e0 - e1).abs() + (e0 - e2).abs();
                if err < best_err {
                    best = e0;
                    best_err = err;
                }
            }
        }
        prev = cur;
        cur = next;
        if cur.iter().all(|v| !v.is_finite()) {
            break;
        }
    }
    (best, best_err)
}
