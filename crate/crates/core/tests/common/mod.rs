//! Brute-force oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use num_complex::Complex64;
use qbm_core::oscillator_dynamics::OscillatorSpec;
use std::f64::consts::PI;

/// Composite Simpson weights on n (even) intervals of width h.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Damped sine d₂(t) written out independently of the library.
pub fn d2_closed(t: f64, gamma: f64, omega: f64) -> f64 {
    (-gamma * t).exp() * (omega * t).sin() / omega
}

/// Trapezoid rule on [0, top] with n panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, top: f64, n: usize) -> f64 {
    let h = top / n as f64;
    let mut s = 0.5 * (f(0.0) + f(top));
    for i in 1..n {
        s += f(i as f64 * h);
    }
    s * h
}

/// ∫₀ᵗ d₂(t−s)e^{−iωs}ds by Simpson's rule on 2^14 panels.
pub fn convolution_oracle(gamma: f64, big_omega: f64, w: f64, t: f64) -> Complex64 {
    let n = 1 << 14;
    let h = t / n as f64;
    let ws = simpson_weights(n, h);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, wt) in ws.iter().enumerate() {
        let s = i as f64 * h;
        acc += Complex64::from_polar(d2_closed(t - s, gamma, big_omega) * wt, -w * s);
    }
    acc
}

/// Driven xx from the double time integral
/// (e²/m²)∫∫ d₂(t−s)d₂(t−s′)[cosh 2η K(s−s′) − sinh 2η N(s+s′)] at zero
/// temperature with the e^{−εω} regulator, where
/// K(τ) = (1/4π²)(ε² − τ²)/(ε² + τ²)² and N(σ) = (1/4π²)Re[e^{iθ}/(ε + iσ)²].
pub fn xx_double_integral(
    sp: &OscillatorSpec,
    eta: f64,
    theta: f64,
    eps: f64,
    t: f64,
    n: usize,
) -> f64 {
    let h = t / n as f64;
    let ws = simpson_weights(n, h);
    let omega = sp.resonance();
    let d: Vec<f64> = (0..=n)
        .map(|i| d2_closed(t - i as f64 * h, sp.gamma, omega))
        .collect();
    let norm = 1.0 / (4.0 * PI * PI);
    let rot = Complex64::from_polar(1.0, theta);
    let (c, s) = ((2.0 * eta).cosh(), (2.0 * eta).sinh());
    let mut total = 0.0;
    for i in 0..=n {
        let si = i as f64 * h;
        let mut row = 0.0;
        for j in 0..=n {
            let sj = j as f64 * h;
            let tau = si - sj;
            let sigma = si + sj;
            let k = norm * (eps * eps - tau * tau) / (eps * eps + tau * tau).powi(2);
            let ns = norm * (rot / Complex64::new(eps, sigma).powi(2)).re;
            row += ws[j] * d[j] * (c * k - s * ns);
        }
        total += ws[i] * d[i] * row;
    }
    let e2 = 8.0 * PI * sp.gamma * sp.m;
    e2 / (sp.m * sp.m) * total
}

/// Late-time thermal xx, (e²/m²)∫dω (ω/8π²)coth(βω/2)·2|d̃₂|², by a Kahan
/// summed trapezoid on [0, cutoff] with n panels.
pub fn late_xx_oracle(sp: &OscillatorSpec, beta: f64, cutoff: f64, n: usize) -> f64 {
    let integrand = |w: f64| {
        let wc = if w == 0.0 {
            2.0 / beta
        } else {
            w / (0.5 * beta * w).tanh()
        };
        let d = Complex64::new(sp.omega_r * sp.omega_r - w * w, -2.0 * sp.gamma * w).inv();
        wc / (8.0 * PI * PI) * 2.0 * d.norm_sqr()
    };
    let h = cutoff / n as f64;
    let mut s = 0.5 * (integrand(0.0) + integrand(cutoff));
    let mut c = 0.0;
    for i in 1..n {
        let y = integrand(i as f64 * h) - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    8.0 * PI * sp.gamma / sp.m * s * h
}
