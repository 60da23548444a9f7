//! Dormand-Prince 5(4) stepper with embedded error control, sized for the
//! small linear systems of the mode equation.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 20_000_000;

pub(crate) struct Stepper {
    pub rtol: f64,
    pub atol: f64,
    pub h: f64,
    pub steps: usize,
}

impl Stepper {
    pub fn new(tol: f64, h0: f64) -> Self {
        Stepper {
            rtol: tol,
            atol: tol,
            h: h0,
            steps: 0,
        }
    }

    /// Advance `y` from `t0` to exactly `t1` (> t0).
    pub fn advance<const N: usize, F>(
        &mut self,
        f: &F,
        t0: f64,
        t1: f64,
        y: &mut [f64; N],
    ) -> Result<()>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let mut t = t0;
        let mut k1 = f(t, y);
        while t < t1 {
            if self.steps > MAX_STEPS {
                return Err(Error::Convergence {
                    message: format!("ODE step budget exhausted at t = {t}"),
                    partial: y[0],
                    error: f64::NAN,
                });
            }
            let last = t + self.h >= t1;
            let h = if last { t1 - t } else { self.h };
            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for s in 1..7 {
                let mut ys = *y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += h * a * kj[i];
                        }
                    }
                }
                k[s] = f(t + C[s] * h, &ys);
            }
            // row 6 of A is the fifth-order solution, so k[6] = f(y_new)
            let mut y_new = *y;
            for (j, kj) in k.iter().enumerate().take(6) {
                for i in 0..N {
                    y_new[i] += h * A[6][j] * kj[i];
                }
            }
            let mut err: f64 = 0.0;
            for i in 0..N {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((h * e).abs() / scale);
            }
            self.steps += 1;
            if !err.is_finite() {
                return Err(Error::Convergence {
                    message: format!("non-finite ODE state at t = {t}"),
                    partial: y[0],
                    error: err,
                });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { t1 } else { t + h };
                *y = y_new;
                k1 = k[6];
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.h = h * factor.min(1.0);
            }
            if self.h <= f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::Convergence {
                    message: format!("ODE step size underflow at t = {t}"),
                    partial: y[0],
                    error: err,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -4.0 * y[0]];
        let mut y = [1.0, 0.0];
        let mut st = Stepper::new(1e-11, 0.01);
        st.advance(&f, 0.0, 10.0, &mut y).unwrap();
        assert!((y[0] - (20.0f64).cos()).abs() < 1e-8);
        assert!((y[1] + 2.0 * (20.0f64).sin()).abs() < 1e-8);
    }

    #[test]
    fn lands_on_endpoint() {
        let f = |_t: f64, _y: &[f64; 1]| [1.0];
        let mut y = [0.0];
        let mut st = Stepper::new(1e-10, 0.3);
        st.advance(&f, 0.0, 1.0, &mut y).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-14);
    }
}
