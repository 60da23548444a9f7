use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Values that can be integrated: reals, complex numbers and small fixed
/// vectors (several integrands sharing one set of nodes).
pub trait QuadValue:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    /// Max-abs norm used for error control.
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn to_parts(&self, out: &mut Vec<f64>);
    fn from_parts(parts: &[f64]) -> Self;
    /// Neumaier step: add `x` into the running `sum`, carrying lost low
    /// bits in `comp`.
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self);
}

#[inline]
fn neumaier(s: &mut f64, c: &mut f64, x: f64) {
    let t = *s + x;
    if s.abs() >= x.abs() {
        *c += (*s - t) + x;
    } else {
        *c += (x - t) + *s;
    }
    *s = t;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_parts(&self, out: &mut Vec<f64>) {
        out.push(*self);
    }
    fn from_parts(parts: &[f64]) -> Self {
        parts[0]
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier(sum, comp, x);
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_parts(&self, out: &mut Vec<f64>) {
        out.push(self.re);
        out.push(self.im);
    }
    fn from_parts(parts: &[f64]) -> Self {
        Complex64::new(parts[0], parts[1])
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier(&mut sum.re, &mut comp.re, x.re);
        neumaier(&mut sum.im, &mut comp.im, x.im);
    }
}

/// Fixed-size real vector integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Vector<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            self.0[i] += rhs.0[i];
        }
        self
    }
}

impl<const N: usize> Sub for Vector<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            self.0[i] -= rhs.0[i];
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Vector<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for v in self.0.iter_mut() {
            *v *= rhs;
        }
        self
    }
}

impl<const N: usize> QuadValue for Vector<N> {
    fn zero() -> Self {
        Vector([0.0; N])
    }
    fn norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
    fn to_parts(&self, out: &mut Vec<f64>) {
        out.extend_from_slice(&self.0);
    }
    fn from_parts(parts: &[f64]) -> Self {
        let mut v = [0.0; N];
        v.copy_from_slice(&parts[..N]);
        Vector(v)
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        for i in 0..N {
            neumaier(&mut sum.0[i], &mut comp.0[i], x.0[i]);
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CompensatedSum<V: QuadValue> {
    sum: V,
    comp: V,
}

impl<V: QuadValue> CompensatedSum<V> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: V::zero(),
            comp: V::zero(),
        }
    }

    pub fn add(&mut self, x: V) {
        V::compensated_add(&mut self.sum, &mut self.comp, x);
    }

    pub fn value(&self) -> V {
        self.sum + self.comp
    }
}
