//! Globally adaptive Gauss–Kronrod (7/15) quadrature over real or complex integrands.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;

use crate::error::{numeric, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub(crate) trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn kronrod<T: QuadValue, F: FnMut(f64) -> Result<T>>(f: &mut F, a: f64, b: f64) -> Result<Panel<T>> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    let value = k * h;
    if !value.finite() {
        return Err(numeric!("non-finite integrand on [{a}, {b}]"));
    }
    let error = ((k - g) * h).magnitude();
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over consecutive `breaks` (at least two increasing points).
///
/// Panels are bisected worst-first until the summed error estimate meets
/// `max(abs_tol, rel_tol * |I|)`.
pub(crate) fn integrate<T, F>(mut f: F, breaks: &[f64], cfg: QuadConfig) -> Result<(T, f64)>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let mut panels: Vec<Panel<T>> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            panels.push(kronrod(&mut f, w[0], w[1])?);
        }
    }
    if panels.is_empty() {
        return Ok((T::zero(), 0.0));
    }
    loop {
        let total = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if err <= target {
            return Ok((total, err));
        }
        if panels.len() >= cfg.max_panels {
            return Err(numeric!(
                "quadrature did not converge: error {err:.3e} > target {target:.3e} after {} panels",
                panels.len()
            ));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, p)| if p.error > be { (i, p.error) } else { (bi, be) });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // cannot split further; accept what we have
            return Ok((total, err));
        }
        panels.push(kronrod(&mut f, p.a, mid)?);
        panels.push(kronrod(&mut f, mid, p.b)?);
    }
}

#[allow(dead_code)]
pub(crate) fn integrate_real<F>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate::<f64, F>(f, &[a, b], cfg).map(|(v, _)| v)
}

impl From<core::convert::Infallible> for Error {
    fn from(e: core::convert::Infallible) -> Self {
        match e {}
    }
}
