//! Functional inverses and the transforms built from them.
//!
//! For a measure `μ` with right edge `a_max`:
//! - `S̃(z) = z/(z+1) · T⁻¹(z)`, the modified S-transform (the usual S-transform is `1/S̃`);
//! - `R(z) = G⁻¹(z) − 1/z`;
//! - `H^S(z) = ∫₀^z ln S̃`, continued past `z* = T(a_max⁺)` with `T⁻¹` frozen at `a_max`;
//! - `H^R(z) = ∫₀^z R`, continued past `g* = G(a_max⁺)` with `G⁻¹` frozen at `a_max`.
//!
//! When `z*` (or `g*`) is infinite, which is the case for any measure with an atom or a
//! positive density at `a_max`, only the first branch is ever used.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::measures::{MomentVector, Spectrum};
use crate::quadrature::{integrate, QuadConfig};
use crate::roots::invert_decreasing;
use crate::special::{lambert_w, Branch};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Settings for the monotone root finder behind `T⁻¹` and `G⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    /// Residual tolerance `|T(w) − y|` (relative when `y < 1`).
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Factor by which the bracket grows while searching for a sign change.
    pub bracket_growth: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig { abs_tol: 1e-12, max_iter: 200, bracket_growth: 2.0 }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(domain!("abs_tol must be positive, got {}", self.abs_tol));
        }
        if self.max_iter < 8 {
            return Err(domain!("max_iter must be at least 8, got {}", self.max_iter));
        }
        if !(self.bracket_growth > 1.0 && self.bracket_growth.is_finite()) {
            return Err(domain!("bracket_growth must exceed 1, got {}", self.bracket_growth));
        }
        Ok(())
    }
}

const QUAD: QuadConfig = QuadConfig { abs_tol: 1e-10, rel_tol: 1e-13, max_panels: 2000 };

/// `T⁻¹(y)`: the unique `w > a_max` with `T(w) = y`, for `0 < y < T(a_max⁺)`.
pub fn inverse_t<M: Spectrum + ?Sized>(mu: &M, y: f64, cfg: &InversionConfig) -> Result<f64> {
    cfg.validate()?;
    let (_, amax) = mu.support_edges();
    let limit = mu.t_limit_at_edge();
    if !(y > 0.0 && y < limit) {
        return Err(domain!("inverse_t needs 0 < y < T(a_max+) = {limit}, got {y}"));
    }
    // m1/w <= T(w) <= m1/(w - a_max)
    let m1 = mu.moment(1);
    let hint = (m1 / y - amax, m1 / y);
    invert_decreasing(|w| mu.t_transform_unchecked(w), y, amax, limit, Some(hint), cfg)
}

/// `G⁻¹(z)`: the unique `w > a_max` with `G(w) = z`, for `0 < z < G(a_max⁺)`.
pub fn inverse_g<M: Spectrum + ?Sized>(mu: &M, z: f64, cfg: &InversionConfig) -> Result<f64> {
    cfg.validate()?;
    let (amin, amax) = mu.support_edges();
    let limit = mu.g_limit_at_edge();
    if !(z > 0.0 && z < limit) {
        return Err(domain!("inverse_g needs 0 < z < G(a_max+) = {limit}, got {z}"));
    }
    // 1/(w - a_min) <= G(w) <= 1/(w - a_max)
    let hint = (amin - amax + 1.0 / z, 1.0 / z);
    invert_decreasing(|w| mu.stieltjes_unchecked(w), z, amax, limit, Some(hint), cfg)
}

/// Modified S-transform `S̃(z) = z/(z+1) · T⁻¹(z)`.
pub fn s_tilde<M: Spectrum + ?Sized>(mu: &M, z: f64, cfg: &InversionConfig) -> Result<f64> {
    let w = inverse_t(mu, z, cfg)?;
    Ok(z / (z + 1.0) * w)
}

/// `R(z) = G⁻¹(z) − 1/z`, evaluated as `T(w)/z` at `w = G⁻¹(z)` to avoid the cancellation.
pub fn r_transform<M: Spectrum + ?Sized>(mu: &M, z: f64, cfg: &InversionConfig) -> Result<f64> {
    let w = inverse_g(mu, z, cfg)?;
    Ok(mu.t_transform_unchecked(w) / z)
}

/// Which rate function a [`RateCurve`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    HS,
    HR,
}

/// `z ↦ H(z)` sampled on an increasing grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub kind: RateKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `T(a_max⁺)` for `H^S`, `G(a_max⁺)` for `H^R`; may be `+inf`.
    pub regime_boundary: f64,
}

impl RateCurve {
    /// Samples `H^S` or `H^R` by integrating between consecutive grid points.
    pub fn new<M: Spectrum + ?Sized>(
        kind: RateKind,
        mu: &M,
        grid: &[f64],
        cfg: &InversionConfig,
    ) -> Result<Self> {
        if grid.first() != Some(&0.0) {
            return Err(domain!("rate curve grid must start at 0"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|z| !z.is_finite()) {
            return Err(domain!("rate curve grid must be finite and strictly increasing"));
        }
        let mut values = Vec::with_capacity(grid.len());
        values.push(0.0);
        let mut acc = 0.0;
        for w in grid.windows(2) {
            acc += match kind {
                RateKind::HS => h_s_increment(mu, w[0], w[1], cfg)?,
                RateKind::HR => h_r_increment(mu, w[0], w[1], cfg)?,
            };
            values.push(acc);
        }
        let regime_boundary = match kind {
            RateKind::HS => mu.t_limit_at_edge(),
            RateKind::HR => mu.g_limit_at_edge(),
        };
        Ok(RateCurve { kind, grid: grid.to_vec(), values, regime_boundary })
    }
}

/// `ln S̃(u)`, extended to `u = 0` by its limit `ln m1`.
fn ln_s_tilde<M: Spectrum + ?Sized>(mu: &M, u: f64, cfg: &InversionConfig) -> Result<f64> {
    if u == 0.0 {
        return Ok(mu.moment(1).ln());
    }
    let w = inverse_t(mu, u, cfg)?;
    Ok(u.ln() - u.ln_1p() + w.ln())
}

/// `R(u)`, extended to `u = 0` by its limit `m1`.
fn r_or_limit<M: Spectrum + ?Sized>(mu: &M, u: f64, cfg: &InversionConfig) -> Result<f64> {
    if u == 0.0 {
        return Ok(mu.moment(1));
    }
    r_transform(mu, u, cfg)
}

/// `u ln u − (u+1) ln(u+1)`, an antiderivative of `ln(u/(u+1))`.
fn f_antideriv(u: f64) -> f64 {
    let a = if u > 0.0 { u * u.ln() } else { 0.0 };
    a - (u + 1.0) * u.ln_1p()
}

/// `∫_a^b` of the `H^S` integrand, splitting at `z*`.
fn h_s_increment<M: Spectrum + ?Sized>(mu: &M, a: f64, b: f64, cfg: &InversionConfig) -> Result<f64> {
    let zs = mu.t_limit_at_edge();
    let (_, amax) = mu.support_edges();
    let mut total = 0.0;
    let mid = b.min(zs);
    if mid > a {
        total += integrate(|u| ln_s_tilde(mu, u, cfg), &[a, mid], QUAD)?.0;
    }
    let lo = a.max(zs);
    if b > lo {
        total += (b - lo) * amax.ln() + f_antideriv(b) - f_antideriv(lo);
    }
    Ok(total)
}

/// `∫_a^b` of the `H^R` integrand, splitting at `g*`.
fn h_r_increment<M: Spectrum + ?Sized>(mu: &M, a: f64, b: f64, cfg: &InversionConfig) -> Result<f64> {
    let gs = mu.g_limit_at_edge();
    let (_, amax) = mu.support_edges();
    let mut total = 0.0;
    let mid = b.min(gs);
    if mid > a {
        total += integrate(|u| r_or_limit(mu, u, cfg), &[a, mid], QUAD)?.0;
    }
    let lo = a.max(gs);
    if b > lo {
        total += amax * (b - lo) - (b / lo).ln();
    }
    Ok(total)
}

/// `H^S(z)`, with `H^S(0) = 0`.
pub fn h_s<M: Spectrum + ?Sized>(mu: &M, z: f64, cfg: &InversionConfig) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain!("h_s needs finite z >= 0, got {z}"));
    }
    cfg.validate()?;
    h_s_increment(mu, 0.0, z, cfg)
}

/// `H^R(z)`, with `H^R(0) = 0`.
pub fn h_r<M: Spectrum + ?Sized>(mu: &M, z: f64, cfg: &InversionConfig) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain!("h_r needs finite z >= 0, got {z}"));
    }
    cfg.validate()?;
    h_r_increment(mu, 0.0, z, cfg)
}

/// First three Taylor coefficients of `H^S(z) = c1 z + c2 z² + c3 z³ + …` from moments.
pub fn h_s_series(m: &MomentVector) -> Result<(f64, f64, f64)> {
    if m.len() < 3 {
        return Err(domain!("need at least three moments, got {}", m.len()));
    }
    let (m1, m2, m3) = (m.get(1), m.get(2), m.get(3));
    if !(m1 > 0.0) {
        return Err(domain!("first moment must be positive, got {m1}"));
    }
    let c1 = m1.ln();
    let c2 = 0.5 * (m2 / (m1 * m1) - 1.0);
    let c3 = ((2.0 * m3 * m1 - 3.0 * m2 * m2) / m1.powi(4) + 1.0) / 6.0;
    Ok((c1, c2, c3))
}

/// Closed form of `H^S` for the uniform law on `[0, 2]`:
/// `z (ln(2z / |z+1+W₀(y)|) − 1) − ln|W₀(y)|` with `y = −(z+1) e^{−(z+1)}`.
///
/// The other real branch gives `W₋₁(y) = −(z+1)` identically, so only `W₀` carries
/// information.
pub fn h_s_uniform_closed_form(z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain!("closed form needs finite z >= 0, got {z}"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let y = -(z + 1.0) * (-(z + 1.0)).exp();
    let w = lambert_w(y, Branch::Principal)?;
    Ok(z * ((2.0 * z / (z + 1.0 + w).abs()).ln() - 1.0) - w.abs().ln())
}
