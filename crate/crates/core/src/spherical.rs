//! Finite-N rank-one multiplicative spherical integral for every `β > 0`.
//!
//! For positive `a` and `x̃ = (G diag(a) G*)_{11}` with a Haar-rotated `G`,
//! `𝒥_a(z) = E[x̃^z]`, and `x̃ = Σ a_i w_i` with Dirichlet(β/2, …, β/2) weights. The Laplace
//! inversion of `∏(1 − a_i e^{−p})^{−β/2}` gives, on a half-strip contour that starts at the
//! abscissa `γ > ln a_max`,
//!
//! ```text
//! 𝒥 = Γ(Nβ/2) Γ(1+z) / Γ(Nβ/2+z) · (V − sin(πz)/π · R)
//! V = (1/2π) ∫_{−π}^{π} e^{z(γ+it)} ∏(1 − a_i e^{−γ−it})^{−β/2} dt
//! R = ∫_{−∞}^{γ} e^{zx} ∏(1 + a_i e^{−x})^{−β/2} dx
//! ```
//!
//! valid for `z > −min(1, Nβ/2)`. The vertical segment carries the saddle point; the two
//! horizontal rays at `Im p = ±π` combine into the real integral `R`, which vanishes at
//! integer `z`. The integrand is `2πi`-periodic in `p`, so a full vertical line would not
//! converge.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, numeric, Result};
use crate::measures::Spectrum;
use crate::quadrature::{integrate, QuadConfig};
use crate::special::{log_gamma, log_sum_exp, sin_pi, LogValue};
use crate::sympoly::complete_homogeneous_log;
use crate::transforms::{h_s, inverse_t, InversionConfig};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// The Dyson index `β > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParameter(f64);

impl BetaParameter {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(domain!("beta must be positive and finite, got {beta}"));
        }
        Ok(BetaParameter(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Real, complex or quaternionic group case (`β ∈ {1, 2, 4}`).
    pub fn is_classical(self) -> bool {
        self.0 == 1.0 || self.0 == 2.0 || self.0 == 4.0
    }
}

/// Where the saddle sits relative to the right edge `ln a_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Interior,
    /// `z ≥ T(a_max⁺)`: the saddle has merged with the edge.
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleResult {
    pub p_star: f64,
    /// `𝓗(z, p*)`.
    pub rate_value: f64,
    /// `∂²𝓗/∂p²` at `p*`.
    pub curvature: f64,
    pub regime: Regime,
}

/// Quadrature settings for [`rank_one_spherical`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    /// Relative accuracy target for each contour piece.
    pub rel_tol: f64,
    /// Adaptive panel budget per piece.
    pub max_panels: usize,
    /// The ray integral is cut once its log-integrand has dropped this far below its peak.
    pub ray_log_drop: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { rel_tol: 1e-12, max_panels: 4000, ray_log_drop: 45.0 }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.max_panels > 0 && self.ray_log_drop > 0.0) {
            return Err(domain!("contour settings must be positive: {self:?}"));
        }
        Ok(())
    }
}

fn check_spectrum(a: &[f64]) -> Result<f64> {
    if a.is_empty() {
        return Err(domain!("need at least one eigenvalue"));
    }
    if let Some(x) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(domain!("eigenvalues must be positive and finite, got {x}"));
    }
    Ok(a.iter().cloned().fold(0.0, f64::max))
}

/// `𝓗(z, p) = z p − (1/N) Σ ln(1 − a_i e^{−p})`.
pub fn rate_function(a: &[f64], z: f64, p: f64) -> Result<f64> {
    let amax = check_spectrum(a)?;
    if !(p > amax.ln()) {
        return Err(domain!("rate function needs p > ln a_max = {}, got {p}", amax.ln()));
    }
    let s: f64 = a.iter().map(|x| (-x * (-p).exp()).ln_1p()).sum();
    Ok(z * p - s / a.len() as f64)
}

/// `(1/N) Σ a_i w / (w − a_i)²`, the curvature `∂²𝓗/∂p²` at `w = e^p`.
fn discrete_curvature(a: &[f64], w: f64) -> f64 {
    a.iter().map(|x| x * w / ((w - x) * (w - x))).sum::<f64>() / a.len() as f64
}

/// Real saddle of `𝓗(z, ·)` for the empirical measure of `a`: `z = T_disc(e^{p*})`.
///
/// `z` is the rescaled index `2 z_raw / (Nβ)`, so the saddle does not depend on `β`. The
/// empirical measure has an atom at `a_max`, hence the regime is always interior.
pub fn discrete_saddle(a: &[f64], z: f64) -> Result<SaddleResult> {
    check_spectrum(a)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(domain!("saddle needs finite z > 0, got {z}"));
    }
    let w = inverse_t(a, z, &InversionConfig::default())?;
    let p_star = w.ln();
    Ok(SaddleResult {
        p_star,
        rate_value: rate_function(a, z, p_star)?,
        curvature: discrete_curvature(a, w),
        regime: Regime::Interior,
    })
}

/// Saddle of the limiting rate `zp − ∫ ln(1 − x e^{−p}) μ(dx)`.
///
/// Past `z* = T(a_max⁺)` the saddle is pinned at `ln a_max` and the regime is `Edge`; the
/// reported curvature is then `+inf`. In the interior the curvature `−dT(e^p)/dp` is taken
/// by a central difference, since a general [`Spectrum`] only exposes `T`.
pub fn limiting_saddle<M: Spectrum + ?Sized>(
    mu: &M,
    z: f64,
    cfg: &InversionConfig,
) -> Result<SaddleResult> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(domain!("saddle needs finite z > 0, got {z}"));
    }
    let (_, amax) = mu.support_edges();
    let zs = mu.t_limit_at_edge();
    if z >= zs {
        let p = amax.ln();
        let rate = z * p - log_one_minus_integral(mu, p)?;
        return Ok(SaddleResult { p_star: p, rate_value: rate, curvature: f64::INFINITY, regime: Regime::Edge });
    }
    let w = inverse_t(mu, z, cfg)?;
    let p = w.ln();
    let h = 1e-5 * (1.0 - amax / w).min(1.0);
    let tp = mu.t_transform_unchecked((p + h).exp());
    let tm = mu.t_transform_unchecked((p - h).exp());
    let curvature = (tm - tp) / (2.0 * h);
    let rate = z * p - log_one_minus_integral(mu, p)?;
    Ok(SaddleResult { p_star: p, rate_value: rate, curvature, regime: Regime::Interior })
}

/// `∫ ln(1 − x e^{−p}) μ(dx) = −∫_p^∞ T(e^q) dq`.
fn log_one_minus_integral<M: Spectrum + ?Sized>(mu: &M, p: f64) -> Result<f64> {
    // q = p + u/(1−u) maps (0,1) onto (p, ∞)
    let f = |u: f64| -> Result<f64> {
        let d = 1.0 - u;
        let q = p + u / d;
        Ok(mu.t_transform_unchecked(q.exp()) / (d * d))
    };
    let cfg = QuadConfig { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 2000 };
    Ok(-integrate(f, &[0.0, 0.5, 0.9, 0.99, 1.0], cfg)?.0)
}

/// `z_rescaled = 2 z_raw / (Nβ)`.
pub fn rescale_index(n: usize, beta: BetaParameter, z_raw: f64) -> f64 {
    2.0 * z_raw / (n as f64 * beta.value())
}

/// `z_raw = (Nβ/2) z_rescaled`.
pub fn unscale_index(n: usize, beta: BetaParameter, z: f64) -> f64 {
    0.5 * n as f64 * beta.value() * z
}

/// `ln[Γ(Nβ/2) Γ(1+z) / Γ(Nβ/2 + z)]`.
fn log_prefactor(nb2: f64, z: f64) -> Result<f64> {
    Ok(log_gamma(nb2)? + log_gamma(1.0 + z)? - log_gamma(nb2 + z)?)
}

/// `𝒥^{(β)}_a(z)` for raw index `z > −min(1, Nβ/2)`, contour through the saddle point.
pub fn rank_one_spherical(a: &[f64], z: f64, beta: BetaParameter, cfg: &ContourConfig) -> Result<LogValue> {
    rank_one_spherical_on_contour(a, z, beta, None, cfg)
}

/// [`rank_one_spherical`] with an explicit vertical abscissa `γ > ln a_max`.
///
/// `None` picks the saddle `p*` for `z > 0` and `γ = ln(2 a_max)` for `z < 0`. Any valid `γ`
/// gives the same value up to quadrature error.
pub fn rank_one_spherical_on_contour(
    a: &[f64],
    z: f64,
    beta: BetaParameter,
    gamma: Option<f64>,
    cfg: &ContourConfig,
) -> Result<LogValue> {
    let amax = check_spectrum(a)?;
    cfg.validate()?;
    let n = a.len() as f64;
    let b2 = 0.5 * beta.value();
    let nb2 = n * b2;
    if !z.is_finite() || z <= -(1f64.min(nb2)) {
        return Err(domain!("rank-one integral needs z > -min(1, N*beta/2) = {}, got {z}", -(1f64.min(nb2))));
    }
    if z == 0.0 {
        return Ok(LogValue::ONE);
    }
    if a.iter().all(|&x| x == a[0]) {
        return Ok(LogValue::from_log(z * a[0].ln()));
    }
    let lmax = amax.ln();
    let (gamma, sigma) = match gamma {
        Some(g) => {
            if !(g > lmax && g.is_finite()) {
                return Err(domain!("contour abscissa must exceed ln a_max = {lmax}, got {g}"));
            }
            (g, 0.0)
        }
        None if z > 0.0 => {
            let s = discrete_saddle(a, z / nb2)?;
            (s.p_star, 1.0 / (nb2 * s.curvature).sqrt())
        }
        None => (lmax + core::f64::consts::LN_2, 0.0),
    };

    // vertical segment, normalized by the value at t = 0 (the modulus maximum)
    let y: Vec<f64> = a.iter().map(|x| x * (-gamma).exp()).collect();
    let lref = z * gamma - b2 * y.iter().map(|v| (-v).ln_1p()).sum::<f64>();
    let seg = |t: f64| -> Result<Complex64> {
        let (st, ct) = t.sin_cos();
        let mut re = 0.0;
        let mut im = 0.0;
        for &v in &y {
            // ln(1 − v e^{−it}), principal branch: the argument stays in the right half-plane
            re += 0.5 * (v * v - 2.0 * v * ct).ln_1p();
            im += (v * st).atan2(1.0 - v * ct);
        }
        let l = Complex64::new(z * gamma - b2 * re - lref, z * t - b2 * im);
        Ok(l.exp())
    };
    let mut breaks: Vec<f64> = Vec::from([-PI, 0.0, PI]);
    if sigma > 0.0 {
        for k in [1.0, 4.0, 16.0] {
            if k * sigma < PI {
                breaks.push(k * sigma);
                breaks.push(-k * sigma);
            }
        }
        breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
    }
    let qc = QuadConfig { abs_tol: 0.0, rel_tol: cfg.rel_tol, max_panels: cfg.max_panels };
    let (v, _) = integrate(seg, &breaks, qc)?;
    let v = v / (2.0 * PI);
    if !(v.im.abs() <= 1e-10 * v.re.abs()) {
        return Err(numeric!("segment integral not real: {} + {}i", v.re, v.im));
    }
    let mut terms = Vec::from([LogValue::from_f64(v.re) * LogValue::from_log(lref)]);

    let sp = sin_pi(z);
    if sp != 0.0 {
        let f = |x: f64| -> f64 { z * x - b2 * a.iter().map(|ai| (ai * (-x).exp()).ln_1p()).sum::<f64>() };
        // scan the ray outward in u = γ − x until the integrand has decayed
        let mut nodes = Vec::from([0.0]);
        let mut fmax = f(gamma);
        let mut prev = fmax;
        let mut u = 1.0;
        loop {
            let fu = f(gamma - u);
            nodes.push(u);
            if fu > fmax {
                fmax = fu;
            }
            if fu < fmax - cfg.ray_log_drop && fu < prev {
                break;
            }
            prev = fu;
            u *= 2.0;
            if u > 1e12 {
                return Err(numeric!("ray integrand does not decay (z={z})"));
            }
        }
        let ray = |u: f64| -> Result<f64> { Ok((f(gamma - u) - fmax).exp()) };
        let (r, _) = integrate(ray, &nodes, qc)?;
        terms.push(-(LogValue::from_f64(sp / PI * r) * LogValue::from_log(fmax)));
    }
    let total = log_sum_exp(&terms);
    if total.sign() <= 0 {
        return Err(numeric!("contour value lost positivity at z={z} (cancellation)"));
    }
    Ok(LogValue::from_log(total.log_abs() + log_prefactor(nb2, z)?))
}

/// Saddle-point estimate `ln Γ-prefactor + (Nβ/2) 𝓗(z̃, p*) − ½ ln(2π (Nβ/2) 𝓗''(p*))` of
/// `ln 𝒥_a(z_raw)`, with `z̃ = 2 z_raw/(Nβ)`.
pub fn saddle_point_log_rank_one(a: &[f64], z_raw: f64, beta: BetaParameter) -> Result<f64> {
    if !(z_raw > 0.0) {
        return Err(domain!("saddle approximation needs z > 0, got {z_raw}"));
    }
    check_spectrum(a)?;
    let nb2 = 0.5 * a.len() as f64 * beta.value();
    let s = discrete_saddle(a, z_raw / nb2)?;
    Ok(log_prefactor(nb2, z_raw)? + nb2 * s.rate_value - 0.5 * (2.0 * PI * nb2 * s.curvature).ln())
}

/// The large-N limit `H^S_μ(z)` of `(2/(Nβ)) ln 𝒥_a((Nβ/2) z)`; it does not depend on `β`.
pub fn asymptotic_log_rank_one<M: Spectrum + ?Sized>(mu: &M, z: f64, cfg: &InversionConfig) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain!("asymptotic rate needs z > 0, got {z}"));
    }
    h_s(mu, z, cfg)
}

/// `(finite_n, limit, gap)` with `finite_n = (2/(Nβ)) ln 𝒥_a((Nβ/2) z)`,
/// `limit = H^S(z)` of the empirical measure of `a` and `gap = finite_n − limit`.
pub fn finite_n_vs_asymptotic(
    a: &[f64],
    z: f64,
    beta: BetaParameter,
    cfg: &ContourConfig,
    inv: &InversionConfig,
) -> Result<(f64, f64, f64)> {
    check_spectrum(a)?;
    if !(z > 0.0) {
        return Err(domain!("need z > 0, got {z}"));
    }
    let nb2 = 0.5 * a.len() as f64 * beta.value();
    let j = rank_one_spherical(a, nb2 * z, beta, cfg)?;
    let finite_n = j.log_abs() / nb2;
    let limit = h_s(a, z, inv)?;
    Ok((finite_n, limit, finite_n - limit))
}

/// `J(k) = h_k(a)/h_k(1,…,1)` for integer `k`, otherwise the contour value at `β = 2`.
fn rank_one_beta2(a: &[f64], k: f64, cfg: &ContourConfig) -> Result<LogValue> {
    if k == 0.0 {
        return Ok(LogValue::ONE);
    }
    if k.fract() == 0.0 && k > 0.0 && k <= 1e6 {
        let n = a.len() as f64;
        let h = complete_homogeneous_log(a, k as usize)?;
        let norm = crate::special::ln_binomial(k + n - 1.0, k)?;
        return Ok(LogValue::from_log(h.log_abs() - norm));
    }
    rank_one_spherical(a, k, BetaParameter(2.0), cfg)
}

/// `𝒥^{(2)}_a(w1, w2, 0, …, 0)` through the two-row Jacobi–Trudi identity.
///
/// With the nonzero entries in the first two slots, the Heckman–Opdam argument is
/// `(w1, w2 − 1, −2, …, −(N−1))`; after sorting its first two entries this is the two-row
/// shape `(p, q)` with `p = max(w1, w2−1)` and `q = min(w1, w2−1) + 1`, and
/// `𝒥 = (J(p)J(q) − r J(p+1)J(q−1)) / (1 − r)` with `r = (p+N) q / ((p+1)(q+N−1))`,
/// `J` the rank-one value.
pub fn two_row_spherical_beta2(a: &[f64], w1: f64, w2: f64, cfg: &ContourConfig) -> Result<LogValue> {
    check_spectrum(a)?;
    let n = a.len();
    if n < 2 {
        return Err(domain!("two-row integral needs N >= 2"));
    }
    if !(w1 >= 0.0 && w2 >= 0.0 && w1.is_finite() && w2.is_finite()) {
        return Err(domain!("two-row indices must be finite and nonnegative, got ({w1}, {w2})"));
    }
    let p = w1.max(w2 - 1.0);
    let q = w1.min(w2 - 1.0) + 1.0;
    let nf = n as f64;
    let jp = rank_one_beta2(a, p, cfg)?;
    let jq = rank_one_beta2(a, q, cfg)?;
    if q == 0.0 {
        return Ok(jp * jq);
    }
    let r = (p + nf) * q / ((p + 1.0) * (q + nf - 1.0));
    let jp1 = rank_one_beta2(a, p + 1.0, cfg)?;
    let jq1 = rank_one_beta2(a, q - 1.0, cfg)?;
    let num = log_sum_exp(&[jp * jq, -(LogValue::from_f64(r) * jp1 * jq1)]);
    let v = num / LogValue::from_f64(1.0 - r);
    if v.sign() <= 0 {
        return Err(numeric!("two-row value lost positivity at ({w1}, {w2})"));
    }
    Ok(v)
}

/// `(lhs, rhs)` for the two-row conjecture at `β = 2`:
/// `lhs = (1/N) ln 𝒥_a(N z1, N z2, 0, …)`, `rhs = H^S(z1) + H^S(z2)` of the empirical measure.
/// `z2 = 0` reduces to the rank-one statement.
pub fn low_rank_conjecture_probe(
    a: &[f64],
    z1: f64,
    z2: f64,
    cfg: &ContourConfig,
    inv: &InversionConfig,
) -> Result<(f64, f64)> {
    if !(z1 > 0.0 && z2 >= 0.0 && z2.is_finite()) || z1 == z2 {
        return Err(domain!("probe needs z1 > 0, z2 >= 0 and z1 != z2, got ({z1}, {z2})"));
    }
    let n = a.len() as f64;
    let j = two_row_spherical_beta2(a, n * z1, n * z2, cfg)?;
    let lhs = j.log_abs() / n;
    let rhs = h_s(a, z1, inv)? + h_s(a, z2, inv)?;
    Ok((lhs, rhs))
}
