//! Spectral measures on the positive half-line and their direct transforms.
//!
//! Three concrete shapes are provided by [`SpectralMeasure`]: an empirical eigenvalue list,
//! a uniform density on an interval and a finite atomic measure. The transform machinery
//! in [`crate::transforms`] only needs the [`Spectrum`] trait, so callers can plug in other
//! measures (for instance a density that vanishes at its right edge, giving a finite
//! `T(a_max+)`).

use alloc::vec::Vec;

use crate::error::{domain, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Largest moment order served by [`Spectrum::moments`].
pub const MAX_MOMENT_ORDER: usize = 32;

/// Moments `m_1..m_K` of a measure; index 0 holds `m_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    m: Vec<f64>,
}

impl MomentVector {
    pub fn new(m: Vec<f64>) -> Self {
        MomentVector { m }
    }

    /// `m_k` for `1 <= k <= len`.
    pub fn get(&self, k: usize) -> f64 {
        self.m[k - 1]
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.m
    }
}

/// What the transform layer needs to know about a probability measure on `[0, inf)`.
pub trait Spectrum {
    /// `(min, max)` of the support.
    fn support_edges(&self) -> (f64, f64);

    /// `G(w) = ∫ μ(dx)/(w-x)` for `w` strictly above the support; no domain check.
    fn stieltjes_unchecked(&self, w: f64) -> f64;

    /// `T(w) = ∫ x/(w-x) μ(dx)`; no domain check.
    fn t_transform_unchecked(&self, w: f64) -> f64 {
        w * self.stieltjes_unchecked(w) - 1.0
    }

    /// `lim T(w)` as `w` decreases to the right edge; may be `+inf`.
    fn t_limit_at_edge(&self) -> f64;

    /// `lim G(w)` as `w` decreases to the right edge; may be `+inf`.
    fn g_limit_at_edge(&self) -> f64;

    /// `∫ x^k μ(dx)`.
    fn moment(&self, k: usize) -> f64;

    fn stieltjes(&self, w: f64) -> Result<f64> {
        let (_, hi) = self.support_edges();
        if !(w > hi) || !w.is_finite() {
            return Err(domain!("stieltjes needs w > support max {hi}, got {w}"));
        }
        Ok(self.stieltjes_unchecked(w))
    }

    fn t_transform(&self, w: f64) -> Result<f64> {
        let (_, hi) = self.support_edges();
        if !(w > hi) || !w.is_finite() {
            return Err(domain!("t_transform needs w > support max {hi}, got {w}"));
        }
        Ok(self.t_transform_unchecked(w))
    }

    fn moments(&self, k: usize) -> Result<MomentVector> {
        if k == 0 || k > MAX_MOMENT_ORDER {
            return Err(domain!("moment order must be in 1..={MAX_MOMENT_ORDER}, got {k}"));
        }
        Ok(MomentVector::new((1..=k).map(|j| self.moment(j)).collect()))
    }
}

/// An empirical measure given as a bare slice of values (unsorted is fine).
impl Spectrum for [f64] {
    fn support_edges(&self) -> (f64, f64) {
        self.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
    }

    fn stieltjes_unchecked(&self, w: f64) -> f64 {
        self.iter().map(|&x| 1.0 / (w - x)).sum::<f64>() / self.len() as f64
    }

    fn t_transform_unchecked(&self, w: f64) -> f64 {
        self.iter().map(|&x| x / (w - x)).sum::<f64>() / self.len() as f64
    }

    fn t_limit_at_edge(&self) -> f64 {
        f64::INFINITY
    }

    fn g_limit_at_edge(&self) -> f64 {
        f64::INFINITY
    }

    fn moment(&self, k: usize) -> f64 {
        self.iter().map(|&x| x.powi(k as i32)).sum::<f64>() / self.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// nonincreasing, strictly positive
    Empirical(Vec<f64>),
    Uniform { lo: f64, hi: f64 },
    /// atoms nonincreasing, paired with weights
    Atomic { atoms: Vec<f64>, weights: Vec<f64> },
}

/// Limiting spectral measure `μ_A` of a positive matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    kind: Kind,
}

impl SpectralMeasure {
    /// Empirical measure of the given eigenvalues; sorted nonincreasing on construction.
    pub fn empirical(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(domain!("empirical measure needs at least one eigenvalue"));
        }
        if let Some(bad) = eigenvalues.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(domain!("eigenvalues must be positive and finite, got {bad}"));
        }
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(SpectralMeasure { kind: Kind::Empirical(eigenvalues) })
    }

    /// `n` copies of `1`, the unit of multiplicative convolution.
    pub fn ones(n: usize) -> Result<Self> {
        Self::empirical(alloc::vec![1.0; n])
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
            return Err(domain!("uniform interval needs 0 <= lo < hi, got [{lo}, {hi}]"));
        }
        Ok(SpectralMeasure { kind: Kind::Uniform { lo, hi } })
    }

    /// Finite atomic measure from `(atom, weight)` pairs; weights must sum to 1 within 1e-12.
    pub fn atomic(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(domain!("atomic measure needs at least one atom"));
        }
        for &(x, p) in &pairs {
            if !(x.is_finite() && x > 0.0) {
                return Err(domain!("atoms must be positive and finite, got {x}"));
            }
            if !(p.is_finite() && p > 0.0) {
                return Err(domain!("weights must be positive, got {p}"));
            }
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain!("atomic weights sum to {total}, expected 1"));
        }
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let (atoms, weights) = pairs.into_iter().unzip();
        Ok(SpectralMeasure { kind: Kind::Atomic { atoms, weights } })
    }

    /// Unit point mass at `c > 0`.
    pub fn point_mass(c: f64) -> Result<Self> {
        Self::atomic(alloc::vec![(c, 1.0)])
    }

    /// Eigenvalues of an empirical measure, nonincreasing.
    pub fn eigenvalues(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Empirical(v) => Some(v),
            _ => None,
        }
    }

    /// Short label: `empirical`, `uniform` or `atomic`.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Empirical(_) => "empirical",
            Kind::Uniform { .. } => "uniform",
            Kind::Atomic { .. } => "atomic",
        }
    }

    /// Image of the measure under `x -> c x`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(domain!("scale must be positive, got {c}"));
        }
        Ok(SpectralMeasure {
            kind: match &self.kind {
                Kind::Empirical(v) => Kind::Empirical(v.iter().map(|x| c * x).collect()),
                Kind::Uniform { lo, hi } => Kind::Uniform { lo: c * lo, hi: c * hi },
                Kind::Atomic { atoms, weights } => Kind::Atomic {
                    atoms: atoms.iter().map(|x| c * x).collect(),
                    weights: weights.clone(),
                },
            },
        })
    }

    /// `n` points at the quantile midpoints `F^{-1}((2i-1)/(2n))`, nonincreasing.
    ///
    /// For a uniform interval this is the midpoint rule `lo + (2i-1)/(2n) (hi-lo)`, which keeps
    /// every point strictly positive even when `lo = 0`.
    pub fn quantile_midpoints(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(domain!("need at least one point"));
        }
        let u = |i: usize| (2 * i + 1) as f64 / (2 * n) as f64;
        let mut pts: Vec<f64> = match &self.kind {
            Kind::Uniform { lo, hi } => (0..n).map(|i| lo + u(i) * (hi - lo)).collect(),
            Kind::Empirical(v) => {
                let m = v.len();
                // ascending order for the quantile lookup
                (0..n)
                    .map(|i| {
                        let idx = ((u(i) * m as f64).ceil() as usize).clamp(1, m);
                        v[m - idx]
                    })
                    .collect()
            }
            Kind::Atomic { atoms, weights } => (0..n)
                .map(|i| {
                    let target = u(i);
                    let mut cdf = 0.0;
                    for (x, p) in atoms.iter().zip(weights).rev() {
                        cdf += p;
                        if cdf >= target - 1e-15 {
                            return *x;
                        }
                    }
                    atoms[0]
                })
                .collect(),
        };
        pts.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(pts)
    }
}

impl Spectrum for SpectralMeasure {
    fn support_edges(&self) -> (f64, f64) {
        match &self.kind {
            Kind::Empirical(v) => (v[v.len() - 1], v[0]),
            Kind::Uniform { lo, hi } => (*lo, *hi),
            Kind::Atomic { atoms, .. } => (atoms[atoms.len() - 1], atoms[0]),
        }
    }

    fn stieltjes_unchecked(&self, w: f64) -> f64 {
        match &self.kind {
            Kind::Empirical(v) => v.as_slice().stieltjes_unchecked(w),
            Kind::Uniform { lo, hi } => ((hi - lo) / (w - hi)).ln_1p() / (hi - lo),
            Kind::Atomic { atoms, weights } => {
                atoms.iter().zip(weights).map(|(x, p)| p / (w - x)).sum()
            }
        }
    }

    fn t_transform_unchecked(&self, w: f64) -> f64 {
        match &self.kind {
            Kind::Empirical(v) => v.as_slice().t_transform_unchecked(w),
            Kind::Uniform { lo, hi } => {
                if w > 8.0 * hi {
                    uniform_t_series(*lo, *hi, w)
                } else {
                    w * self.stieltjes_unchecked(w) - 1.0
                }
            }
            Kind::Atomic { atoms, weights } => {
                atoms.iter().zip(weights).map(|(x, p)| p * x / (w - x)).sum()
            }
        }
    }

    fn t_limit_at_edge(&self) -> f64 {
        // every variant has an atom or a positive density at its right edge
        f64::INFINITY
    }

    fn g_limit_at_edge(&self) -> f64 {
        f64::INFINITY
    }

    fn moment(&self, k: usize) -> f64 {
        match &self.kind {
            Kind::Empirical(v) => v.as_slice().moment(k),
            Kind::Uniform { lo, hi } => {
                let k1 = k as i32 + 1;
                (hi.powi(k1) - lo.powi(k1)) / ((k1 as f64) * (hi - lo))
            }
            Kind::Atomic { atoms, weights } => {
                atoms.iter().zip(weights).map(|(x, p)| p * x.powi(k as i32)).sum()
            }
        }
    }
}

/// `T(w) = Σ m_k / w^k` for the uniform law, used far from the support where `w G(w) - 1`
/// cancels.
fn uniform_t_series(lo: f64, hi: f64, w: f64) -> f64 {
    let rh = hi / w;
    let rl = lo / w;
    let (mut ph, mut pl) = (rh, rl);
    let mut sum = 0.0;
    for k in 1..400 {
        let term = (hi * ph - lo * pl) / ((k as f64 + 1.0) * (hi - lo));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        ph *= rh;
        pl *= rl;
    }
    sum
}
