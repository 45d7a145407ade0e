//! Stochastic oracles for the spherical integral.
//!
//! Every estimator is split into fixed-length blocks. Block `b` draws from its own ChaCha
//! stream keyed by `(seed, stream, b)`, and per-block Welford accumulators are merged in
//! block order, so the result does not depend on how blocks are scheduled across threads.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};

use crate::error::{degenerate, domain, numeric, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::spherical::{rank_one_spherical, BetaParameter, ContourConfig};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Samples per block.
pub const BLOCK_LEN: usize = 4096;

/// Attempts allowed per Dixon–Anderson draw before giving up.
pub const MAX_REJECTIONS: u64 = 10_000_000;

/// Seed plus stream id; identical specs reproduce identical draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    /// The generator for block 0.
    pub fn rng(&self) -> ChaCha8Rng {
        self.block_rng(0)
    }

    /// The generator for block `block`.
    pub fn block_rng(&self, block: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed ^ splitmix64(self.stream));
        r.set_stream(block);
        r
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Accumulator {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan's pairwise merge.
    pub fn merge(&mut self, other: &Accumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        self.mean += d * nb / n as f64;
        self.m2 += other.m2 + d * d * na * nb / n as f64;
        self.n = n;
    }

    pub fn estimate(&self) -> McEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        McEstimate { mean: self.mean, std_error: (var.max(0.0) / self.n.max(1) as f64).sqrt(), n_samples: self.n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl McEstimate {
    /// `|mean − target|` in units of the standard error (`0` when both vanish).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// One scalar sample per call; implementors must be shareable across threads.
pub trait BlockEstimator: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<f64>;
}

/// `(block index, length)` pairs covering `n_samples`.
pub fn blocks(n_samples: usize) -> impl Iterator<Item = (u64, usize)> {
    let full = n_samples / BLOCK_LEN;
    let rest = n_samples % BLOCK_LEN;
    (0..full)
        .map(|b| (b as u64, BLOCK_LEN))
        .chain((rest > 0).then_some((full as u64, rest)))
}

/// Runs one block with its own generator.
pub fn run_block<E: BlockEstimator + ?Sized>(est: &E, spec: RngSpec, block: u64, len: usize) -> Result<Accumulator> {
    let mut rng = spec.block_rng(block);
    let mut acc = Accumulator::default();
    for _ in 0..len {
        acc.push(est.sample(&mut rng)?);
    }
    Ok(acc)
}

/// Merges block accumulators in the order given.
pub fn merge_blocks<'a, I: IntoIterator<Item = &'a Accumulator>>(accs: I) -> McEstimate {
    let mut total = Accumulator::default();
    for a in accs {
        total.merge(a);
    }
    total.estimate()
}

/// Runs every block in order on the current thread.
pub fn estimate_sequential<E: BlockEstimator + ?Sized>(est: &E, n_samples: usize, spec: RngSpec) -> Result<McEstimate> {
    let accs = blocks(n_samples).map(|(b, len)| run_block(est, spec, b, len)).collect::<Result<Vec<_>>>()?;
    Ok(merge_blocks(&accs))
}

fn check_positive(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(domain!("need at least one eigenvalue"));
    }
    if let Some(x) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(domain!("eigenvalues must be positive and finite, got {x}"));
    }
    Ok(())
}

/// One symmetric Dirichlet(alpha) draw from normalized Gamma variates.
pub fn dirichlet_weights_with<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(domain!("need n >= 1"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain!("Dirichlet parameter must be positive, got {alpha}"));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let g = Gamma::new(alpha, 1.0).map_err(|e| domain!("gamma law: {e}"))?;
    loop {
        let w: Vec<f64> = (0..n).map(|_| g.sample(rng)).collect();
        let s: f64 = w.iter().sum();
        if s > 0.0 && s.is_finite() {
            return Ok(w.into_iter().map(|x| x / s).collect());
        }
    }
}

/// [`dirichlet_weights_with`] on the block-0 generator of `spec`.
pub fn dirichlet_weights(n: usize, alpha: f64, spec: RngSpec) -> Result<Vec<f64>> {
    dirichlet_weights_with(n, alpha, &mut spec.rng())
}

/// `(Σ a_i w_i)^z` with `w ~ Dirichlet(β/2)`.
#[derive(Debug, Clone)]
pub struct RankOneSampler {
    a: Vec<f64>,
    z: f64,
    alpha: f64,
    lo: f64,
    hi: f64,
}

impl RankOneSampler {
    pub fn new(a: &[f64], z: f64, beta: BetaParameter) -> Result<Self> {
        check_positive(a)?;
        if !(z > -1.0 && z.is_finite()) {
            return Err(domain!("need z > -1, got {z}"));
        }
        let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = a.iter().cloned().fold(0.0, f64::max);
        Ok(RankOneSampler { a: a.to_vec(), z, alpha: 0.5 * beta.value(), lo, hi })
    }
}

impl BlockEstimator for RankOneSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<f64> {
        let w = dirichlet_weights_with(self.a.len(), self.alpha, rng)?;
        let x: f64 = self.a.iter().zip(&w).map(|(a, w)| a * w).sum();
        Ok(x.clamp(self.lo, self.hi).powf(self.z))
    }
}

/// Monte Carlo estimate of `𝒥^{(β)}_a(z) = E[(Σ a_i w_i)^z]`.
pub fn mc_rank_one(a: &[f64], z: f64, beta: BetaParameter, n_samples: usize, spec: RngSpec) -> Result<McEstimate> {
    if n_samples < 100 {
        return Err(domain!("need at least 100 samples, got {n_samples}"));
    }
    estimate_sequential(&RankOneSampler::new(a, z, beta)?, n_samples, spec)
}

fn check_decreasing(a: &[f64]) -> Result<()> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(domain!("entries must be finite"));
    }
    for (i, w) in a.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(degenerate!("entries {i} and {} coincide at {}", i + 1, w[0]));
        }
        if w[0] < w[1] {
            return Err(domain!("entries must be strictly decreasing"));
        }
    }
    Ok(())
}

/// One draw of the `N−1` eigenvalues of a corner of `G diag(a) G*`, `a` strictly decreasing.
///
/// The target density on `a_{i+1} ≤ λ_i ≤ a_i` is
/// `∏_{i<j}(λ_i − λ_j) ∏_{i,j}|λ_i − a_j|^{β/2−1}`. Proposals put
/// `λ_i = a_{i+1} + (a_i − a_{i+1}) B_i` with `B_i ~ Beta(β/2, β/2)`, which absorbs the two
/// adjacent factors; the remaining factors are bounded on the box and handled by rejection.
pub fn dixon_anderson_sample_with<R: Rng + ?Sized>(a: &[f64], beta: BetaParameter, rng: &mut R) -> Result<Vec<f64>> {
    let n = a.len();
    if !(2..=8).contains(&n) {
        return Err(domain!("Dixon-Anderson sampler supports 2 <= N <= 8, got {n}"));
    }
    check_decreasing(a)?;
    let e = 0.5 * beta.value() - 1.0;
    let prop = Beta::new(0.5 * beta.value(), 0.5 * beta.value()).map_err(|err| domain!("beta law: {err}"))?;
    let m = n - 1;
    // log of the box maximum of the non-absorbed factors
    let mut log_bound = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            log_bound += (a[i] - a[j + 1]).ln();
        }
        for j in 0..n {
            if j == i || j == i + 1 {
                continue;
            }
            let (dmin, dmax) = if j < i { (a[j] - a[i], a[j] - a[i + 1]) } else { (a[i + 1] - a[j], a[i] - a[j]) };
            log_bound += e * if e >= 0.0 { dmax.ln() } else { dmin.ln() };
        }
    }
    let mut lam = vec![0.0; m];
    for _ in 0..MAX_REJECTIONS {
        for i in 0..m {
            let b: f64 = prop.sample(rng);
            lam[i] = (a[i + 1] + (a[i] - a[i + 1]) * b).clamp(a[i + 1], a[i]);
        }
        if lam.windows(2).any(|w| w[0] <= w[1]) {
            continue;
        }
        let mut log_ratio = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                log_ratio += (lam[i] - lam[j]).ln();
            }
            for (j, aj) in a.iter().enumerate() {
                if j != i && j != i + 1 {
                    log_ratio += e * (lam[i] - aj).abs().ln();
                }
            }
        }
        let u: f64 = rng.random();
        if u.ln() <= log_ratio - log_bound {
            return Ok(lam);
        }
    }
    Err(numeric!(
        "Dixon-Anderson acceptance below 1e-7 for N={n}, beta={}; use smaller N or beta closer to 2",
        beta.value()
    ))
}

/// [`dixon_anderson_sample_with`] on the block-0 generator of `spec`.
pub fn dixon_anderson_sample(a: &[f64], beta: BetaParameter, spec: RngSpec) -> Result<Vec<f64>> {
    dixon_anderson_sample_with(a, beta, &mut spec.rng())
}

/// Triangular array of nested corner spectra; `level(k)` holds `k` values, nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerArray {
    levels: Vec<Vec<f64>>,
}

impl CornerArray {
    /// Validates the shape and the interlacing `λ_i^{(k+1)} ≥ λ_i^{(k)} ≥ λ_{i+1}^{(k+1)}`.
    pub fn new(levels: Vec<Vec<f64>>) -> Result<Self> {
        for (k, l) in levels.iter().enumerate() {
            if l.len() != k + 1 {
                return Err(domain!("level {} must hold {} values, found {}", k + 1, k + 1, l.len()));
            }
        }
        let c = CornerArray { levels };
        if !c.interlaces() {
            return Err(domain!("levels do not interlace"));
        }
        Ok(c)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `k` (1-based).
    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k - 1]
    }

    pub fn interlaces(&self) -> bool {
        self.levels.windows(2).all(|w| {
            let (lo, up) = (&w[0], &w[1]);
            (0..lo.len()).all(|i| up[i] >= lo[i] && lo[i] >= up[i + 1])
        })
    }
}

/// The β-corner process with top level `a` (strictly decreasing, `N ≤ 8`).
pub fn corner_process_sample_with<R: Rng + ?Sized>(a: &[f64], beta: BetaParameter, rng: &mut R) -> Result<CornerArray> {
    if a.is_empty() || a.len() > 8 {
        return Err(domain!("corner process supports 1 <= N <= 8, got {}", a.len()));
    }
    check_decreasing(a)?;
    let n = a.len();
    let mut levels = vec![Vec::new(); n];
    levels[n - 1] = a.to_vec();
    for k in (1..n).rev() {
        levels[k - 1] = dixon_anderson_sample_with(&levels[k], beta, rng)?;
    }
    let c = CornerArray { levels };
    if !c.interlaces() {
        return Err(numeric!("sampled corner array failed interlacing"));
    }
    Ok(c)
}

/// [`corner_process_sample_with`] on the block-0 generator of `spec`.
pub fn corner_process_sample(a: &[f64], beta: BetaParameter, spec: RngSpec) -> Result<CornerArray> {
    corner_process_sample_with(a, beta, &mut spec.rng())
}

/// `exp(Σ_k (z_k + ρ_k)(S_k − S_{k−1}))` over corner processes on `e^{−a}`, where
/// `S_k = −Σ_i ln λ_i^{(k)}` and `ρ_k = (β/2)(N − k)`.
#[derive(Debug, Clone)]
pub struct HeckmanOpdamSampler {
    top: Vec<f64>,
    shifted: Vec<f64>,
    beta: BetaParameter,
    trivial: bool,
}

impl HeckmanOpdamSampler {
    pub fn new(a: &[f64], z: &[f64], beta: BetaParameter) -> Result<Self> {
        let n = a.len();
        if n == 0 || n > 6 || z.len() != n {
            return Err(domain!("need 1 <= N <= 6 and z of the same length"));
        }
        if a.iter().chain(z).any(|x| !x.is_finite()) {
            return Err(domain!("a and z must be finite"));
        }
        let mut top: Vec<f64> = a.iter().map(|x| (-x).exp()).collect();
        top.sort_by(|p, q| q.partial_cmp(p).unwrap());
        check_decreasing(&top)?;
        let b2 = 0.5 * beta.value();
        let shifted: Vec<f64> = z.iter().enumerate().map(|(k, zk)| zk + b2 * (n - 1 - k) as f64).collect();
        let trivial = shifted.iter().all(|&s| s == 0.0);
        Ok(HeckmanOpdamSampler { top, shifted, beta, trivial })
    }
}

impl BlockEstimator for HeckmanOpdamSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<f64> {
        if self.trivial {
            return Ok(1.0);
        }
        let c = corner_process_sample_with(&self.top, self.beta, rng)?;
        let mut expo = 0.0;
        let mut prev = 0.0;
        for (k, s) in self.shifted.iter().enumerate() {
            let sk: f64 = -c.level(k + 1).iter().map(|l| l.ln()).sum::<f64>();
            expo += s * (sk - prev);
            prev = sk;
        }
        Ok(expo.exp())
    }
}

/// Monte Carlo estimate of the Heckman–Opdam function `𝓕^{(β)}_a(z)`.
///
/// At `z = −ρ` every sample equals 1. With `ρ_k = (β/2)(N−k)`,
/// `𝓕_a(z) = 𝒥_{e^{−a}}(−z − ρ)`.
pub fn mc_heckman_opdam(a: &[f64], z: &[f64], beta: BetaParameter, n_samples: usize, spec: RngSpec) -> Result<McEstimate> {
    if n_samples < 1000 {
        return Err(domain!("need at least 1000 samples, got {n_samples}"));
    }
    estimate_sequential(&HeckmanOpdamSampler::new(a, z, beta)?, n_samples, spec)
}

/// Haar-distributed unitary from a complex Gaussian matrix by modified Gram–Schmidt
/// (positive diagonal of `R`, which fixes the phases). Column-major `n × n`.
pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let mut q: Vec<Complex64> = (0..n * n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    for j in 0..n {
        for k in 0..j {
            let dot: Complex64 = (0..n).map(|i| q[k * n + i].conj() * q[j * n + i]).sum();
            for i in 0..n {
                let v = q[k * n + i];
                q[j * n + i] -= dot * v;
            }
        }
        let norm = (0..n).map(|i| q[j * n + i].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[j * n + i] /= norm;
        }
    }
    q
}

/// Eigenvalues of `√a G diag(b) G* √a`, ascending.
pub fn product_spectrum(a: &[f64], b: &[f64], g: &[Complex64]) -> Result<Vec<f64>> {
    let n = a.len();
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            // (G diag(b) G*)_{rc} = Σ_k G_{rk} b_k conj(G_{ck})
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += g[k * n + r] * b[k] * g[k * n + c].conj();
            }
            s *= (a[r] * a[c]).sqrt();
            re[r * n + c] = s.re;
            im[r * n + c] = s.im;
        }
    }
    hermitian_eigenvalues(&re, &im, n)
}

/// `𝒥_{c(G)}(z)` at β = 2 with `c(G)` the spectrum of `√a G b G* √a`, `G` Haar.
#[derive(Debug, Clone)]
pub struct MultiplicativitySampler {
    a: Vec<f64>,
    b: Vec<f64>,
    z: f64,
    cfg: ContourConfig,
}

impl BlockEstimator for MultiplicativitySampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<f64> {
        let g = haar_unitary_with(self.a.len(), rng);
        let mut c = product_spectrum(&self.a, &self.b, &g)?;
        let floor = 1e-13 * c.iter().cloned().fold(0.0, f64::max);
        for v in c.iter_mut() {
            if *v <= floor {
                return Err(numeric!("product spectrum lost positivity ({v})"));
            }
        }
        c.reverse();
        Ok(rank_one_spherical(&c, self.z, BetaParameter::new(2.0)?, &self.cfg)?.to_f64())
    }
}

impl MultiplicativitySampler {
    pub fn new(a: &[f64], b: &[f64], z: f64) -> Result<Self> {
        check_positive(a)?;
        check_positive(b)?;
        if a.len() != b.len() || a.len() > 6 {
            return Err(domain!("a and b must have equal length N <= 6"));
        }
        if !(z > -1.0 && z.is_finite()) {
            return Err(domain!("need z > -1, got {z}"));
        }
        Ok(MultiplicativitySampler { a: a.to_vec(), b: b.to_vec(), z, cfg: ContourConfig::default() })
    }

    /// `𝒥_a(z) 𝒥_b(z)`.
    pub fn product_of_transforms(&self) -> Result<f64> {
        let two = BetaParameter::new(2.0)?;
        let ja = rank_one_spherical(&self.a, self.z, two, &self.cfg)?;
        let jb = rank_one_spherical(&self.b, self.z, two, &self.cfg)?;
        Ok((ja * jb).to_f64())
    }
}

/// `(E_G[𝒥_{c(G)}(z)], 𝒥_a(z) 𝒥_b(z))` at β = 2.
pub fn multiplicativity_check_beta2(
    a: &[f64],
    b: &[f64],
    z: f64,
    n_samples: usize,
    spec: RngSpec,
) -> Result<(McEstimate, f64)> {
    let s = MultiplicativitySampler::new(a, b, z)?;
    if n_samples < 2 {
        return Err(domain!("need at least 2 samples"));
    }
    let lhs = estimate_sequential(&s, n_samples, spec)?;
    Ok((lhs, s.product_of_transforms()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sympoly::gelfand_naimark_ratio;

    fn beta(b: f64) -> BetaParameter {
        BetaParameter::new(b).unwrap()
    }

    fn spec(seed: u64) -> RngSpec {
        RngSpec::new(seed, 0)
    }

    /// Kolmogorov–Smirnov statistic of `xs` against the CDF `f`.
    fn ks(mut xs: Vec<f64>, f: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = f(x);
                (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn accumulator_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Accumulator::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut parts = [Accumulator::default(), Accumulator::default(), Accumulator::default()];
        for (i, &x) in xs.iter().enumerate() {
            parts[(i * 3) / xs.len()].push(x);
        }
        let m = merge_blocks(&parts);
        let w = whole.estimate();
        assert!((m.mean - w.mean).abs() < 1e-12 && (m.std_error - w.std_error).abs() < 1e-12);
        assert_eq!(m.n_samples, 1000);
    }

    #[test]
    fn blocks_cover_samples() {
        let v: Vec<_> = blocks(2 * BLOCK_LEN + 5).collect();
        assert_eq!(v, [(0, BLOCK_LEN), (1, BLOCK_LEN), (2, 5)]);
        assert_eq!(blocks(BLOCK_LEN).count(), 1);
    }

    #[test]
    fn deterministic_per_spec() {
        let a = [0.5, 1.0, 2.0];
        let e1 = mc_rank_one(&a, 0.7, beta(1.0), 5000, spec(9)).unwrap();
        let e2 = mc_rank_one(&a, 0.7, beta(1.0), 5000, spec(9)).unwrap();
        assert_eq!(e1, e2);
        let e3 = mc_rank_one(&a, 0.7, beta(1.0), 5000, RngSpec::new(9, 1)).unwrap();
        assert_ne!(e1.mean, e3.mean);
        // block order merge equals any scheduling: recompute blocks out of order
        let s = RankOneSampler::new(&a, 0.7, beta(1.0)).unwrap();
        let mut accs: Vec<(u64, Accumulator)> =
            blocks(5000).collect::<Vec<_>>().into_iter().rev().map(|(b, l)| (b, run_block(&s, spec(9), b, l).unwrap())).collect();
        accs.sort_by_key(|p| p.0);
        let m = merge_blocks(accs.iter().map(|p| &p.1));
        assert_eq!(m, e1);
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_weights(1, 0.3, spec(1)).unwrap(), vec![1.0]);
        let mut rng = spec(2).rng();
        let first: Vec<f64> = (0..100_000).map(|_| dirichlet_weights_with(2, 1.0, &mut rng).unwrap()[0]).collect();
        // 1% critical value of the KS statistic ≈ 1.628/√n
        assert!(ks(first, |x| x) < 1.628 / (1e5f64).sqrt());
        let mut accs = vec![Accumulator::default(); 5];
        for _ in 0..100_000 {
            let w = dirichlet_weights_with(5, 0.35, &mut rng).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            w.iter().zip(accs.iter_mut()).for_each(|(x, a)| a.push(*x));
        }
        for a in &accs {
            assert!(a.estimate().z_score(0.2) < 4.0);
        }
        assert!(dirichlet_weights(3, 0.0, spec(1)).is_err());
    }

    #[test]
    fn rank_one_examples() {
        let e = mc_rank_one(&[1.0; 4], 2.3, beta(0.7), 1000, spec(3)).unwrap();
        assert_eq!((e.mean, e.std_error), (1.0, 0.0));
        let e = mc_rank_one(&[1.0, 2.0], 1.0, beta(2.0), 100_000, spec(4)).unwrap();
        assert!(e.z_score(1.5) < 4.0);
        let a = [0.5, 1.0, 1.5, 2.0];
        let e = mc_rank_one(&a, 0.8, beta(0.7), 100_000, spec(5)).unwrap();
        let j = rank_one_spherical(&a, 0.8, beta(0.7), &ContourConfig::default()).unwrap().to_f64();
        assert!(e.z_score(j) < 4.0);
        assert!(mc_rank_one(&a, 0.8, beta(0.7), 99, spec(5)).is_err());
        assert!(mc_rank_one(&a, -1.0, beta(0.7), 1000, spec(5)).is_err());
    }

    #[test]
    fn dixon_anderson_two_level_is_beta() {
        for b in [0.5, 2.0, 4.0] {
            let mut rng = spec(6).rng();
            let a = [3.0, 1.0];
            let xs: Vec<f64> = (0..20_000)
                .map(|_| (dixon_anderson_sample_with(&a, beta(b), &mut rng).unwrap()[0] - 1.0) / 2.0)
                .collect();
            // compare with the Beta(b/2, b/2) law through its CDF at b = 2 (uniform) and
            // through symmetry and the variance 1/(4(b+1)) otherwise
            let mut acc = Accumulator::default();
            xs.iter().for_each(|&x| acc.push((x - 0.5) * (x - 0.5)));
            assert!(acc.estimate().z_score(0.25 / (b + 1.0)) < 4.0, "beta={b}");
            if b == 2.0 {
                assert!(ks(xs, |x| x) < 1.628 / (2e4f64).sqrt());
            }
        }
    }

    #[test]
    fn dixon_anderson_beta2_step_is_vandermonde_weighted() {
        // density ∝ (λ1 − λ2) = u + v with u = λ1 − 2, v = 2 − λ2 on the unit square: E[u] = 7/12
        let a = [3.0, 2.0, 1.0];
        let mut rng = spec(7).rng();
        let mut acc = [Accumulator::default(), Accumulator::default()];
        for _ in 0..40_000 {
            let l = dixon_anderson_sample_with(&a, beta(2.0), &mut rng).unwrap();
            assert!(a[0] >= l[0] && l[0] >= a[1] && a[1] >= l[1] && l[1] >= a[2]);
            acc[0].push(l[0]);
            acc[1].push(l[1]);
        }
        assert!(acc[0].estimate().z_score(31.0 / 12.0) < 4.0);
        assert!(acc[1].estimate().z_score(17.0 / 12.0) < 4.0);
    }

    #[test]
    fn dixon_anderson_errors() {
        assert!(matches!(dixon_anderson_sample(&[2.0, 2.0], beta(1.0), spec(1)), Err(crate::Error::Degenerate(_))));
        assert!(matches!(dixon_anderson_sample(&[1.0, 2.0], beta(1.0), spec(1)), Err(crate::Error::Domain(_))));
        assert!(dixon_anderson_sample(&[1.0], beta(1.0), spec(1)).is_err());
        assert!(dixon_anderson_sample(&[9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0], beta(1.0), spec(1)).is_err());
    }

    #[test]
    fn corner_process_examples() {
        let c = corner_process_sample(&[2.0, 1.0], beta(1.0), spec(8)).unwrap();
        assert_eq!(c.depth(), 2);
        assert!(c.interlaces());
        assert_eq!(c.level(2), &[2.0, 1.0]);
        // β = 2, N = 3: the full process is uniform on the Gelfand–Tsetlin polytope, so the
        // level-1 marginal is the B-spline with knots (1, 2, 4)
        let a = [4.0, 2.0, 1.0];
        let mut rng = spec(9).rng();
        let mut acc = Accumulator::default();
        for _ in 0..40_000 {
            let c = corner_process_sample_with(&a, beta(2.0), &mut rng).unwrap();
            assert!(c.interlaces());
            acc.push(c.level(1)[0]);
        }
        // E[x̃] = mean(a) for any β
        assert!(acc.estimate().z_score(7.0 / 3.0) < 4.0);
        assert!(corner_process_sample(&[2.0, 2.0, 1.0], beta(2.0), spec(1)).is_err());
        assert!(CornerArray::new(vec![vec![3.0], vec![2.0, 1.0]]).is_err());
        assert!(CornerArray::new(vec![vec![1.5], vec![2.0, 1.0]]).is_ok());
    }

    #[test]
    fn heckman_opdam_examples() {
        // z = −ρ gives exactly 1
        let e = mc_heckman_opdam(&[0.1, 0.5, 0.9], &[-1.0, -0.5, 0.0], beta(1.0), 1000, spec(10)).unwrap();
        assert_eq!((e.mean, e.std_error), (1.0, 0.0));
        // N = 2, β = 2: 𝓕 at a = (0, −ln 2), z = (−3, 0) is s_(2,0)(1,2)/s_(2,0)(1,1) = 7/3
        let a = [0.0, -(2f64.ln())];
        let e = mc_heckman_opdam(&a, &[-3.0, 0.0], beta(2.0), 50_000, spec(11)).unwrap();
        assert!(e.z_score(7.0 / 3.0) < 4.0);
        let gn = gelfand_naimark_ratio(&a, &[-3.0, 0.0]).unwrap().to_f64();
        assert!((gn - 7.0 / 3.0).abs() < 1e-12);
        // N = 3, β = 1, rank-one index w: z = (−w − ρ1, −ρ2, −ρ3)
        let x = [2.0f64, 1.2, 0.5];
        let a: Vec<f64> = x.iter().map(|v| -v.ln()).collect();
        let w = 1.3;
        let e = mc_heckman_opdam(&a, &[-w - 1.0, -0.5, 0.0], beta(1.0), 50_000, spec(12)).unwrap();
        let j = rank_one_spherical(&x, w, beta(1.0), &ContourConfig::default()).unwrap().to_f64();
        assert!(e.z_score(j) < 4.0);
    }

    #[test]
    fn heckman_opdam_beta2_matches_determinant() {
        let a = [0.3, -0.2, -0.6];
        let z = [-2.5, -0.7, 0.4];
        let e = mc_heckman_opdam(&a, &z, beta(2.0), 60_000, spec(13)).unwrap();
        let gn = gelfand_naimark_ratio(&a, &z).unwrap().to_f64();
        assert!(e.z_score(gn) < 4.0, "{e:?} vs {gn}");
    }

    #[test]
    fn haar_columns_are_orthonormal() {
        let mut rng = spec(14).rng();
        let n = 4;
        let g = haar_unitary_with(n, &mut rng);
        for j in 0..n {
            for k in 0..n {
                let d: Complex64 = (0..n).map(|i| g[j * n + i].conj() * g[k * n + i]).sum();
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((d.re - expect).abs() < 1e-12 && d.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn multiplicativity_examples() {
        let (l, r) = multiplicativity_check_beta2(&[1.0, 2.0, 3.0], &[1.0; 3], 0.7, 200, spec(15)).unwrap();
        assert!((l.mean - r).abs() < 1e-9 && l.std_error < 1e-9);
        let (l, r) = multiplicativity_check_beta2(&[2.0; 3], &[1.5; 3], 1.3, 50, spec(16)).unwrap();
        assert!((r - 3f64.powf(1.3)).abs() < 1e-12 && (l.mean - r).abs() < 1e-9);
        let (l, r) = multiplicativity_check_beta2(&[1.0, 2.0, 3.0], &[0.5, 1.0, 1.5], 0.7, 4000, spec(17)).unwrap();
        assert!(l.z_score(r) < 4.0, "{l:?} vs {r}");
    }
}
