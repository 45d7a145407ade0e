//! The experiment drivers behind each subcommand. Everything returns tables; writing them is
//! left to the binary.

use rayon::ThreadPool;
use stransform_core::measures::Spectrum;
use stransform_core::montecarlo::{
    corner_process_sample, HeckmanOpdamSampler, MultiplicativitySampler, RankOneSampler, RngSpec,
};
use stransform_core::spherical::{low_rank_conjecture_probe, rank_one_spherical, ContourConfig};
use stransform_core::sympoly::{gelfand_naimark_ratio, normalized_h_log};
use stransform_core::transforms::{inverse_t, RateCurve, RateKind};
use stransform_core::{BetaParameter, InversionConfig, SpectralMeasure};

use crate::csv::{Cell, Table};
use crate::error::{at_z, LabError, LabResult};
use crate::pool::{estimate_parallel, map_ordered};
use crate::spec::discretize;
use crate::svg::{LinePlot, Series};

pub const TRANSFORMS_HEADERS: [&str; 6] = ["z", "T_inv", "S_tilde", "ln_S_tilde", "H_S", "H_R"];
pub const FIG1_HEADERS: [&str; 6] = ["N", "z", "k", "normalized_h_log", "H_S", "gap"];
pub const INSET_HEADERS: [&str; 3] = ["N", "inv_N", "gap"];
pub const CONJECTURE_HEADERS: [&str; 6] = ["N", "z1", "z2", "lhs", "rhs", "gap"];
pub const MC_HEADERS: [&str; 5] = ["mean", "std_error", "n_samples", "reference", "z_score"];

/// `grid` with a leading 0, as rate curves require.
fn from_zero(grid: &[f64]) -> Vec<f64> {
    let mut g = Vec::with_capacity(grid.len() + 1);
    if grid.first() != Some(&0.0) {
        g.push(0.0);
    }
    g.extend_from_slice(grid);
    g
}

/// `H^S` on `grid`, naming the first `z` that fails.
pub fn h_s_on_grid<M: Spectrum + ?Sized>(mu: &M, grid: &[f64], inv: &InversionConfig) -> LabResult<Vec<f64>> {
    let full = from_zero(grid);
    let offset = full.len() - grid.len();
    let curve = RateCurve::new(RateKind::HS, mu, &full, inv).map_err(|e| first_bad_z(mu, grid, inv, RateKind::HS, e))?;
    Ok(curve.values[offset..].to_vec())
}

fn h_r_on_grid<M: Spectrum + ?Sized>(mu: &M, grid: &[f64], inv: &InversionConfig) -> LabResult<Vec<f64>> {
    let full = from_zero(grid);
    let offset = full.len() - grid.len();
    let curve = RateCurve::new(RateKind::HR, mu, &full, inv).map_err(|e| first_bad_z(mu, grid, inv, RateKind::HR, e))?;
    Ok(curve.values[offset..].to_vec())
}

fn first_bad_z<M: Spectrum + ?Sized>(
    mu: &M,
    grid: &[f64],
    inv: &InversionConfig,
    kind: RateKind,
    fallback: stransform_core::Error,
) -> LabError {
    for &z in grid {
        let r = match kind {
            RateKind::HS => stransform_core::transforms::h_s(mu, z, inv),
            RateKind::HR => stransform_core::transforms::h_r(mu, z, inv),
        };
        if let Err(e) = r {
            return LabError::AtZ { z, source: e };
        }
    }
    fallback.into()
}

pub fn transforms_table<M: Spectrum + ?Sized>(mu: &M, grid: &[f64], inv: &InversionConfig) -> LabResult<Table> {
    let hs = h_s_on_grid(mu, grid, inv)?;
    let hr = h_r_on_grid(mu, grid, inv)?;
    let mut t = Table::new(&TRANSFORMS_HEADERS);
    for (i, &z) in grid.iter().enumerate() {
        let (t_inv, s) = if z == 0.0 {
            (f64::INFINITY, mu.moment(1))
        } else {
            let w = inverse_t(mu, z, inv).map_err(at_z(z))?;
            (w, z / (z + 1.0) * w)
        };
        t.push(vec![z.into(), t_inv.into(), s.into(), s.ln().into(), hs[i].into(), hr[i].into()]);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Output {
    pub table: Table,
    pub inset: Table,
    pub svg: String,
}

/// Normalized `ln h_k` at `k = round(Nz)` against `H^S(z)` of the limiting measure.
pub fn fig1(
    mu: &SpectralMeasure,
    z_grid: &[f64],
    n_list: &[usize],
    pool: &ThreadPool,
    inv: &InversionConfig,
) -> LabResult<Fig1Output> {
    let mut zs = z_grid.to_vec();
    let inset_extra = !zs.contains(&1.0);
    if inset_extra {
        zs.push(1.0);
        zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let hs = h_s_on_grid(mu, &zs, inv)?;
    let points: Vec<(usize, usize)> = n_list.iter().flat_map(|&n| (0..zs.len()).map(move |j| (n, j))).collect();
    let values = map_ordered(pool, &points, |&(n, j)| -> LabResult<(usize, f64)> {
        let a = discretize(mu, n)?;
        let k = (n as f64 * zs[j]).round() as usize;
        let v = normalized_h_log(&a, k).map_err(at_z(zs[j]))?;
        Ok((k, v))
    });

    let mut table = Table::new(&FIG1_HEADERS);
    let mut inset = Table::new(&INSET_HEADERS);
    let mut curves: Vec<Series> = Vec::new();
    for (&(n, j), v) in points.iter().zip(values) {
        let (k, h) = v?;
        let z = zs[j];
        let gap = h - hs[j];
        if z == 1.0 {
            inset.push(vec![n.into(), (1.0 / n as f64).into(), gap.into()]);
        }
        if inset_extra && z == 1.0 {
            continue;
        }
        table.push(vec![n.into(), z.into(), Cell::Int(k as i64), h.into(), hs[j].into(), gap.into()]);
        if j == 0 || curves.last().map(|c| c.label != format!("N={n}")).unwrap_or(true) {
            curves.push(Series { label: format!("N={n}"), points: Vec::new(), dashed: false });
        }
        curves.last_mut().unwrap().points.push((z, h));
    }
    let limit: Vec<(f64, f64)> =
        zs.iter().zip(&hs).filter(|(z, _)| !inset_extra || **z != 1.0 || z_grid.contains(z)).map(|(z, h)| (*z, *h)).collect();
    curves.push(Series { label: "H^S limit".into(), points: limit, dashed: true });
    let plot = LinePlot {
        title: format!("normalized ln h_k vs H^S, {}", mu.kind_name()),
        x_label: "z = k/N".into(),
        y_label: "(1/N) ln h_k(a)/h_k(1)".into(),
        series: curves,
    };
    Ok(Fig1Output { table, inset, svg: plot.render() })
}

/// Two-row conjecture probe at β = 2 along `n_list`.
pub fn conjecture(
    mu: &SpectralMeasure,
    z1: f64,
    z2: f64,
    n_list: &[usize],
    pool: &ThreadPool,
    cfg: &ContourConfig,
    inv: &InversionConfig,
) -> LabResult<Table> {
    let rows = map_ordered(pool, n_list, |&n| -> LabResult<(f64, f64)> {
        let a = discretize(mu, n)?;
        low_rank_conjecture_probe(&a, z1, z2, cfg, inv).map_err(at_z(z1))
    });
    let mut t = Table::new(&CONJECTURE_HEADERS);
    for (&n, r) in n_list.iter().zip(rows) {
        let (lhs, rhs) = r?;
        t.push(vec![n.into(), z1.into(), z2.into(), lhs.into(), rhs.into(), (lhs - rhs).into()]);
    }
    Ok(t)
}

/// Monte Carlo estimators exposed on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum McJob {
    /// `E[(Σ w_i a_i)^z]` with Dirichlet weights against the contour formula.
    RankOne { a: Vec<f64>, z: f64, beta: f64 },
    /// Corner-process estimator; the reference is the Gelfand–Naimark ratio at β = 2.
    HeckmanOpdam { a: Vec<f64>, z: Vec<f64>, beta: f64 },
    /// Haar average of `𝒥_{spec(A U B U*)}(z)` against `𝒥_a(z) 𝒥_b(z)` at β = 2.
    Multiplicativity { a: Vec<f64>, b: Vec<f64>, z: f64 },
}

pub fn mc_estimate(job: &McJob, samples: usize, seed: u64, pool: &ThreadPool) -> LabResult<Table> {
    let spec = RngSpec::new(seed, 0);
    let cfg = ContourConfig::default();
    let (est, reference) = match job {
        McJob::RankOne { a, z, beta } => {
            let beta = BetaParameter::new(*beta)?;
            let s = RankOneSampler::new(a, *z, beta)?;
            let reference = rank_one_spherical(a, *z, beta, &cfg)?.to_f64();
            (estimate_parallel(pool, &s, samples, spec)?, reference)
        }
        McJob::HeckmanOpdam { a, z, beta } => {
            let s = HeckmanOpdamSampler::new(a, z, BetaParameter::new(*beta)?)?;
            let reference = if *beta == 2.0 { gelfand_naimark_ratio(a, z)?.to_f64() } else { f64::NAN };
            (estimate_parallel(pool, &s, samples, spec)?, reference)
        }
        McJob::Multiplicativity { a, b, z } => {
            let s = MultiplicativitySampler::new(a, b, *z)?;
            let reference = s.product_of_transforms()?;
            (estimate_parallel(pool, &s, samples, spec)?, reference)
        }
    };
    let mut t = Table::new(&MC_HEADERS);
    let zs = if reference.is_nan() { f64::NAN } else { est.z_score(reference) };
    t.push(vec![est.mean.into(), est.std_error.into(), Cell::Int(est.n_samples as i64), reference.into(), zs.into()]);
    Ok(t)
}

/// Raw corner-process draws, one row per sample and level: `sample, level, lambda_1, …`.
pub fn corner_draws(a: &[f64], beta: f64, samples: usize, seed: u64) -> LabResult<String> {
    let beta = BetaParameter::new(beta)?;
    let n = a.len();
    let mut out = String::from("sample,level");
    for i in 1..n {
        out.push_str(&format!(",lambda_{i}"));
    }
    out.push('\n');
    for s in 0..samples {
        let arr = corner_process_sample(a, beta, RngSpec::new(seed, s as u64))?;
        for k in 1..arr.depth() {
            out.push_str(&format!("{s},{k}"));
            let level = arr.level(k);
            for i in 0..n - 1 {
                match level.get(i) {
                    Some(x) => out.push_str(&format!(",{}", crate::csv::format_real(*x))),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
    }
    Ok(out)
}
