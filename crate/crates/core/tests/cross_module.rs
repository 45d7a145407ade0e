//! Identities that tie the modules together, checked through the public API only.

use proptest::prelude::*;
use stransform_core::montecarlo::{mc_rank_one, RngSpec};
use stransform_core::spherical::{
    asymptotic_log_rank_one, finite_n_vs_asymptotic, rank_one_spherical, ContourConfig,
};
use stransform_core::sympoly::{gelfand_naimark_ratio, hciz_rank_one_beta2, normalized_h_log};
use stransform_core::transforms::{h_s, RateCurve, RateKind};
use stransform_core::{BetaParameter, InversionConfig, SpectralMeasure, Spectrum};

fn beta(b: f64) -> BetaParameter {
    BetaParameter::new(b).unwrap()
}

#[test]
fn gelfand_naimark_is_the_beta2_spherical_function() {
    // J_{e^a}(w) = F_a(w - σ) with σ_k = k - 1
    let a = [0.9, 0.4, -0.3, -0.8];
    let b: Vec<f64> = a.iter().map(|x: &f64| x.exp()).collect();
    for w in [0.5, 1.0, 2.7] {
        let z: Vec<f64> = (0..4).map(|k| if k == 0 { w } else { 0.0 } - k as f64).collect();
        let gn = gelfand_naimark_ratio(&a, &z).unwrap().to_f64();
        let j = rank_one_spherical(&b, w, beta(2.0), &ContourConfig::default()).unwrap().to_f64();
        assert!((gn / j - 1.0).abs() < 1e-9, "w={w}: {gn} vs {j}");
    }
}

#[test]
fn integer_beta2_value_is_a_normalized_h_k() {
    let a = [3.0, 2.2, 1.0, 0.4, 0.1];
    for k in [1usize, 4, 9] {
        let j = rank_one_spherical(&a, k as f64, beta(2.0), &ContourConfig::default()).unwrap().log_abs();
        assert!((j / 5.0 - normalized_h_log(&a, k).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn dirichlet_expectation_at_negative_index() {
    let a = [0.5, 1.5, 2.0];
    let cfg = ContourConfig::default();
    for (z, b) in [(-0.5, 1.0), (-0.8, 4.0), (-0.3, 0.6)] {
        let exact = rank_one_spherical(&a, z, beta(b), &cfg).unwrap().to_f64();
        let est = mc_rank_one(&a, z, beta(b), 60_000, RngSpec::new(11, 0)).unwrap();
        assert!(est.z_score(exact) < 4.0, "z={z} beta={b}");
    }
}

#[test]
fn finite_n_approaches_the_limit() {
    let mu = SpectralMeasure::uniform(0.5, 2.0).unwrap();
    let inv = InversionConfig::default();
    let cfg = ContourConfig::default();
    let limit = asymptotic_log_rank_one(&mu, 0.8, &inv).unwrap();
    for b in [1.0, 2.0] {
        let gaps: Vec<f64> = [16usize, 64, 256]
            .iter()
            .map(|&n| {
                let a = mu.quantile_midpoints(n).unwrap();
                let (fin, _, _) = finite_n_vs_asymptotic(&a, 0.8, beta(b), &cfg, &inv).unwrap();
                (fin - limit).abs()
            })
            .collect();
        assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "beta={b}: {gaps:?}");
    }
}

#[test]
fn hciz_derivative_tracks_r_transform_on_empirical_measure() {
    let a = SpectralMeasure::uniform(0.0, 1.0).unwrap().quantile_midpoints(128).unwrap();
    let theta = 0.2;
    let n = 128.0;
    let h = 1e-4;
    let up = hciz_rank_one_beta2(&a, n * (theta + h)).unwrap().log_abs();
    let dn = hciz_rank_one_beta2(&a, n * (theta - h)).unwrap().log_abs();
    let fd = (up - dn) / (2.0 * h * n);
    let r = stransform_core::transforms::r_transform(a.as_slice(), theta, &InversionConfig::default()).unwrap();
    assert!((fd - r).abs() < 0.05, "{fd} vs {r}");
}

#[test]
fn rate_curve_matches_pointwise_rate() {
    let mu = SpectralMeasure::atomic(vec![(0.5, 0.25), (1.0, 0.25), (4.0, 0.5)]).unwrap();
    let inv = InversionConfig::default();
    let grid = [0.0, 0.1, 0.4, 1.0, 2.5];
    let c = RateCurve::new(RateKind::HS, &mu, &grid, &inv).unwrap();
    for (z, v) in grid.iter().zip(&c.values) {
        assert!((h_s(&mu, *z, &inv).unwrap() - v).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `min a^z ≤ 𝒥_a(z) ≤ max a^z`, and Jensen against `m1^z` on either side of `z = 1`.
    #[test]
    fn spherical_value_bounds(
        a in prop::collection::vec(0.1f64..5.0, 2..6),
        z in 0.05f64..3.0,
        b in 0.3f64..5.0,
    ) {
        let j = rank_one_spherical(&a, z, beta(b), &ContourConfig::default()).unwrap().log_abs();
        let lo = a.iter().cloned().fold(f64::INFINITY, f64::min).ln() * z;
        let hi = a.iter().cloned().fold(0.0, f64::max).ln() * z;
        let m1 = (a.iter().sum::<f64>() / a.len() as f64).ln() * z;
        prop_assert!(j >= lo - 1e-9 && j <= hi + 1e-9);
        if z >= 1.0 {
            prop_assert!(j >= m1 - 1e-9);
        } else {
            prop_assert!(j <= m1 + 1e-9);
        }
    }

    /// Scaling the spectrum by `c` shifts the rate by `z ln c`.
    #[test]
    fn rate_scaling(c in 0.2f64..6.0, z in 0.01f64..3.0) {
        let mu = SpectralMeasure::uniform(0.0, 2.0).unwrap();
        let inv = InversionConfig::default();
        let base = h_s(&mu, z, &inv).unwrap();
        let scaled = h_s(&mu.scaled(c).unwrap(), z, &inv).unwrap();
        prop_assert!((scaled - base - z * c.ln()).abs() < 1e-9);
    }

    /// The slice and measure views of the same spectrum agree.
    #[test]
    fn slice_and_measure_agree(a in prop::collection::vec(0.1f64..5.0, 1..8), w in 0.1f64..4.0) {
        let mu = SpectralMeasure::empirical(a.clone()).unwrap();
        let x = mu.support_edges().1 + w;
        prop_assert!((mu.stieltjes(x).unwrap() - a.as_slice().stieltjes(x).unwrap()).abs() < 1e-14);
    }
}
