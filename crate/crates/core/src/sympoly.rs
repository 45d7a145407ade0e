//! Symmetric polynomials and the β = 2 determinantal formulas, all in log domain.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Deref;

use num_complex::Complex64;

use crate::error::{degenerate, domain, numeric, resource, Result};
use crate::linalg::lu_log_det;
use crate::roots::invert_decreasing;
use crate::special::{ln_binomial, log_add_exp, log_gamma, LogValue};
use crate::transforms::InversionConfig;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Pairwise gaps below this are treated as coincident.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// An index vector `z_1 >= … >= z_N` (a partition, a signature or a real vector).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexVector {
    entries: Vec<f64>,
}

impl IndexVector {
    /// Real entries, stored sorted nonincreasing.
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(domain!("index entries must be finite"));
        }
        entries.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(IndexVector { entries })
    }

    /// Integer signature (negative parts allowed).
    pub fn signature(entries: &[i64]) -> Self {
        let mut e: Vec<f64> = entries.iter().map(|&x| x as f64).collect();
        e.sort_by(|a, b| b.partial_cmp(a).unwrap());
        IndexVector { entries: e }
    }

    /// Whether every entry is a nonnegative integer.
    pub fn is_partition(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0.0 && x.fract() == 0.0)
    }
}

impl Deref for IndexVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.entries
    }
}

fn check_positive(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(domain!("need at least one variable"));
    }
    if let Some(x) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(domain!("variables must be positive and finite, got {x}"));
    }
    Ok(())
}

/// `h_k(a)` by the recurrence `h_k(a_1..a_n) = h_k(a_1..a_{n-1}) + a_n h_{k-1}(a_1..a_n)`.
pub fn complete_homogeneous_log(a: &[f64], k: usize) -> Result<LogValue> {
    check_positive(a)?;
    if k > 1_000_000 || (a.len() as f64) * (k as f64) > 1e9 {
        return Err(resource!("h_k with N={} and k={k} exceeds the N*k <= 1e9 budget", a.len()));
    }
    // row[j] = ln h_j of the variables seen so far
    let mut row = vec![f64::NEG_INFINITY; k + 1];
    row[0] = 0.0;
    for &x in a {
        let lx = x.ln();
        for j in 1..=k {
            row[j] = log_add_exp(row[j], lx + row[j - 1]);
        }
    }
    Ok(LogValue::from_log(row[k]))
}

/// `(1/N) ln[ k! (N-1)! / (k+N-1)! · h_k(a) ]`, i.e. `(1/N) ln(h_k(a) / h_k(1,…,1))`.
pub fn normalized_h_log(a: &[f64], k: usize) -> Result<f64> {
    let h = complete_homogeneous_log(a, k)?;
    let n = a.len() as f64;
    let binom = ln_binomial(k as f64 + n - 1.0, k as f64)?;
    Ok((h.log_abs() - binom) / n)
}

/// `s_λ(a)` by enumerating semistandard tableaux. Oracle only: `N <= 6`, `|λ| <= 12`.
pub fn schur_direct(a: &[f64], lam: &[usize]) -> Result<LogValue> {
    check_positive(a)?;
    let n = a.len();
    let size: usize = lam.iter().sum();
    if n > 6 || size > 12 {
        return Err(resource!("schur_direct is limited to N <= 6 and |λ| <= 12"));
    }
    if lam.windows(2).any(|w| w[1] > w[0]) {
        return Err(domain!("partition must be nonincreasing"));
    }
    let shape: Vec<usize> = lam.iter().copied().filter(|&r| r > 0).collect();
    if shape.len() > n {
        return Ok(LogValue::ZERO);
    }
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut tab: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    let mut total = 0.0;
    fill(&cells, 0, &mut tab, a, 1.0, &mut total);
    Ok(LogValue::from_f64(total))
}

fn fill(
    cells: &[(usize, usize)],
    idx: usize,
    tab: &mut [Vec<usize>],
    a: &[f64],
    weight: f64,
    total: &mut f64,
) {
    if idx == cells.len() {
        *total += weight;
        return;
    }
    let (r, c) = cells[idx];
    let mut lo = 0;
    if c > 0 {
        lo = lo.max(tab[r][c - 1]);
    }
    if r > 0 {
        lo = lo.max(tab[r - 1][c] + 1);
    }
    for v in lo..a.len() {
        tab[r][c] = v;
        fill(cells, idx + 1, tab, a, weight * a[v], total);
    }
}

/// Signed log of `∏_{i<j} (x_i - x_j)` given each difference as `(sign, ln|d|)`.
fn vandermonde<F: Fn(usize, usize) -> (i8, f64)>(n: usize, diff: F) -> LogValue {
    let mut v = LogValue::ONE;
    for i in 0..n {
        for j in i + 1..n {
            let (s, l) = diff(i, j);
            v = v * LogValue::new(s, l);
        }
    }
    v
}

fn check_distinct(x: &[f64], what: &str) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if (x[i] - x[j]).abs() < DEGENERACY_GAP {
                return Err(degenerate!("{what} entries {i} and {j} coincide ({} vs {})", x[i], x[j]));
            }
        }
    }
    Ok(())
}

fn ln_superfactorial(n: usize) -> f64 {
    (1..n).map(|j| log_gamma(j as f64 + 1.0).unwrap_or(0.0)).sum()
}

/// The β = 2 Heckman–Opdam function
/// `𝓕_a(z) = (∏_{j<N} j!) det[e^{a_j z_k}] / (Δ(e^{−a}) Δ(−z))`.
///
/// With `ρ_k = N − k`, `𝓕_a(z) = J_{e^{−a}}(−z − ρ)` and equivalently
/// `J_{e^{a}}(w) = 𝓕_a(w − σ)` with `σ_k = k − 1`, where `J_x(λ) = s_λ(x)/s_λ(1,…,1)`.
pub fn gelfand_naimark_ratio(a: &[f64], z: &[f64]) -> Result<LogValue> {
    let n = a.len();
    if n == 0 || z.len() != n {
        return Err(domain!("a and z must be nonempty and of equal length"));
    }
    if a.iter().chain(z).any(|x| !x.is_finite()) {
        return Err(domain!("a and z must be finite"));
    }
    check_distinct(a, "a")?;
    check_distinct(z, "z")?;
    if n == 1 {
        return Ok(LogValue::from_log(a[0] * z[0]));
    }
    // log entries, then factor out row and column maxima
    let mut e: Vec<f64> = (0..n * n).map(|idx| a[idx / n] * z[idx % n]).collect();
    let mut shift = 0.0;
    for r in 0..n {
        let m = e[r * n..(r + 1) * n].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        shift += m;
        e[r * n..(r + 1) * n].iter_mut().for_each(|v| *v -= m);
    }
    for c in 0..n {
        let m = (0..n).map(|r| e[r * n + c]).fold(f64::NEG_INFINITY, f64::max);
        shift += m;
        (0..n).for_each(|r| e[r * n + c] -= m);
    }
    let mat: Vec<f64> = e.iter().map(|v| v.exp()).collect();
    let (sign, ld) = lu_log_det(mat, n);
    if sign == 0 {
        return Err(numeric!("determinant underflowed to zero"));
    }
    let det = LogValue::new(sign, ld + shift);
    // e^{-a_i} - e^{-a_j} = -e^{-a_i} expm1(a_i - a_j)
    let va = vandermonde(n, |i, j| {
        let d = a[i] - a[j];
        (if d > 0.0 { -1 } else { 1 }, -a[i] + d.exp_m1().abs().ln())
    });
    let vz = vandermonde(n, |i, j| {
        let d = z[j] - z[i];
        (if d > 0.0 { 1 } else { -1 }, d.abs().ln())
    });
    Ok(LogValue::from_log(ln_superfactorial(n)) * det / (va * vz))
}

/// Rank-one β = 2 Itzykson–Zuber integral
/// `(N−1)! z^{−(N−1)} Σ_i e^{z a_i} / ∏_{j≠i}(a_i − a_j)` as a signed log.
///
/// Equivalently `E[exp(z Σ a_i w_i)]` for flat Dirichlet weights `w`. The divided difference
/// cancels badly for large `N`, so it is evaluated as
/// `(N−1)! z^{−(N−1)} (1/2πi) ∮ e^{zs} / ∏(s − a_i) ds` on a circle around the centred
/// spectrum through the real saddle point, with the trapezoid rule.
pub fn hciz_rank_one_beta2(a: &[f64], z: f64) -> Result<LogValue> {
    let n = a.len();
    if n == 0 {
        return Err(domain!("need at least one eigenvalue"));
    }
    if a.iter().any(|x| !x.is_finite()) || !z.is_finite() {
        return Err(domain!("a and z must be finite"));
    }
    check_distinct(a, "a")?;
    if z == 0.0 {
        return Ok(LogValue::ONE);
    }
    if n == 1 {
        return Ok(LogValue::from_log(z * a[0]));
    }
    if z < 0.0 {
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        return hciz_rank_one_beta2(&neg, -z);
    }
    let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let c = 0.5 * (lo + hi);
    let b: Vec<f64> = a.iter().map(|x| x - c).collect();
    let half = 0.5 * (hi - lo);
    let nf = n as f64;
    // saddle: Σ 1/(s - b_i) = z on (half, inf)
    let cfg = InversionConfig { abs_tol: 1e-14, ..InversionConfig::default() };
    let hint = (nf / z - 2.0 * half, nf / z);
    let r = invert_decreasing(
        |s| b.iter().map(|x| 1.0 / (s - x)).sum(),
        z,
        half,
        f64::INFINITY,
        Some(hint),
        &cfg,
    )?;
    let log_term = |theta: f64| -> Complex64 {
        let s = Complex64::from_polar(r, theta);
        let mut l = z * s + s.ln();
        for x in &b {
            l -= (s - x).ln();
        }
        l
    };
    let l0 = log_term(0.0).re;
    let sample = |m: usize, odd_only: bool| -> f64 {
        let step = if odd_only { 2 } else { 1 };
        let start = if odd_only { 1 } else { 0 };
        (start..m).step_by(step).map(|j| (log_term(2.0 * PI * j as f64 / m as f64) - l0).exp().re).sum()
    };
    let mut m = 64usize;
    let mut sum = sample(m, false);
    let mut est = sum / m as f64;
    loop {
        let m2 = 2 * m;
        sum += sample(m2, true);
        let next = sum / m2 as f64;
        m = m2;
        let done = (next - est).abs() <= 1e-14 * next.abs();
        est = next;
        if done {
            break;
        }
        if m >= 1 << 22 {
            return Err(numeric!("HCIZ contour sum did not converge (N={n}, z={z})"));
        }
    }
    if !(est > 0.0) {
        return Err(numeric!("HCIZ contour sum lost positivity (N={n}, z={z})"));
    }
    let log = log_gamma(nf)? - (nf - 1.0) * z.ln() + z * c + l0 + est.ln();
    Ok(LogValue::from_log(log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Σ over multisets of size k of ∏ a_i, by brute force.
    fn h_enumerate(a: &[f64], k: usize) -> f64 {
        fn rec(a: &[f64], start: usize, k: usize, w: f64) -> f64 {
            if k == 0 {
                return w;
            }
            (start..a.len()).map(|i| rec(a, i, k - 1, w * a[i])).sum()
        }
        rec(a, 0, k, 1.0)
    }

    fn hciz_divided_difference(a: &[f64], z: f64) -> f64 {
        let n = a.len();
        let mut s = 0.0;
        for i in 0..n {
            let mut p = 1.0;
            for j in 0..n {
                if j != i {
                    p *= a[i] - a[j];
                }
            }
            s += (z * a[i]).exp() / p;
        }
        let fact: f64 = (1..n).map(|j| j as f64).product();
        fact * s / z.powi(n as i32 - 1)
    }

    #[test]
    fn h_examples() {
        let v = complete_homogeneous_log(&[1.0, 2.0], 2).unwrap();
        assert!((v.log_abs() - 7f64.ln()).abs() < 1e-14);
        let ones = [1.0; 5];
        let v = complete_homogeneous_log(&ones, 4).unwrap();
        assert!((v.log_abs() - 70f64.ln()).abs() < 1e-13);
        let v = complete_homogeneous_log(&[1.7], 3).unwrap();
        assert!((v.log_abs() - 3.0 * 1.7f64.ln()).abs() < 1e-14);
        assert_eq!(complete_homogeneous_log(&[1.0, 2.0], 0).unwrap(), LogValue::ONE);
    }

    #[test]
    fn h_errors() {
        assert!(matches!(complete_homogeneous_log(&[1.0, 0.0], 2), Err(crate::Error::Domain(_))));
        assert!(matches!(complete_homogeneous_log(&[1.0, -1.0], 2), Err(crate::Error::Domain(_))));
        assert!(matches!(complete_homogeneous_log(&[], 2), Err(crate::Error::Domain(_))));
        assert!(matches!(complete_homogeneous_log(&[1.0], 2_000_000), Err(crate::Error::Resource(_))));
        assert!(matches!(
            complete_homogeneous_log(&vec![1.0; 2000], 600_000),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn normalized_examples() {
        let v = normalized_h_log(&[1.0, 2.0], 2).unwrap();
        assert!((v - 0.5 * (7.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!(normalized_h_log(&[1.0; 7], 9).unwrap().abs() < 1e-13);
        let n = 512;
        let a: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64 / n as f64).collect();
        let v = normalized_h_log(&a, n).unwrap();
        assert!((v - 0.1276134289).abs() < 0.02);
    }

    #[test]
    fn h_overflow_safe() {
        let a: Vec<f64> = (0..200).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0)).collect();
        let v = complete_homogeneous_log(&a, 200).unwrap();
        assert!(v.log_abs().is_finite() && v.sign() == 1);
    }

    #[test]
    fn schur_examples() {
        for a in [[1.0, 2.0, 3.0], [0.5, 0.5, 4.0]] {
            for k in 0..6 {
                let s = schur_direct(&a, &[k]).unwrap();
                let h = complete_homogeneous_log(&a, k).unwrap();
                assert!((s.log_abs() - h.log_abs()).abs() < 1e-13);
            }
        }
        assert!((schur_direct(&[1.0, 2.0], &[1, 1]).unwrap().log_abs() - 2f64.ln()).abs() < 1e-15);
        assert!((schur_direct(&[1.0; 3], &[2, 1]).unwrap().log_abs() - 8f64.ln()).abs() < 1e-15);
        assert!(schur_direct(&[1.0, 2.0], &[1, 1, 1]).unwrap().is_zero());
        assert!(matches!(schur_direct(&[1.0; 7], &[1]), Err(crate::Error::Resource(_))));
        assert!(matches!(schur_direct(&[1.0; 3], &[13]), Err(crate::Error::Resource(_))));
        assert!(schur_direct(&[1.0; 3], &[1, 2]).is_err());
    }

    #[test]
    fn schur_matches_hook_content() {
        // s_λ(1^N) = ∏ (N + c)/h over cells
        let lam = [3usize, 2, 2, 1];
        let n = 5;
        let mut num = 1.0;
        let mut den = 1.0;
        for (r, &len) in lam.iter().enumerate() {
            for c in 0..len {
                num *= (n as f64) + c as f64 - r as f64;
                let arm = len - c - 1;
                let leg = lam.iter().skip(r + 1).filter(|&&l| l > c).count();
                den *= (arm + leg + 1) as f64;
            }
        }
        let s = schur_direct(&[1.0; 5], &lam).unwrap();
        assert!((s.to_f64() - num / den).abs() < 1e-9);
    }

    #[test]
    fn gelfand_naimark_examples() {
        let v = gelfand_naimark_ratio(&[0.7], &[2.5]).unwrap();
        assert!((v.log_abs() - 1.75).abs() < 1e-15);
        // J_{(1,2)}((2,0)) = 7/3 through both shift conventions
        let v = gelfand_naimark_ratio(&[0.0, 2f64.ln()], &[2.0, -1.0]).unwrap();
        assert!((v.to_f64() - 7.0 / 3.0).abs() < 1e-13);
        let v = gelfand_naimark_ratio(&[0.0, -(2f64.ln())], &[-3.0, 0.0]).unwrap();
        assert!((v.to_f64() - 7.0 / 3.0).abs() < 1e-13);
        let s = gelfand_naimark_ratio(&[0.0, 2f64.ln()], &[-1.0, 2.0]).unwrap();
        assert!((s.to_f64() - 7.0 / 3.0).abs() < 1e-13);
        assert!(matches!(gelfand_naimark_ratio(&[1.0, 1.0], &[0.0, 1.0]), Err(crate::Error::Degenerate(_))));
        assert!(matches!(gelfand_naimark_ratio(&[1.0, 2.0], &[1.0, 1.0]), Err(crate::Error::Degenerate(_))));
    }

    #[test]
    fn gelfand_naimark_matches_schur() {
        let parts: [&[usize]; 6] = [&[2, 1, 0], &[3, 3, 2], &[4, 0, 0, 0], &[2, 2, 1, 1], &[5, 2, 1, 0], &[1, 1, 1, 1]];
        for lam in parts {
            let n = lam.len();
            let x: Vec<f64> = (0..n).map(|i| 0.6 + 0.45 * i as f64).collect();
            let a: Vec<f64> = x.iter().map(|v| v.ln()).collect();
            let z: Vec<f64> = (0..n).map(|k| lam[k] as f64 - k as f64).collect();
            let gn = gelfand_naimark_ratio(&a, &z).unwrap();
            let exact = schur_direct(&x, lam).unwrap().to_f64() / schur_direct(&vec![1.0; n], lam).unwrap().to_f64();
            assert!((gn.to_f64() / exact - 1.0).abs() < 1e-9, "{lam:?}");
        }
    }

    #[test]
    fn hciz_examples() {
        let v = hciz_rank_one_beta2(&[0.0, 1.0], 1.0).unwrap();
        assert!((v.to_f64() - (1f64.exp() - 1.0)).abs() < 1e-14);
        let v = hciz_rank_one_beta2(&[0.0, 1.0], 1e-8).unwrap();
        assert!((v.to_f64() - 1.0).abs() < 1e-6);
        assert_eq!(hciz_rank_one_beta2(&[0.0, 1.0], 0.0).unwrap(), LogValue::ONE);
        let c = 0.8;
        for z in [-1.5, 0.4, 3.0] {
            let a: Vec<f64> = (0..6).map(|i| c + 1e-6 * i as f64).collect();
            let v = hciz_rank_one_beta2(&a, z).unwrap();
            assert!((v.log_abs() - z * c).abs() < 1e-5);
        }
        assert!(matches!(hciz_rank_one_beta2(&[1.0, 1.0], 1.0), Err(crate::Error::Degenerate(_))));
    }

    #[test]
    fn hciz_matches_divided_difference() {
        let a = [0.3, 1.1, 1.9, 2.4, 0.05];
        for z in [-4.0, -0.5, 0.2, 1.0, 6.0] {
            let v = hciz_rank_one_beta2(&a, z).unwrap().to_f64();
            let r = hciz_divided_difference(&a, z);
            assert!((v / r - 1.0).abs() < 1e-11, "z={z}: {v} vs {r}");
        }
    }

    #[test]
    fn hciz_large_n_is_finite_and_monotone() {
        let n = 256;
        let a: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
        let mut prev = f64::NEG_INFINITY;
        for z in [0.1, 1.0, 10.0, 100.0] {
            let v = hciz_rank_one_beta2(&a, z).unwrap().log_abs();
            assert!(v.is_finite() && v > prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn dp_matches_enumeration(a in proptest::collection::vec(0.1..3.0f64, 1..=6), k in 0usize..=6) {
            let dp = complete_homogeneous_log(&a, k).unwrap().log_abs();
            let e = h_enumerate(&a, k).ln();
            prop_assert!((dp - e).abs() <= 1e-12);
        }

        #[test]
        fn homogeneity(a in proptest::collection::vec(0.1..3.0f64, 1..=8), k in 0usize..30, c in 0.01..50.0f64) {
            let ca: Vec<f64> = a.iter().map(|x| c * x).collect();
            let lhs = complete_homogeneous_log(&ca, k).unwrap().log_abs();
            let rhs = complete_homogeneous_log(&a, k).unwrap().log_abs() + k as f64 * c.ln();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }

        #[test]
        fn gelfand_naimark_symmetric_in_z(z1 in -3.0..3.0f64, z2 in -3.0..3.0f64, z3 in -3.0..3.0f64) {
            prop_assume!((z1 - z2).abs() > 0.01 && (z1 - z3).abs() > 0.01 && (z2 - z3).abs() > 0.01);
            let a = [0.1, 0.5, -0.7];
            let v1 = gelfand_naimark_ratio(&a, &[z1, z2, z3]).unwrap();
            let v2 = gelfand_naimark_ratio(&a, &[z2, z3, z1]).unwrap();
            let v3 = gelfand_naimark_ratio(&a, &[z2, z1, z3]).unwrap();
            prop_assert_eq!(v1.sign(), v2.sign());
            prop_assert!((v1.log_abs() - v2.log_abs()).abs() < 1e-9);
            prop_assert!((v1.log_abs() - v3.log_abs()).abs() < 1e-9);
        }
    }
}
