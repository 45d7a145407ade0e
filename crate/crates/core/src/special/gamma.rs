
use crate::error::{domain, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(domain!("{name} needs a positive finite argument, got {x}"));
    }
    Ok(())
}

/// Natural log of the gamma function for `x > 0`.
///
/// Lanczos on `[0.5, 20)`, the Stirling series above, and `ln Γ(x) = ln Γ(x+1) - ln x`
/// below `0.5`.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x >= 20.0 {
        return stirling(x);
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let y = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (y + i as f64);
    }
    let t = y + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (y + 0.5) * t.ln() - t + acc.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k} / (2k (2k-1) x^{2k-1})
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

/// `ln C(n + k, k)`-style binomial for real arguments: `ln Γ(n+1) - ln Γ(k+1) - ln Γ(n-k+1)`.
///
/// Small integer cases are summed exactly as `Σ ln((n-k+j)/j)` so that normalizations built on
/// top of it cancel to rounding.
pub fn ln_binomial(n: f64, k: f64) -> Result<f64> {
    if !(n.is_finite() && k.is_finite()) || k < 0.0 || k > n {
        return Err(domain!("ln_binomial needs 0 <= k <= n, got n={n}, k={k}"));
    }
    let m = if k > n - k { n - k } else { k };
    if m == m.floor() && n == n.floor() && m <= 4096.0 {
        let base = n - m;
        let mut acc = 0.0;
        let mut j = 1.0;
        while j <= m {
            acc += ((base + j) / j).ln();
            j += 1.0;
        }
        return Ok(acc);
    }
    Ok(log_gamma_unchecked(n + 1.0) - log_gamma_unchecked(k + 1.0) - log_gamma_unchecked(n - k + 1.0))
}
