//! Inversion of strictly decreasing functions on `(edge, inf)`.


use crate::error::{domain, numeric, Result};
use crate::transforms::InversionConfig;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Solves `f(w) = y` for `w > edge`, where `f` decreases from `limit = f(edge+)` to `0`.
///
/// The search runs in `s = ln(w - edge)`, on which `ln f` is close to linear both near the
/// edge pole and in the `1/w` tail. Brackets start at a gap of `scale * 1e-9` and grow
/// geometrically; refinement is bisection safeguarded regula falsi on `ln f(s) - ln y`.
/// `hint` optionally gives gaps `w - edge` expected to lie below and above the root; they are
/// only starting points, the bracket is still checked.
pub(crate) fn invert_decreasing<F>(
    mut f: F,
    y: f64,
    edge: f64,
    limit: f64,
    hint: Option<(f64, f64)>,
    cfg: &InversionConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(y > 0.0 && y < limit) {
        return Err(domain!("target {y} outside (0, {limit})"));
    }
    let scale = if edge > 0.0 { edge } else { 1.0 };
    // absolute for y >= 1, relative below so small targets keep full precision in w
    let tol = cfg.abs_tol * y.min(1.0);
    let ly = y.ln();

    let mut eval = |gap: f64| -> f64 {
        let v = f(edge + gap);
        if v > 0.0 {
            v.ln() - ly
        } else {
            f64::NEG_INFINITY
        }
    };

    // lower end of the bracket: phi > 0
    let (h_lo, h_hi) = hint.unwrap_or((0.0, 0.0));
    let mut gap_lo = if h_lo > 0.0 && h_lo.is_finite() { h_lo } else { scale * 1e-9 };
    let mut phi_lo = eval(gap_lo);
    let mut guard = 0;
    while !(phi_lo > 0.0) {
        gap_lo /= cfg.bracket_growth.powi(8);
        guard += 1;
        if gap_lo <= scale * 1e-300 || guard > 200 {
            // finite limit: the edge itself is the bracket
            if limit.is_finite() {
                gap_lo = 0.0;
                phi_lo = limit.ln() - ly;
                break;
            }
            return Err(numeric!("could not bracket root for y={y} near edge {edge}"));
        }
        phi_lo = eval(gap_lo);
    }
    // upper end: phi < 0
    let mut gap_hi = if h_hi > gap_lo && h_hi.is_finite() {
        h_hi
    } else if gap_lo > 0.0 {
        gap_lo
    } else {
        scale * 1e-9
    };
    let mut phi_hi = eval(gap_hi);
    guard = 0;
    while !(phi_hi < 0.0) {
        if phi_hi == 0.0 {
            return Ok(edge + gap_hi);
        }
        gap_lo = gap_hi;
        phi_lo = phi_hi;
        gap_hi *= cfg.bracket_growth;
        phi_hi = eval(gap_hi);
        guard += 1;
        if guard > 4000 || !gap_hi.is_finite() {
            return Err(numeric!("could not bracket root for y={y}: f stays above target"));
        }
    }

    let mut s_lo = if gap_lo > 0.0 { gap_lo.ln() } else { f64::NEG_INFINITY };
    let mut s_hi = gap_hi.ln();
    // +1: last step moved the lower end, -1: the upper end
    let mut last = 0i8;
    let mut best = (f64::INFINITY, edge + gap_hi);
    for _ in 0..cfg.max_iter {
        let s = if s_lo.is_finite() && phi_lo.is_finite() && phi_hi.is_finite() {
            let cand = s_lo + (s_hi - s_lo) * phi_lo / (phi_lo - phi_hi);
            if cand > s_lo && cand < s_hi {
                cand
            } else {
                0.5 * (s_lo + s_hi)
            }
        } else if s_lo.is_finite() {
            0.5 * (s_lo + s_hi)
        } else {
            s_hi - 2.0
        };
        let gap = s.exp();
        let w = edge + gap;
        let v = f(w);
        let resid = (v - y).abs();
        if resid < best.0 {
            best = (resid, w);
        }
        if resid <= tol {
            return Ok(w);
        }
        let phi = if v > 0.0 { v.ln() - ly } else { f64::NEG_INFINITY };
        if phi > 0.0 {
            s_lo = s;
            phi_lo = phi;
            if last == 1 {
                phi_hi *= 0.5;
            }
            last = 1;
        } else {
            s_hi = s;
            phi_hi = phi;
            if last == -1 {
                phi_lo *= 0.5;
            }
            last = -1;
        }
        let w_lo = edge + if s_lo.is_finite() { s_lo.exp() } else { 0.0 };
        let w_hi = edge + s_hi.exp();
        if w_hi - w_lo <= 4.0 * f64::EPSILON * w_hi {
            if w_lo <= edge && !limit.is_finite() {
                return Err(numeric!(
                    "root for y={y} lies closer to the edge {edge} than floating point resolves"
                ));
            }
            // bracket collapsed to floating resolution
            return Ok(best.1);
        }
    }
    Err(numeric!(
        "root finding stalled after {} iterations: y={y}, best residual {:.3e}, tol {tol:.3e}",
        cfg.max_iter,
        best.0
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_simple_pole() {
        let cfg = InversionConfig::default();
        // f(w) = 1/(w-2): inverse 2 + 1/y
        for y in [1e-8, 0.3, 1.0, 7.0, 1e6] {
            let w = invert_decreasing(|w| 1.0 / (w - 2.0), y, 2.0, f64::INFINITY, None, &cfg).unwrap();
            assert!((w - (2.0 + 1.0 / y)).abs() <= 1e-11 * w, "y={y}");
        }
        // root at 2 + 1e-30 is not representable
        assert!(invert_decreasing(|w| 1.0 / (w - 2.0), 1e30, 2.0, f64::INFINITY, None, &cfg).is_err());
    }

    #[test]
    fn finite_limit_at_edge() {
        let cfg = InversionConfig::default();
        // f(w) = 1/w on (1, inf): limit 1
        let w = invert_decreasing(|w| 1.0 / w, 0.999_999, 1.0, 1.0, None, &cfg).unwrap();
        assert!((1.0 / w - 0.999_999).abs() < 1e-12);
        let w = invert_decreasing(|w| 1.0 / w, 0.25, 1.0, 1.0, Some((1.0, 5.0)), &cfg).unwrap();
        assert!((w - 4.0).abs() < 1e-10);
        assert!(invert_decreasing(|w| 1.0 / w, 1.5, 1.0, 1.0, None, &cfg).is_err());
    }
}
