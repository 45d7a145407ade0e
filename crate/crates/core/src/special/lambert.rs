use core::f64::consts::E;

use crate::error::{domain, numeric, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

const INV_E: f64 = 1.0 / E;

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `W_0`, defined on `[-1/e, inf)`, values `>= -1`.
    Principal,
    /// `W_{-1}`, defined on `[-1/e, 0)`, values `<= -1`.
    MinusOne,
}

/// Solves `w e^w = x` on the requested real branch.
///
/// Halley iteration from a branch-aware initial guess (branch-point series near `-1/e`,
/// logarithmic asymptotics elsewhere), falling back to bisection if Halley stalls or leaves
/// the branch.
pub fn lambert_w(x: f64, branch: Branch) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain!("lambert_w needs a finite argument, got {x}"));
    }
    // tolerate rounding of -1/e itself
    if x < -INV_E * (1.0 + 4.0 * f64::EPSILON) {
        return Err(domain!("lambert_w undefined below -1/e, got {x}"));
    }
    if branch == Branch::MinusOne && x >= 0.0 {
        return Err(domain!("W_-1 needs -1/e <= x < 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let q = (E * x + 1.0).max(0.0);
    if q == 0.0 {
        return Ok(-1.0);
    }
    let p = (2.0 * q).sqrt();

    let guess = match branch {
        Branch::Principal => {
            if x < -0.25 {
                -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
            } else if x < 3.0 {
                // Padé-style start, good to a few percent on [-0.25, 3)
                x * (1.0 + 4.0 / 3.0 * x) / (1.0 + x * (7.0 / 3.0 + 5.0 / 6.0 * x))
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        Branch::MinusOne => {
            if x < -0.25 {
                -1.0 - p * (1.0 + p * (1.0 / 3.0 + p * 11.0 / 72.0))
            } else {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    };

    if let Some(w) = halley(x, guess, branch) {
        return Ok(w);
    }
    bisect(x, branch)
}

fn on_branch(w: f64, branch: Branch) -> bool {
    match branch {
        Branch::Principal => w >= -1.0,
        Branch::MinusOne => w <= -1.0,
    }
}

fn halley(x: f64, mut w: f64, branch: Branch) -> Option<f64> {
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            return None;
        }
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() || !on_branch(next, branch) {
            return None;
        }
        if (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs()) {
            return Some(next);
        }
        w = next;
    }
    None
}

fn bisect(x: f64, branch: Branch) -> Result<f64> {
    // w e^w is increasing on [-1, inf) and decreasing on (-inf, -1]
    let (mut lo, mut hi) = match branch {
        Branch::Principal => {
            let mut hi = 1.0f64;
            while hi * hi.exp() < x {
                hi *= 2.0;
            }
            (-1.0, hi)
        }
        Branch::MinusOne => {
            let mut lo = -2.0f64;
            while lo * lo.exp() < x {
                lo *= 2.0;
                if lo < -1e4 {
                    break;
                }
            }
            (lo, -1.0)
        }
    };
    let increasing = branch == Branch::Principal;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            return Ok(mid);
        }
        let below = mid * mid.exp() < x;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(numeric!("lambert_w bisection did not converge for x={x}"))
}
