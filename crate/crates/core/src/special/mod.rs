//! Scalar special functions.

mod gamma;
mod lambert;
mod logvalue;

pub use gamma::{digamma, ln_binomial, log_gamma};
pub use lambert::{lambert_w, Branch};
pub use logvalue::{log_sum_exp, LogValue};

use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to [-1, 1]
    let mut r = x - 2.0 * (x * 0.5).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    if r == 0.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// `ln(e^x + e^y)` for reals that may be `-inf`.
#[inline]
pub(crate) fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}
