use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Div, Mul, Neg};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// A real number stored as `sign * exp(log_abs)`.
///
/// `sign == 0` is exactly zero and always carries `log_abs == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    sign: i8,
    log_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { sign: 0, log_abs: f64::NEG_INFINITY };
    pub const ONE: LogValue = LogValue { sign: 1, log_abs: 0.0 };

    /// Builds from a sign and a log-magnitude; a zero sign canonicalizes the magnitude.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogValue { sign: sign.signum(), log_abs }
    }

    /// Positive value `exp(log_abs)`.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            LogValue { sign: 1, log_abs: x.ln() }
        } else {
            LogValue { sign: -1, log_abs: (-x).ln() }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the absolute value (`-inf` for zero).
    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Materializes the value; may overflow to `±inf` or underflow to zero.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    /// `ln(x)` for a positive value, `None` otherwise.
    pub fn ln(&self) -> Option<f64> {
        (self.sign > 0).then_some(self.log_abs)
    }

    pub fn powf(&self, p: f64) -> Option<Self> {
        match self.sign {
            1 => Some(Self::from_log(p * self.log_abs)),
            0 if p > 0.0 => Some(Self::ZERO),
            _ => None,
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        if rhs.sign == 0 {
            return LogValue { sign: self.sign.max(1), log_abs: f64::INFINITY };
        }
        LogValue::new(self.sign * rhs.sign, self.log_abs - rhs.log_abs)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue { sign: -self.sign, log_abs: self.log_abs }
    }
}

fn log_sum_sorted(mut logs: Vec<f64>) -> f64 {
    if logs.is_empty() {
        return f64::NEG_INFINITY;
    }
    // ascending order makes the result independent of input order
    logs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let max = *logs.last().unwrap();
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let total: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    max + total.ln()
}

/// Signed sum of log-encoded reals.
///
/// Positive and negative parts are summed separately with the usual max-shift, then
/// subtracted; equal parts cancel to exactly zero.
pub fn log_sum_exp(terms: &[LogValue]) -> LogValue {
    let pos: Vec<f64> = terms.iter().filter(|t| t.sign > 0).map(|t| t.log_abs).collect();
    let neg: Vec<f64> = terms.iter().filter(|t| t.sign < 0).map(|t| t.log_abs).collect();
    let lp = log_sum_sorted(pos);
    let ln = log_sum_sorted(neg);
    if lp == ln {
        return LogValue::ZERO;
    }
    if lp > ln {
        LogValue::new(1, lp + (-(ln - lp).exp_m1()).ln())
    } else {
        LogValue::new(-1, ln + (-(lp - ln).exp_m1()).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = log_sum_exp(&[LogValue::from_log(0.0), LogValue::from_log(0.0)]);
        assert_eq!(s.sign(), 1);
        assert!((s.log_abs() - 2f64.ln()).abs() < 1e-15);

        let five = 5f64.ln();
        let s = log_sum_exp(&[LogValue::new(1, five), LogValue::new(-1, five)]);
        assert_eq!(s, LogValue::ZERO);
        assert_eq!(s.log_abs(), f64::NEG_INFINITY);

        let s = log_sum_exp(&[LogValue::from_log(1000.0), LogValue::from_log(1000.0)]);
        assert!((s.log_abs() - 1000.0 - 2f64.ln()).abs() < 1e-12);

        let s = log_sum_exp(&[LogValue::from_log(-1e6), LogValue::new(-1, -1e6 + 2f64.ln())]);
        assert_eq!(s.sign(), -1);
        assert!((s.log_abs() + 1e6).abs() < 1e-9);
    }

    #[test]
    fn zero_is_canonical() {
        assert_eq!(LogValue::new(0, 3.0).log_abs(), f64::NEG_INFINITY);
        assert_eq!(LogValue::from_f64(0.0), LogValue::ZERO);
        assert_eq!(log_sum_exp(&[]), LogValue::ZERO);
    }

    #[test]
    fn arithmetic() {
        let a = LogValue::from_f64(-3.0);
        let b = LogValue::from_f64(0.5);
        assert!(((a * b).to_f64() + 1.5).abs() < 1e-15);
        assert!(((a / b).to_f64() + 6.0).abs() < 1e-14);
        assert!(((-a).to_f64() - 3.0).abs() < 1e-15);
        assert_eq!(a.ln(), None);
        assert!((b.powf(2.0).unwrap().to_f64() - 0.25).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn round_trip(x in prop_oneof![-1e300..-1e-300f64, 1e-300..1e300f64]) {
            let v = LogValue::from_f64(x);
            let back = v.to_f64();
            prop_assert!(((back - x) / x).abs() <= 4.0 * f64::EPSILON * (x.abs().ln().abs() + 1.0));
            prop_assert_eq!(LogValue::from_f64(back).sign(), v.sign());
        }

        #[test]
        fn permutation_and_zero_invariance(
            xs in proptest::collection::vec((-1e3..1e3f64, any::<bool>()), 1..12),
            seed in any::<u64>(),
        ) {
            let terms: Vec<LogValue> =
                xs.iter().map(|&(l, s)| LogValue::new(if s { 1 } else { -1 }, l)).collect();
            let base = log_sum_exp(&terms);
            let mut shuffled = terms.clone();
            let n = shuffled.len();
            let mut state = seed;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (state >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(log_sum_exp(&shuffled), base);
            let mut with_zero = terms.clone();
            with_zero.push(LogValue::ZERO);
            prop_assert_eq!(log_sum_exp(&with_zero), base);
            let _ = vec![0u8];
        }
    }
}
