//! Small dense kernels: LU determinant and cyclic Jacobi eigenvalues.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{numeric, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// `(sign, ln|det|)` of a row-major `n x n` matrix via LU with partial pivoting.
pub(crate) fn lu_log_det(mut m: Vec<f64>, n: usize) -> (i8, f64) {
    let mut sign = 1i8;
    let mut log_abs = 0.0;
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col * n + col].abs();
        for row in col + 1..n {
            let v = m[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return (0, f64::NEG_INFINITY);
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            sign = -sign;
        }
        let d = m[col * n + col];
        if d < 0.0 {
            sign = -sign;
        }
        log_abs += d.abs().ln();
        for row in col + 1..n {
            let f = m[row * n + col] / d;
            if f != 0.0 {
                for k in col + 1..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
            }
        }
    }
    (sign, log_abs)
}

/// Eigenvalues of a real symmetric row-major matrix, ascending.
///
/// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below `1e-12` of the
/// total norm.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let total: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if total == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-12 * total {
            let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eig);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(numeric!("Jacobi eigensolver did not converge in 100 sweeps (n={n})"))
}

/// Eigenvalues of a Hermitian matrix `re + i im` (row-major), ascending.
///
/// Uses the real symmetric embedding `[[re, -im], [im, re]]`, whose spectrum is that of the
/// Hermitian matrix with every eigenvalue doubled.
pub(crate) fn hermitian_eigenvalues(re: &[f64], im: &[f64], n: usize) -> Result<Vec<f64>> {
    let m = 2 * n;
    let mut big = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            big[i * m + j] = re[i * n + j];
            big[(i + n) * m + (j + n)] = re[i * n + j];
            big[i * m + (j + n)] = -im[i * n + j];
            big[(i + n) * m + j] = im[i * n + j];
        }
    }
    let eig = symmetric_eigenvalues(big, m)?;
    Ok((0..n).map(|k| 0.5 * (eig[2 * k] + eig[2 * k + 1])).collect())
}
