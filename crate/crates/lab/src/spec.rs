//! Measure specs: `uniform:lo:hi`, `ones:N`, `point:c`, `atoms:x@w,...`,
//! `empirical:x1,x2,...` and `file:path`.

use std::fs;
use std::path::Path;

use stransform_core::SpectralMeasure;

use crate::error::{LabError, LabResult};

fn usage(msg: String) -> LabError {
    LabError::Usage(msg)
}

fn real(s: &str, what: &str) -> LabResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| usage(format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(usage(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

pub fn parse_measure(spec: &str) -> LabResult<SpectralMeasure> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("measure spec `{spec}` has no `kind:` prefix")))?;
    let m = match kind {
        "uniform" => {
            let (lo, hi) = rest
                .split_once(':')
                .ok_or_else(|| usage(format!("`{spec}`: expected uniform:lo:hi")))?;
            SpectralMeasure::uniform(real(lo, "uniform lo")?, real(hi, "uniform hi")?)?
        }
        "ones" => {
            let n: usize = rest.trim().parse().map_err(|_| usage(format!("`{spec}`: expected ones:N")))?;
            SpectralMeasure::ones(n)?
        }
        "point" | "delta" => SpectralMeasure::point_mass(real(rest, "point mass")?)?,
        "atoms" => {
            let pairs = rest
                .split(',')
                .map(|item| {
                    let (x, w) = item
                        .split_once('@')
                        .ok_or_else(|| usage(format!("atom `{item}` is not value@weight")))?;
                    Ok((real(x, "atom")?, real(w, "atom weight")?))
                })
                .collect::<LabResult<Vec<_>>>()?;
            SpectralMeasure::atomic(pairs)?
        }
        "empirical" => SpectralMeasure::empirical(parse_list(rest, "eigenvalue")?)?,
        "file" => SpectralMeasure::empirical(load_eigenvalues(Path::new(rest))?)?,
        _ => return Err(usage(format!("unknown measure kind `{kind}`"))),
    };
    Ok(m)
}

pub fn parse_list(s: &str, what: &str) -> LabResult<Vec<f64>> {
    let v = s.split(',').map(|x| real(x, what)).collect::<LabResult<Vec<_>>>()?;
    if v.is_empty() {
        return Err(usage(format!("empty {what} list")));
    }
    Ok(v)
}

/// Whitespace- or comma-separated reals; `#` starts a comment.
pub fn load_eigenvalues(path: &Path) -> LabResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            out.push(real(tok, &format!("{}:{}", path.display(), lineno + 1))?);
        }
    }
    if out.is_empty() {
        return Err(usage(format!("{} holds no eigenvalues", path.display())));
    }
    Ok(out)
}

/// `n` representative points of `mu`: the eigenvalues themselves when `mu` is empirical with
/// exactly `n` of them, quantile midpoints otherwise.
pub fn discretize(mu: &SpectralMeasure, n: usize) -> LabResult<Vec<f64>> {
    match mu.eigenvalues() {
        Some(ev) if ev.len() == n => Ok(ev.to_vec()),
        _ => Ok(mu.quantile_midpoints(n)?),
    }
}
