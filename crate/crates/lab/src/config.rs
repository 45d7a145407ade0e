//! Grids, N lists and the key=value experiment config.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{LabError, LabResult};
use crate::spec::parse_list;

/// `start:stop:step` (inclusive of `stop` up to rounding) or a comma list.
pub fn parse_z_grid(s: &str) -> LabResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let v = parse_list(&format!("{start},{stop},{step}"), "z-grid bound")?;
            let (start, stop, step) = (v[0], v[1], v[2]);
            if step <= 0.0 || stop < start {
                return Err(LabError::Usage(format!("z-grid `{s}` needs step > 0 and stop >= start")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(LabError::Usage(format!("z-grid `{s}` has more than 10^6 points")));
            }
            (0..=n).map(|i| start + i as f64 * step).collect()
        }
        [_] => parse_list(s, "z")?,
        _ => return Err(LabError::Usage(format!("z-grid `{s}` is neither start:stop:step nor a list"))),
    };
    check_z_grid(&grid)?;
    Ok(grid)
}

pub fn check_z_grid(grid: &[f64]) -> LabResult<()> {
    if grid.is_empty() || grid.iter().any(|z| *z < 0.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::Usage(format!("z-grid must be nonnegative and increasing, got {grid:?}")));
    }
    Ok(())
}

pub fn parse_n_list(s: &str) -> LabResult<Vec<usize>> {
    let list = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| LabError::Usage(format!("`{t}` is not a size"))))
        .collect::<LabResult<Vec<_>>>()?;
    if list.is_empty() || list[0] == 0 || list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::Usage(format!("n-list must be positive and increasing, got `{s}`")));
    }
    Ok(list)
}

pub const DEFAULT_N_LIST: [usize; 7] = [8, 16, 32, 64, 128, 256, 512];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub measure: String,
    pub beta: f64,
    pub z_grid: Vec<f64>,
    pub n_list: Vec<usize>,
    pub seed: u64,
    pub samples: usize,
    pub output_dir: Option<PathBuf>,
    pub emit_svg: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            measure: "uniform:0:2".into(),
            beta: 2.0,
            z_grid: (0..=16).map(|i| i as f64 * 0.125).collect(),
            n_list: DEFAULT_N_LIST.to_vec(),
            seed: 42,
            samples: 100_000,
            output_dir: None,
            emit_svg: false,
        }
    }
}

impl ExperimentConfig {
    /// Applies `key = value` lines over `self`. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> LabResult<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| LabError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| LabError::Usage(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> LabResult<()> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> LabResult<()> {
        let bad = |what: &str| LabError::Usage(format!("{key}: `{value}` is not {what}"));
        match key {
            "measure" => self.measure = value.to_string(),
            "beta" => self.beta = value.parse().map_err(|_| bad("a number"))?,
            "z_grid" => self.z_grid = parse_z_grid(value)?,
            "n_list" => self.n_list = parse_n_list(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad("an integer"))?,
            "samples" => self.samples = value.parse().map_err(|_| bad("an integer"))?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "emit_svg" => self.emit_svg = value.parse().map_err(|_| bad("true or false"))?,
            _ => return Err(LabError::Usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }
}
