//! Command-line laboratory around `stransform-core`: measure specs, CSV and SVG output, a
//! worker pool for experiment grids and the oracle cross-check suite.

pub mod checks;
pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod pool;
pub mod spec;
pub mod svg;

pub use error::{LabError, LabResult};
