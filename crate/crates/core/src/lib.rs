//! Free-probability transforms and the rank-one multiplicative spherical integral.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function of its
//! inputs; the Monte Carlo estimators are split into independently seeded blocks so a
//! caller with threads can run them in parallel and still merge bit-identical results.
//!
//! Layout:
//! - [`special`]: log-gamma, digamma, Lambert W and the signed-log [`LogValue`].
//! - [`measures`]: spectral measures with their Stieltjes and T-transforms.
//! - [`transforms`]: functional inverses, the modified S-transform, R-transform and the
//!   rate functions `H^S`, `H^R`.
//! - [`sympoly`]: complete homogeneous polynomials, tableau-enumerated Schur values,
//!   the Gelfand–Naimark determinant and the rank-one Itzykson–Zuber integral.
//! - [`spherical`]: finite-N rank-one spherical integral for every `beta > 0`.
//! - [`montecarlo`]: Dirichlet, Dixon–Anderson, corner-process and Haar estimators.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > y)` also rejects NaN

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod linalg;
mod quadrature;
mod roots;

pub mod measures;
pub mod montecarlo;
pub mod special;
pub mod spherical;
pub mod sympoly;
pub mod transforms;

pub use error::{Error, Result};
pub use measures::{MomentVector, SpectralMeasure, Spectrum};
pub use special::LogValue;
pub use spherical::BetaParameter;
pub use transforms::InversionConfig;
