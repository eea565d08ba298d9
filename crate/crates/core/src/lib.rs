//! Anisotropic Hermite-Gauss (AHG) functions.
//!
//! An AHG function `HG^Θ_ν` is a multivariate Hermite-Gauss function whose
//! Gaussian envelope and coordinate coupling are set by a complex symmetric
//! matrix `Θ` with positive-definite real part. This crate evaluates them
//! (and their duals), implements their closed-form identities (derivatives,
//! anisotropy re-expansion, offset and product expansions, value at the
//! origin), their linear canonical / fractional Fourier / Laplace transforms,
//! and their Wigner-Ville distributions.
//!
//! Every closed form is paired with an independent numerical route in
//! [`oracle`] (tensor Gauss-Hermite quadrature, finite differences and a
//! literal derivative-of-Gaussian evaluator).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// Float methods come from `num_traits::Float`. Whenever `std` is anywhere in
// the build graph (tests, or dependents that enable it) its inherent methods
// win and those imports are reported unused, hence the per-import allows.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ahg;
pub mod cmatrix;
mod error;
pub mod hermite1d;
pub mod multiindex;
pub mod oracle;
pub mod transforms;
pub mod wigner;

pub use num_complex::Complex64;

pub use ahg::{AhgMode, ModeExpansion};
pub use cmatrix::{AnisotropyMatrix, CMat, LogDet};
pub use error::{Error, Result};
pub use multiindex::{MultiIndex, MultiIndexMatrix};
pub use transforms::{LctParams, TransformedMode};
pub use wigner::PhasePoint;

/// Hard upper bound on the number of terms any enumeration may produce.
pub const TERM_LIMIT: u64 = 10_000_000;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;
