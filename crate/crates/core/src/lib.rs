//! # satclass-core
//!
//! Allocation-only (`no_std` + `alloc`) core of a one-class water-saturation
//! classifier built on Support Vector Data Description.
//!
//! The crate covers everything that is pure computation:
//!
//! - [`geodata`]: validated well-log, time-depth and seismic-trace types.
//! - [`signalprep`]: depth-to-time conversion, natural cubic spline
//!   resampling and per-well integration onto a 0.15 ms grid.
//! - [`relief`]: two-class Relief feature weighting and top-k selection.
//! - [`kernels`]: Gaussian, exponential-RBF and polynomial kernels.
//! - [`svdd`]: the dual solver, hypersphere model and scoring.
//! - [`eval`]: thresholding, leave-one-well-out splits, g-metric mean,
//!   the nearest-centroid baseline and comparison tables.
//! - [`volume`]: sweeping a trained model over a trace grid.
//!
//! File formats, timing, threading and the CLI live in the `satclass` crate.

#![no_std]
// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod eval;
pub mod geodata;
pub mod kernels;
pub mod relief;
pub mod signalprep;
pub mod spline;
pub mod svdd;
pub mod volume;

pub use error::{Error, Result};
pub use eval::ClassLabel;
pub use kernels::{KernelConfig, KernelFamily};
pub use svdd::{SvddModel, TrainParams, TrainReport};
