//! File formats, synthetic data, experiments and the `satclass` command
//! line, on top of [`satclass_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod model_io;
pub mod pipeline;
pub mod sweep;
pub mod synth;

pub use error::{Error, Result};
