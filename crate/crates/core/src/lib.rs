//! Monte Carlo simulation of noisy, controlled one- and two-qubit systems and
//! generation of the resulting datasets.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod datasetio;
pub mod error;
pub mod evolver;
pub mod generate;
pub mod measurement;
pub mod noisegen;
pub mod pulsegen;
pub mod qcore;

pub use error::{Error, Result};
