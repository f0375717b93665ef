//! Time-frequency sampling toolkit: Hermite-window short-time Fourier
//! transforms, polyanalytic Fock space estimates, planar density of
//! regions, and explicit sampling-constant bounds with an experiment
//! harness that checks them numerically.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod polyfock;
pub mod quad;
pub mod specfun;
pub mod tfcore;

pub use error::{Error, Result};
