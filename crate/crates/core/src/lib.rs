//! Validation harness for information-fusion engines under deception.
//!
//! A run simulates ground truth, passes it through a deceiver and an
//! observer, and feeds the identical report stream to two fusion engines:
//! the engine under test (F) and a standard reference (G). Errors against
//! ground truth are scored with [`metrics`], turned into Type-1 / Type-2
//! verdicts by [`validation`], and summarized by [`analysis`].

// `!(x > 0.0)` is how config checks reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod csvlog;
pub mod fusion;
pub mod geom;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod validation;
pub mod worldsim;

pub use geom::{Area, Point};
