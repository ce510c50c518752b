//! C¹ rational cubic spline fractal interpolation functions.
//!
//! A fractal interpolation function is the fixed point of an iterated function
//! system `w_i(x, y) = (L_i(x), alpha_i y + q_i(x))`. Here each `q_i` is a
//! rational cubic with a quadratic denominator carrying two shape parameters
//! `u_i > 0` and `v_i >= 0`; the scaling factors `alpha_i` control the
//! fractality, and `alpha = 0` gives back the classical rational cubic spline.
//!
//! The crate covers
//!
//! * [`mesh`]: data validation, the partition maps, slope estimation,
//! * [`fif`] and [`attractor`]: model construction, pointwise evaluation of the
//!   function and its derivative to a tolerance, and attractor sampling,
//! * [`constraint`]: parameter ranges under which the curve stays positive,
//!   inside a rectangle, or on one side of a line,
//! * [`analysis`]: the uniform error bound, empirical margins and tension
//!   studies.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod attractor;
pub mod constraint;
mod error;
pub mod fif;
pub mod mesh;
pub mod rational;

pub use attractor::{SampleSet, DEFAULT_MAX_SAMPLES};
pub use constraint::Constraint;
pub use error::{Error, Result};
pub use fif::{FifModel, IfsParams, Sample, DEFAULT_KAPPA};
pub use mesh::{DataSet, Partition, RawPoint};
