//! Parameter identification for constrained data.
//!
//! Every family reduces to the same shape of condition. On interval `i` the
//! map `alpha_i y + q_i(x)` must send the admissible region into itself, which
//! after cross-multiplying by the degree-elevated denominator becomes a cubic
//! `U* (1-t)^3 + V* (1-t)^2 t + W* (1-t) t^2 + Z* t^3 >= 0`. The sufficient
//! conditions ask all four coefficients to be non-negative: the outer two
//! bound `alpha_i`, the inner two bound `v_i` from below.

mod bounds;
mod oracle;
mod validate;

pub use bounds::{
    above_line_bounds, below_line_bounds, bounds_for, positivity_alpha_bounds,
    positivity_v_threshold, rectangle_bounds, AlphaInterval, BoundsReport, Threshold,
    ThresholdLabel, ThresholdSet,
};
pub use oracle::cubic_nonneg_oracle;
pub use validate::{
    auto_select, validate, IntervalValidation, SelectionPolicy, Status, ValidationReport,
};

use crate::error::{Error, Result};
use crate::mesh::DataSet;

/// Relative slack applied to open alpha bounds when validating.
pub const BOUNDARY_SLACK: f64 = 1e-9;

/// Magnitude below which a threshold denominator counts as vanished.
pub const DENOMINATOR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    Positivity,
    /// Graph inside `[x_1, x_N] x [lower, upper]`.
    Rectangle { lower: f64, upper: f64 },
    /// Graph above `t = slope x + intercept`.
    AboveLine { slope: f64, intercept: f64 },
    BelowLine { slope: f64, intercept: f64 },
}

impl Constraint {
    /// Signed distance to violation at `(x, y)`; non-negative means satisfied.
    pub fn margin(&self, x: f64, y: f64) -> f64 {
        match *self {
            Constraint::Positivity => y,
            Constraint::Rectangle { lower, upper } => (y - lower).min(upper - y),
            Constraint::AboveLine { slope, intercept } => y - (slope * x + intercept),
            Constraint::BelowLine { slope, intercept } => slope * x + intercept - y,
        }
    }

    /// Checks that the data itself is admissible.
    pub fn check_data(&self, data: &DataSet) -> Result<()> {
        let x = data.knots();
        let y = data.values();
        match *self {
            Constraint::Positivity => match y.iter().position(|&v| v <= 0.0) {
                Some(index) => Err(Error::NonPositiveData { index }),
                None => Ok(()),
            },
            Constraint::Rectangle { lower, upper } => {
                if !(lower < upper) {
                    return Err(Error::InvalidRectangle { lower, upper });
                }
                match y.iter().position(|&v| v < lower || v > upper) {
                    Some(index) => Err(Error::DataOutsideRectangle { index }),
                    None => Ok(()),
                }
            }
            Constraint::AboveLine { slope, intercept } => {
                match (0..x.len()).find(|&i| !(y[i] > slope * x[i] + intercept)) {
                    Some(index) => Err(Error::DataNotAboveLine { index }),
                    None => Ok(()),
                }
            }
            Constraint::BelowLine { slope, intercept } => {
                match (0..x.len()).find(|&i| !(y[i] < slope * x[i] + intercept)) {
                    Some(index) => Err(Error::DataNotBelowLine { index }),
                    None => Ok(()),
                }
            }
        }
    }
}
