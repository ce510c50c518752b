//! Interpolation data, the affine partition maps `L_i(x) = a_i x + b_i`, and
//! arithmetic-mean slope estimation.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One raw input row: `(x, y)` or `(x, y, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawPoint {
    pub x: f64,
    pub y: f64,
    pub d: Option<f64>,
}

impl RawPoint {
    pub fn new(x: f64, y: f64) -> Self {
        RawPoint { x, y, d: None }
    }

    pub fn hermite(x: f64, y: f64, d: f64) -> Self {
        RawPoint { x, y, d: Some(d) }
    }
}

/// Hermite interpolation data `{(x_i, y_i, d_i)}` with strictly increasing
/// knots. Derivatives are optional until a model is built.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    knots: Vec<f64>,
    values: Vec<f64>,
    derivatives: Option<Vec<f64>>,
}

impl DataSet {
    pub fn new(knots: Vec<f64>, values: Vec<f64>, derivatives: Option<Vec<f64>>) -> Result<Self> {
        let n = knots.len();
        if values.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: values.len() });
        }
        if let Some(d) = &derivatives {
            if d.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: d.len() });
            }
        }
        if n < 3 {
            return Err(Error::TooFewPoints { found: n });
        }
        for i in 0..n {
            let d_ok = derivatives.as_ref().is_none_or(|d| d[i].is_finite());
            if !knots[i].is_finite() || !values[i].is_finite() || !d_ok {
                return Err(Error::NonFiniteValue { index: i });
            }
        }
        // NaN was excluded above, so `<=` is a total check here.
        if let Some(index) = (1..n).find(|&i| knots[i] <= knots[i - 1]) {
            return Err(Error::NonIncreasingKnots { index });
        }
        Ok(DataSet { knots, values, derivatives })
    }

    /// Validates raw rows. The derivative column is kept only when every row
    /// carries one.
    pub fn from_points(points: &[RawPoint]) -> Result<Self> {
        let knots = points.iter().map(|p| p.x).collect();
        let values = points.iter().map(|p| p.y).collect();
        let derivatives = points.iter().map(|p| p.d).collect::<Option<Vec<_>>>();
        DataSet::new(knots, values, derivatives)
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    /// Always false for a validated set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivatives(&self) -> Option<&[f64]> {
        self.derivatives.as_deref()
    }

    pub fn has_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    pub(crate) fn slopes_or_err(&self) -> Result<&[f64]> {
        self.derivatives().ok_or(Error::MissingDerivatives)
    }

    /// Replaces (or installs) the derivative column.
    pub fn with_derivatives(mut self, derivatives: Vec<f64>) -> Result<Self> {
        if derivatives.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: derivatives.len() });
        }
        if let Some(index) = derivatives.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        self.derivatives = Some(derivatives);
        Ok(self)
    }

    /// Installs arithmetic-mean estimates; fails if slopes are already present.
    pub fn with_estimated_derivatives(self) -> Result<Self> {
        let d = estimate_derivatives_amm(&self)?;
        self.with_derivatives(d)
    }

    /// Mirror image `y -> -y`, `d -> -d`.
    pub fn reflected(&self) -> DataSet {
        DataSet {
            knots: self.knots.clone(),
            values: self.values.iter().map(|y| -y).collect(),
            derivatives: self.derivatives.as_ref().map(|d| d.iter().map(|v| -v).collect()),
        }
    }
}

/// Per-interval quantities derived from the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
    widths: Vec<f64>,
    scales: Vec<f64>,
    offsets: Vec<f64>,
    slopes: Vec<f64>,
    max_width: f64,
    min_width: f64,
}

impl Partition {
    pub fn new(data: &DataSet) -> Self {
        let x = data.knots();
        let y = data.values();
        let first = x[0];
        let last = x[x.len() - 1];
        let span = last - first;
        let mut widths = Vec::with_capacity(x.len() - 1);
        let mut scales = Vec::with_capacity(x.len() - 1);
        let mut offsets = Vec::with_capacity(x.len() - 1);
        let mut slopes = Vec::with_capacity(x.len() - 1);
        for i in 0..x.len() - 1 {
            let h = x[i + 1] - x[i];
            widths.push(h);
            scales.push(h / span);
            offsets.push((last * x[i] - first * x[i + 1]) / span);
            slopes.push((y[i + 1] - y[i]) / h);
        }
        let max_width = widths.iter().copied().fold(0.0, f64::max);
        let min_width = widths.iter().copied().fold(f64::INFINITY, f64::min);
        Partition { knots: x.to_vec(), widths, scales, offsets, slopes, max_width, min_width }
    }

    pub fn intervals(&self) -> usize {
        self.widths.len()
    }

    /// `h_i = x_{i+1} - x_i`.
    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// `a_i = h_i / (x_N - x_1)`.
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// `b_i = (x_N x_i - x_1 x_{i+1}) / (x_N - x_1)`.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Difference quotients `(y_{i+1} - y_i) / h_i`.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn max_width(&self) -> f64 {
        self.max_width
    }

    pub fn min_width(&self) -> f64 {
        self.min_width
    }

    pub fn first(&self) -> f64 {
        self.knots[0]
    }

    pub fn last(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.last() - self.first()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// `L_i(x) = a_i x + b_i` in the textbook affine form.
    pub fn affine_map(&self, i: usize, x: f64) -> f64 {
        self.scales[i] * x + self.offsets[i]
    }

    /// `L_i` evaluated through the normalized parameter, so that the
    /// endpoints land exactly on `x_i` and `x_{i+1}`.
    pub fn map(&self, i: usize, x: f64) -> f64 {
        self.map_param(i, self.global_param(x))
    }

    pub(crate) fn map_param(&self, i: usize, theta: f64) -> f64 {
        if theta >= 1.0 {
            self.knots[i + 1]
        } else {
            self.knots[i] + self.widths[i] * theta
        }
    }

    /// `theta = (x - x_1) / (x_N - x_1)`.
    pub fn global_param(&self, x: f64) -> f64 {
        (x - self.first()) / self.span()
    }

    /// `(x - x_i) / h_i`, the global parameter of `L_i^{-1}(x)`.
    pub fn local_param(&self, i: usize, x: f64) -> f64 {
        (x - self.knots[i]) / self.widths[i]
    }

    /// `L_i^{-1}(x)`.
    pub fn inverse_map(&self, i: usize, x: f64) -> f64 {
        let t = self.local_param(i, x);
        if t >= 1.0 {
            self.last()
        } else {
            self.first() + t * self.span()
        }
    }

    /// Interval containing `x` under half-open `[x_i, x_{i+1})` lookup, the
    /// last interval closed. `None` outside the domain.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.first() && x <= self.last()) {
            return None;
        }
        let n = self.intervals();
        let idx = self.knots.partition_point(|&k| k <= x);
        Some(idx.saturating_sub(1).min(n - 1))
    }

    /// Index of the knot equal to `x`, if any.
    pub fn knot_index(&self, x: f64) -> Option<usize> {
        self.knots.binary_search_by(|k| k.total_cmp(&x)).ok()
    }

    /// Index of a knot within `slack` of `x`.
    pub fn knot_near(&self, x: f64, slack: f64) -> Option<usize> {
        if slack <= 0.0 {
            return self.knot_index(x);
        }
        let idx = self.knots.partition_point(|&k| k < x);
        [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter(|&j| j < self.knots.len())
            .find(|&j| (self.knots[j] - x).abs() <= slack)
    }

    /// Generous absolute rounding error of one forward and one inverse map.
    pub(crate) fn rounding(&self) -> f64 {
        16.0 * f64::EPSILON * self.first().abs().max(self.last().abs())
    }
}

/// Arithmetic-mean slope estimates: a width-weighted mean of the neighbouring
/// difference quotients inside, and quadratic extrapolation at both ends.
pub fn estimate_derivatives_amm(data: &DataSet) -> Result<Vec<f64>> {
    if data.has_derivatives() {
        return Err(Error::DerivativesAlreadyPresent);
    }
    let part = Partition::new(data);
    let h = part.widths();
    let s = part.slopes();
    let n = data.len();
    let mut d = Vec::with_capacity(n);
    d.push(s[0] + (s[0] - s[1]) * h[0] / (h[0] + h[1]));
    for i in 1..n - 1 {
        d.push((h[i] * s[i - 1] + h[i - 1] * s[i]) / (h[i - 1] + h[i]));
    }
    let m = n - 2;
    d.push(s[m] + (s[m] - s[m - 1]) * h[m] / (h[m - 1] + h[m]));
    Ok(d)
}
