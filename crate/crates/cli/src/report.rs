//! JSON records for bounds, validation and margin reports.

use fractal_spline_core::analysis::MarginReport;
use fractal_spline_core::constraint::{
    AlphaInterval, BoundsReport, IntervalValidation, Threshold, ThresholdSet, ValidationReport,
};
use fractal_spline_core::Constraint;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintDto {
    Positivity,
    Rectangle { lower: f64, upper: f64 },
    AboveLine { slope: f64, intercept: f64 },
    BelowLine { slope: f64, intercept: f64 },
}

impl From<Constraint> for ConstraintDto {
    fn from(c: Constraint) -> Self {
        match c {
            Constraint::Positivity => ConstraintDto::Positivity,
            Constraint::Rectangle { lower, upper } => ConstraintDto::Rectangle { lower, upper },
            Constraint::AboveLine { slope, intercept } => ConstraintDto::AboveLine { slope, intercept },
            Constraint::BelowLine { slope, intercept } => ConstraintDto::BelowLine { slope, intercept },
        }
    }
}

impl From<ConstraintDto> for Constraint {
    fn from(c: ConstraintDto) -> Self {
        match c {
            ConstraintDto::Positivity => Constraint::Positivity,
            ConstraintDto::Rectangle { lower, upper } => Constraint::Rectangle { lower, upper },
            ConstraintDto::AboveLine { slope, intercept } => Constraint::AboveLine { slope, intercept },
            ConstraintDto::BelowLine { slope, intercept } => Constraint::BelowLine { slope, intercept },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaIntervalDto {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
}

impl From<AlphaInterval> for AlphaIntervalDto {
    fn from(iv: AlphaInterval) -> Self {
        AlphaIntervalDto { lo: iv.lo, hi: iv.hi, lo_closed: iv.lo_closed }
    }
}

/// A threshold; `value` is null when the inequality does not involve `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdDto {
    pub label: String,
    pub value: Option<f64>,
    /// `finite`, `no_constraint` or `infeasible`.
    pub kind: String,
}

impl From<&Threshold> for ThresholdDto {
    fn from(t: &Threshold) -> Self {
        let (value, kind) = if t.value.is_finite() {
            (Some(t.value), "finite")
        } else if t.value < 0.0 {
            (None, "no_constraint")
        } else {
            (None, "infeasible")
        };
        ThresholdDto { label: t.label.as_str().into(), value, kind: kind.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBoundsDto {
    pub index: usize,
    pub alpha_interval: AlphaIntervalDto,
    pub u: f64,
    /// Scaling factor at which the thresholds were evaluated.
    pub alpha: f64,
    pub thresholds: Vec<ThresholdDto>,
    pub required_v: Option<f64>,
    /// Set when the thresholds are undefined at `alpha`.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsDto {
    pub constraint: ConstraintDto,
    pub intervals: Vec<IntervalBoundsDto>,
}

impl BoundsDto {
    /// Evaluates thresholds at `alphas` (zero when absent).
    pub fn new(report: &BoundsReport, alphas: Option<&[f64]>) -> Self {
        let intervals = report
            .alpha_intervals()
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let alpha = alphas.map_or(0.0, |a| a[i]);
                let (thresholds, required_v, error) = match report.thresholds(i, alpha) {
                    Ok(set) => (thresholds_dto(&set), finite(set.required()), None),
                    Err(e) => (Vec::new(), None, Some(e.to_string())),
                };
                IntervalBoundsDto {
                    index: i,
                    alpha_interval: (*iv).into(),
                    u: report.u()[i],
                    alpha,
                    thresholds,
                    required_v,
                    error,
                }
            })
            .collect();
        BoundsDto { constraint: report.constraint().into(), intervals }
    }
}

fn thresholds_dto(set: &ThresholdSet) -> Vec<ThresholdDto> {
    set.entries.iter().map(ThresholdDto::from).collect()
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalValidationDto {
    pub index: usize,
    pub status: String,
    pub binding_threshold_label: Option<String>,
    pub alpha: f64,
    pub alpha_interval: AlphaIntervalDto,
    pub alpha_margin: f64,
    pub v_margin: Option<f64>,
    pub required_v: Option<f64>,
    pub boundary: bool,
}

impl IntervalValidationDto {
    fn new(index: usize, iv: &IntervalValidation) -> Self {
        IntervalValidationDto {
            index,
            status: iv.status.as_str().into(),
            binding_threshold_label: iv.binding.map(|l| l.as_str().into()),
            alpha: iv.alpha,
            alpha_interval: iv.alpha_interval.into(),
            alpha_margin: iv.alpha_margin,
            v_margin: iv.v_margin.and_then(finite),
            required_v: iv.required_v.and_then(finite),
            boundary: iv.boundary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationDto {
    pub constraint: ConstraintDto,
    pub verified: bool,
    pub intervals: Vec<IntervalValidationDto>,
}

impl From<&ValidationReport> for ValidationDto {
    fn from(r: &ValidationReport) -> Self {
        ValidationDto {
            constraint: r.constraint.into(),
            verified: r.is_verified(),
            intervals: r.intervals.iter().enumerate().map(|(i, iv)| IntervalValidationDto::new(i, iv)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginDto {
    pub constraint: ConstraintDto,
    pub depth: usize,
    pub samples: usize,
    pub margin: f64,
    pub x: f64,
    pub y: f64,
    pub satisfied: bool,
}

impl MarginDto {
    pub fn new(r: &MarginReport, tol: f64) -> Self {
        MarginDto {
            constraint: r.constraint.into(),
            depth: r.depth,
            samples: r.samples,
            margin: r.margin,
            x: r.x,
            y: r.y,
            satisfied: r.satisfied(tol),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| crate::error::ToolError::Json {
        path: "<report>".into(),
        source,
    })?;
    s.push('\n');
    Ok(s)
}
