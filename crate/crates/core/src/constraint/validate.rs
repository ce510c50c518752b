use alloc::vec::Vec;

use super::bounds::{bounds_for, AlphaInterval, BoundsReport, ThresholdLabel};
use super::{cubic_nonneg_oracle, Constraint, BOUNDARY_SLACK};
use crate::error::{Error, Result};
use crate::fif::{FifModel, IfsParams, DEFAULT_KAPPA};
use crate::mesh::DataSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// All four transformed coefficients are non-negative.
    SatisfiesSufficient,
    /// The sufficient test fails but the cubic is non-negative on `[0, 1]`.
    SatisfiesOracle,
    Unproven,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::SatisfiesSufficient => "satisfies_sufficient",
            Status::SatisfiesOracle => "satisfies_oracle",
            Status::Unproven => "unproven",
        }
    }

    pub fn is_satisfied(self) -> bool {
        self != Status::Unproven
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalValidation {
    pub status: Status,
    pub binding: Option<ThresholdLabel>,
    pub alpha: f64,
    pub alpha_interval: AlphaInterval,
    /// Distance from alpha to the nearer end of its admissible interval.
    pub alpha_margin: f64,
    /// `v_i` minus the required threshold, when thresholds are defined.
    pub v_margin: Option<f64>,
    pub required_v: Option<f64>,
    /// Alpha sits at (or beyond) an end of its admissible interval.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub constraint: Constraint,
    pub intervals: Vec<IntervalValidation>,
}

impl ValidationReport {
    pub fn is_verified(&self) -> bool {
        self.intervals.iter().all(|iv| iv.status.is_satisfied())
    }

    pub fn unproven(&self) -> impl Iterator<Item = usize> + '_ {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| !iv.status.is_satisfied())
            .map(|(i, _)| i)
    }
}

/// Checks a built model's parameters against the constraint's sufficient
/// conditions, falling back to the exact cubic test for one-sided families.
pub fn validate(model: &FifModel, constraint: Constraint) -> Result<ValidationReport> {
    let params = model.params();
    let report = bounds_for(model.data(), constraint, &params.u)?;
    let intervals = (0..model.intervals())
        .map(|i| validate_interval(&report, i, params.alphas[i], params.u[i], params.v[i]))
        .collect();
    Ok(ValidationReport { constraint, intervals })
}

fn validate_interval(report: &BoundsReport, i: usize, alpha: f64, u: f64, v: f64) -> IntervalValidation {
    let interval = report.alpha_intervals()[i];
    let inside = interval.contains_with_slack(alpha, BOUNDARY_SLACK);
    let thresholds = if inside { report.thresholds_with_u(i, alpha, u).ok() } else { None };
    let required = thresholds.as_ref().map(|t| t.required());
    let sufficient = required.is_some_and(|r| v >= r);
    let status = if sufficient {
        Status::SatisfiesSufficient
    } else if alpha >= 0.0
        && report
            .transformed_cubic(i, alpha, u, v)
            .is_some_and(|[us, vs, ws, zs]| cubic_nonneg_oracle(zs, ws, vs, us))
    {
        Status::SatisfiesOracle
    } else {
        Status::Unproven
    };
    IntervalValidation {
        status,
        binding: thresholds.as_ref().and_then(|t| t.binding()),
        alpha,
        alpha_interval: interval,
        alpha_margin: interval.margin(alpha),
        v_margin: required.map(|r| v - r),
        required_v: required,
        boundary: thresholds.is_none(),
    }
}

/// Deterministic parameter choice: `alpha_i = rho * hi_i`, `u_i = u`,
/// `v_i = required + sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionPolicy {
    pub rho: f64,
    pub sigma: f64,
    pub u: f64,
    pub kappa: f64,
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        SelectionPolicy { rho: 0.9, sigma: 0.01, u: 1.0, kappa: DEFAULT_KAPPA }
    }
}

impl SelectionPolicy {
    pub fn with_rho(self, rho: f64) -> Self {
        SelectionPolicy { rho, ..self }
    }

    fn check(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidPolicy("rho must lie in (0, 1)"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidPolicy("sigma must be positive"));
        }
        if !(self.u > 0.0 && self.u.is_finite()) {
            return Err(Error::InvalidPolicy("u must be positive"));
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::InvalidKappa(self.kappa));
        }
        Ok(())
    }
}

/// Picks parameters satisfying the sufficient conditions.
pub fn auto_select(data: &DataSet, constraint: Constraint, policy: SelectionPolicy) -> Result<IfsParams> {
    policy.check()?;
    let n = data.intervals();
    let u = alloc::vec![policy.u; n];
    let report = bounds_for(data, constraint, &u)?;
    let scales = crate::mesh::Partition::new(data).scales().to_vec();
    let mut alphas = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for i in 0..n {
        let iv = report.alpha_intervals()[i];
        let cap = policy.kappa * scales[i];
        let alpha = (policy.rho * iv.hi).min(cap);
        let required = report.thresholds(i, alpha)?.required();
        if !required.is_finite() {
            return Err(Error::Infeasible { interval: i });
        }
        alphas.push(alpha);
        vs.push(required + policy.sigma);
    }
    Ok(IfsParams::new(alphas, u, vs).with_kappa(policy.kappa))
}
