//! Error bounds, empirical constraint margins and tension studies.

use alloc::vec::Vec;

use crate::attractor::{visit_attractor, DEFAULT_MAX_SAMPLES};
use crate::constraint::Constraint;
use crate::error::{Error, Result};
use crate::fif::{FifModel, IfsParams};
use crate::mesh::{DataSet, Partition};

/// Points per tension-study grid, in addition to the knots.
pub const STUDY_GRID: usize = 256;

/// Tolerance for pointwise evaluation in studies.
pub const STUDY_TOL: f64 = 1e-12;

/// Norms entering the uniform error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundInputs {
    pub y_inf: f64,
    pub d_inf: f64,
    pub u_inf: f64,
    pub v_inf: f64,
    pub alpha_inf: f64,
    /// Widest interval.
    pub h: f64,
    pub span: f64,
    /// `max(|d_1|, |d_N|)`.
    pub end_slope: f64,
    /// `|y|_inf + max(|y_1|, |y_N|)`.
    pub m: f64,
    /// `min(u_i + v_i / 4)`.
    pub s: f64,
}

fn inf_norm(s: &[f64]) -> f64 {
    s.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

impl ErrorBoundInputs {
    pub fn from_model(model: &FifModel) -> Self {
        let y = model.data().values();
        let d = model.derivatives();
        let p = model.params();
        let n = y.len();
        let y_inf = inf_norm(y);
        ErrorBoundInputs {
            y_inf,
            d_inf: inf_norm(d),
            u_inf: inf_norm(&p.u),
            v_inf: inf_norm(&p.v),
            alpha_inf: p.max_abs_alpha(),
            h: model.partition().max_width(),
            span: model.partition().span(),
            end_slope: d[0].abs().max(d[n - 1].abs()),
            m: y_inf + y[0].abs().max(y[n - 1].abs()),
            s: p.u.iter().zip(&p.v).map(|(u, v)| u + 0.25 * v).fold(f64::INFINITY, f64::min),
        }
    }

    /// `|alpha| / (s (1 - |alpha|)) {|u| M + [(3|u| + |v|) M + |u| (h |d| + span max(|d_1|, |d_N|))] / 4}`.
    pub fn perturbation_bound(&self) -> f64 {
        if self.alpha_inf == 0.0 {
            return 0.0;
        }
        let inner = self.u_inf * self.m
            + 0.25
                * ((3.0 * self.u_inf + self.v_inf) * self.m
                    + self.u_inf * (self.h * self.d_inf + self.span * self.end_slope));
        self.alpha_inf / (self.s * (1.0 - self.alpha_inf)) * inner
    }
}

/// Upper bound on `||C - Psi||_inf`.
pub fn perturbation_bound(model: &FifModel) -> f64 {
    model.perturbation_bound()
}

/// `phi3 h^3 c / 2 + perturbation_bound`, where `phi3` bounds the third
/// derivative of the sampled function and `c` is the classical spline's
/// interpolation constant, both supplied by the caller.
pub fn total_error_bound(model: &FifModel, phi3_norm: f64, c_const: f64) -> f64 {
    let h = model.partition().max_width();
    0.5 * phi3_norm * h * h * h * c_const + model.perturbation_bound()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginReport {
    pub constraint: Constraint,
    /// Minimum of the constraint functional over the samples.
    pub margin: f64,
    /// Abscissa of the minimum (smallest on ties).
    pub x: f64,
    pub y: f64,
    pub depth: usize,
    pub samples: usize,
}

impl MarginReport {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}

/// Minimum constraint margin over the depth-`depth` attractor samples.
pub fn empirical_margin(model: &FifModel, constraint: Constraint, depth: usize) -> Result<MarginReport> {
    let mut report = MarginReport {
        constraint,
        margin: f64::INFINITY,
        x: f64::NAN,
        y: f64::NAN,
        depth,
        samples: 0,
    };
    visit_attractor(model, depth, DEFAULT_MAX_SAMPLES, |s| {
        report.samples += 1;
        let m = constraint.margin(s.x, s.y);
        if m < report.margin || (m == report.margin && s.x < report.x) {
            report.margin = m;
            report.x = s.x;
            report.y = s.y;
        }
    })?;
    Ok(report)
}

/// Largest `|Psi - C|` over the depth-`depth` attractor samples.
pub fn sampled_classical_distance(model: &FifModel, depth: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    let mut failure = None;
    visit_attractor(model, depth, DEFAULT_MAX_SAMPLES, |s| match model.eval_classical(s.x) {
        Ok(c) => worst = worst.max((s.y - c).abs()),
        Err(e) => failure = Some(e),
    })?;
    failure.map_or(Ok(worst), Err)
}

/// `n` equispaced points over the domain merged with the knots, sorted.
pub fn study_grid(partition: &Partition, n: usize) -> Vec<f64> {
    let (a, span) = (partition.first(), partition.span());
    let mut grid: Vec<f64> = (0..n).map(|k| a + span * k as f64 / (n - 1).max(1) as f64).collect();
    grid.extend_from_slice(partition.knots());
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Grid maximum of `|f - g|`; a lower bound on the true sup-distance.
pub fn sup_distance<F, G>(grid: &[f64], mut f: F, mut g: G) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    G: FnMut(f64) -> Result<f64>,
{
    grid.iter().try_fold(0.0_f64, |m, &x| Ok(m.max((f(x)? - g(x)?).abs())))
}

/// Grid sup-distance to the affine FIF for each `v` applied to every interval.
pub fn tension_study(data: &DataSet, alphas: &[f64], u: &[f64], v_values: &[f64]) -> Result<Vec<f64>> {
    let increasing = v_values.windows(2).all(|w| w[0] < w[1]);
    if v_values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) || !increasing {
        return Err(Error::InvalidTensionSequence);
    }
    let grid = study_grid(&Partition::new(data), STUDY_GRID);
    v_values
        .iter()
        .map(|&v| {
            let params = IfsParams::new(alphas.to_vec(), u.to_vec(), alloc::vec![v; alphas.len()]);
            let model = FifModel::new(data.clone(), params)?;
            sup_distance(&grid, |x| model.eval(x, STUDY_TOL), |x| model.eval_affine(x, STUDY_TOL))
        })
        .collect()
}
