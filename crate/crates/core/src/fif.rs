//! The C¹ rational cubic spline fractal interpolation function.
//!
//! On each interval the IFS map is `w_i(x, y) = (L_i(x), alpha_i y + q_i(x))`
//! where `q_i` is a rational cubic in `theta = (x - x_1) / (x_N - x_1)`. The
//! coefficients are fixed by the Hermite conditions at both ends, so the
//! attractor interpolates `(x_i, y_i)` with slope `d_i`.
//!
//! Pointwise evaluation runs the functional equation backwards,
//! `Psi(x) = alpha_i Psi(L_i^{-1} x) + q_i(L_i^{-1} x)`, and stops once the
//! accumulated product of scaling factors times a precomputed bound on
//! `|Psi - C|` drops below the requested tolerance; the classical spline `C`
//! supplies the tail.

use alloc::vec::Vec;

use crate::analysis::ErrorBoundInputs;
use crate::error::{Error, Result};
use crate::mesh::{DataSet, Partition};
use crate::rational::RationalCubic;

pub const DEFAULT_KAPPA: f64 = 0.99;

/// Largest knot-snapping radius, relative to the narrowest interval.
const SNAP_LIMIT: f64 = 1e-4;

/// Grid resolution per interval for the sup-norm estimate of the classical spline.
const CLASSICAL_GRID: usize = 64;

/// Scaling factors and the two shape-parameter families.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsParams {
    pub alphas: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Contraction cap: `|alpha_i| <= kappa * a_i`.
    pub kappa: f64,
}

impl IfsParams {
    pub fn new(alphas: Vec<f64>, u: Vec<f64>, v: Vec<f64>) -> Self {
        IfsParams { alphas, u, v, kappa: DEFAULT_KAPPA }
    }

    /// All scaling factors zero: the classical rational cubic spline.
    pub fn classical(u: Vec<f64>, v: Vec<f64>) -> Self {
        let alphas = alloc::vec![0.0; u.len()];
        IfsParams::new(alphas, u, v)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn intervals(&self) -> usize {
        self.alphas.len()
    }

    pub fn max_abs_alpha(&self) -> f64 {
        self.alphas.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    fn validate(&self, partition: &Partition) -> Result<()> {
        let n = partition.intervals();
        for len in [self.alphas.len(), self.u.len(), self.v.len()] {
            if len != n {
                return Err(Error::LengthMismatch { expected: n, found: len });
            }
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::InvalidKappa(self.kappa));
        }
        for i in 0..n {
            let (alpha, u, v) = (self.alphas[i], self.u[i], self.v[i]);
            if !alpha.is_finite() || !u.is_finite() || !v.is_finite() {
                return Err(Error::NonFiniteValue { index: i });
            }
            let limit = self.kappa * partition.scales()[i];
            if alpha.abs() > limit {
                return Err(Error::ContractivityViolation { interval: i, alpha, limit });
            }
            if u <= 0.0 {
                return Err(Error::NonPositiveU { interval: i });
            }
            if v < 0.0 {
                return Err(Error::NegativeV { interval: i });
            }
        }
        Ok(())
    }
}

/// One point of the graph together with its slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

/// A fully specified IFS: data, parameters and the derived rational maps.
#[derive(Debug, Clone, PartialEq)]
pub struct FifModel {
    data: DataSet,
    partition: Partition,
    params: IfsParams,
    maps: Vec<RationalCubic>,
    classical: Vec<RationalCubic>,
    /// The alpha-free remainder `R_i` with `q_i = C_i∘L_i - alpha_i R_i`.
    reference: Vec<RationalCubic>,
    perturbation: f64,
    value_bound: f64,
    derivative_bound: f64,
    affine_bound: f64,
}

impl FifModel {
    pub fn new(data: DataSet, params: IfsParams) -> Result<Self> {
        let partition = Partition::new(&data);
        params.validate(&partition)?;
        let d = data.slopes_or_err()?;
        let y = data.values();
        let n = data.len();
        let (y1, yn, d1, dn) = (y[0], y[n - 1], d[0], d[n - 1]);
        let span = partition.span();
        let h = partition.widths();

        let mut maps = Vec::with_capacity(n - 1);
        let mut classical = Vec::with_capacity(n - 1);
        let mut reference = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let (a, u, v) = (params.alphas[i], params.u[i], params.v[i]);
            let w = 3.0 * u + v;
            let left = y[i] - a * y1;
            let right = y[i + 1] - a * yn;
            maps.push(RationalCubic::new(
                [
                    u * left,
                    w * left + u * h[i] * d[i] - a * u * span * d1,
                    w * right - u * h[i] * d[i + 1] + a * u * span * dn,
                    u * right,
                ],
                u,
                v,
            ));
            classical.push(RationalCubic::new(
                [
                    u * y[i],
                    w * y[i] + u * h[i] * d[i],
                    w * y[i + 1] - u * h[i] * d[i + 1],
                    u * y[i + 1],
                ],
                u,
                v,
            ));
            reference.push(RationalCubic::new(
                [u * y1, w * y1 + u * span * d1, w * yn - u * span * dn, u * yn],
                u,
                v,
            ));
        }

        let mut model = FifModel {
            data,
            partition,
            params,
            maps,
            classical,
            reference,
            perturbation: 0.0,
            value_bound: 0.0,
            derivative_bound: 0.0,
            affine_bound: 0.0,
        };
        model.perturbation = ErrorBoundInputs::from_model(&model).perturbation_bound();
        model.value_bound = model.compute_value_bound();
        model.derivative_bound = model.compute_derivative_bound();
        model.affine_bound = model.compute_affine_bound();
        Ok(model)
    }

    pub fn data(&self) -> &DataSet {
        &self.data
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn params(&self) -> &IfsParams {
        &self.params
    }

    pub fn intervals(&self) -> usize {
        self.maps.len()
    }

    pub fn derivatives(&self) -> &[f64] {
        // Presence is checked in `new`.
        self.data.derivatives().unwrap_or(&[])
    }

    /// `(U_i, V_i, W_i, Z_i)`.
    pub fn coefficients(&self, i: usize) -> [f64; 4] {
        self.maps[i].num
    }

    pub fn map_piece(&self, i: usize) -> &RationalCubic {
        &self.maps[i]
    }

    pub fn classical_piece(&self, i: usize) -> &RationalCubic {
        &self.classical[i]
    }

    /// `q_i` at the global parameter `theta`.
    pub fn eval_q(&self, i: usize, theta: f64) -> f64 {
        self.maps[i].eval(theta)
    }

    /// `dq_i/dx` at the global parameter `theta`.
    pub fn eval_q_derivative(&self, i: usize, theta: f64) -> f64 {
        self.maps[i].derivative(theta) / self.partition.span()
    }

    /// Rounding uncertainty of a backward-iterated abscissa. Points that close
    /// to a knot are indistinguishable from it: snapping there evaluates the
    /// function at a point within the input's own rounding error. Past
    /// `SNAP_LIMIT` snapping is switched off (negative slack) for the rest of
    /// the walk.
    fn next_slack(&self, slack: f64, i: usize) -> f64 {
        if slack < 0.0 {
            return slack;
        }
        let next = slack / self.partition.scales()[i] + self.partition.rounding();
        if next <= SNAP_LIMIT * self.partition.min_width() {
            next
        } else {
            -1.0
        }
    }

    fn check_domain(&self, x: f64) -> Result<usize> {
        self.partition.locate(x).ok_or(Error::OutOfDomain { x })
    }

    fn check_tol(tol: f64) -> Result<()> {
        if tol > 0.0 && tol.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidTolerance(tol))
        }
    }

    /// Classical (non-recursive) rational cubic spline `C(x)`.
    pub fn eval_classical(&self, x: f64) -> Result<f64> {
        let i = self.check_domain(x)?;
        if let Some(j) = self.partition.knot_index(x) {
            return Ok(self.data.values()[j]);
        }
        Ok(self.classical[i].eval(self.partition.local_param(i, x)))
    }

    pub fn eval_classical_derivative(&self, x: f64) -> Result<f64> {
        let i = self.check_domain(x)?;
        if let Some(j) = self.partition.knot_index(x) {
            return Ok(self.derivatives()[j]);
        }
        let t = self.partition.local_param(i, x);
        Ok(self.classical[i].derivative(t) / self.partition.widths()[i])
    }

    /// `Psi(x)` to within `tol`.
    pub fn eval(&self, x: f64, tol: f64) -> Result<f64> {
        Self::check_tol(tol)?;
        self.check_domain(x)?;
        let y = self.data.values();
        let (mut x, mut weight, mut acc, mut slack) = (x, 1.0_f64, 0.0_f64, 0.0_f64);
        loop {
            if let Some(j) = self.partition.knot_near(x, slack) {
                return Ok(acc + weight * y[j]);
            }
            let i = self.partition.locate(x).ok_or(Error::OutOfDomain { x })?;
            let t = self.partition.local_param(i, x);
            if weight.abs() * self.value_bound <= tol {
                return Ok(acc + weight * self.classical[i].eval(t));
            }
            acc += weight * self.maps[i].eval(t);
            weight *= self.params.alphas[i];
            if weight == 0.0 {
                return Ok(acc);
            }
            x = self.partition.inverse_map(i, x);
            slack = self.next_slack(slack, i);
        }
    }

    /// `Psi'(x)` to within `tol`.
    pub fn eval_derivative(&self, x: f64, tol: f64) -> Result<f64> {
        Self::check_tol(tol)?;
        self.check_domain(x)?;
        let scales = self.partition.scales();
        if let Some(i) = (0..self.intervals()).find(|&i| self.params.alphas[i].abs() >= scales[i]) {
            return Err(Error::ContractivityViolation {
                interval: i,
                alpha: self.params.alphas[i],
                limit: scales[i],
            });
        }
        let d = self.derivatives();
        let span = self.partition.span();
        let (mut x, mut weight, mut acc, mut slack) = (x, 1.0_f64, 0.0_f64, 0.0_f64);
        loop {
            if let Some(j) = self.partition.knot_near(x, slack) {
                return Ok(acc + weight * d[j]);
            }
            let i = self.partition.locate(x).ok_or(Error::OutOfDomain { x })?;
            let t = self.partition.local_param(i, x);
            if weight.abs() * self.derivative_bound <= tol {
                let c = self.classical[i].derivative(t) / self.partition.widths()[i];
                return Ok(acc + weight * c);
            }
            weight /= scales[i];
            acc += weight * self.maps[i].derivative(t) / span;
            weight *= self.params.alphas[i];
            if weight == 0.0 {
                return Ok(acc);
            }
            x = self.partition.inverse_map(i, x);
            slack = self.next_slack(slack, i);
        }
    }

    fn affine_piece(&self, i: usize, t: f64) -> f64 {
        let y = self.data.values();
        let n = y.len();
        let a = self.params.alphas[i];
        (y[i] - a * y[0]) * (1.0 - t) + (y[i + 1] - a * y[n - 1]) * t
    }

    /// The affine FIF reached as every `v_i -> infinity`.
    pub fn eval_affine(&self, x: f64, tol: f64) -> Result<f64> {
        Self::check_tol(tol)?;
        self.check_domain(x)?;
        let y = self.data.values();
        let (mut x, mut weight, mut acc, mut slack) = (x, 1.0_f64, 0.0_f64, 0.0_f64);
        loop {
            if let Some(j) = self.partition.knot_near(x, slack) {
                return Ok(acc + weight * y[j]);
            }
            let i = self.partition.locate(x).ok_or(Error::OutOfDomain { x })?;
            let t = self.partition.local_param(i, x);
            if weight.abs() * self.affine_bound <= tol {
                return Ok(acc + weight * (y[i] * (1.0 - t) + y[i + 1] * t));
            }
            acc += weight * self.affine_piece(i, t);
            weight *= self.params.alphas[i];
            if weight == 0.0 {
                return Ok(acc);
            }
            x = self.partition.inverse_map(i, x);
            slack = self.next_slack(slack, i);
        }
    }

    /// `w_i` lifted to `(x, Psi, Psi')`. Endpoints map to the exact knot triples.
    pub fn apply_map(&self, i: usize, s: &Sample) -> Sample {
        let theta = self.partition.global_param(s.x);
        if theta <= 0.0 {
            return self.knot_sample(i);
        }
        if theta >= 1.0 {
            return self.knot_sample(i + 1);
        }
        let a = self.params.alphas[i];
        let q = &self.maps[i];
        Sample {
            x: self.partition.map_param(i, theta),
            y: a * s.y + q.eval(theta),
            dy: (a * s.dy + q.derivative(theta) / self.partition.span())
                / self.partition.scales()[i],
        }
    }

    pub fn knot_sample(&self, j: usize) -> Sample {
        Sample { x: self.data.knots()[j], y: self.data.values()[j], dy: self.derivatives()[j] }
    }

    /// Second summand of the uniform error bound: an upper bound on `||C - Psi||`.
    pub fn perturbation_bound(&self) -> f64 {
        self.perturbation
    }

    /// Bound on `|Psi - C|` used to stop the pointwise recursion.
    pub fn value_bound(&self) -> f64 {
        self.value_bound
    }

    /// Bound on `|Psi' - C'|` used to stop the derivative recursion.
    pub fn derivative_bound(&self) -> f64 {
        self.derivative_bound
    }

    fn compute_value_bound(&self) -> f64 {
        let mut c_inf = 0.0_f64;
        for piece in &self.classical {
            for k in 0..=CLASSICAL_GRID {
                c_inf = c_inf.max(piece.eval(k as f64 / CLASSICAL_GRID as f64).abs());
            }
        }
        let y_inf = self.data.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        c_inf + y_inf + self.perturbation
    }

    fn compute_derivative_bound(&self) -> f64 {
        let scales = self.partition.scales();
        let ratio = (0..self.intervals())
            .map(|i| self.params.alphas[i].abs() / scales[i])
            .fold(0.0_f64, f64::max);
        if ratio == 0.0 {
            return 0.0;
        }
        let widths = self.partition.widths();
        let c = (0..self.intervals())
            .map(|i| self.classical[i].derivative_sup_bound() / widths[i])
            .fold(0.0_f64, f64::max);
        let r = self
            .reference
            .iter()
            .map(|p| p.derivative_sup_bound() / self.partition.span())
            .fold(0.0_f64, f64::max);
        ratio / (1.0 - ratio) * (c + r)
    }

    fn compute_affine_bound(&self) -> f64 {
        let alpha = self.params.max_abs_alpha();
        let y = self.data.values();
        let n = y.len();
        let y_inf = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        alpha / (1.0 - alpha) * (y_inf + y[0].abs().max(y[n - 1].abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn d1() -> DataSet {
        DataSet::new(
            vec![0.0, 0.4, 0.75, 1.0],
            vec![0.1, 1.0, 2.0, 5.0],
            Some(vec![-1.5238, 1.5238, 8.1905, 15.8095]),
        )
        .unwrap()
    }

    fn table_b() -> IfsParams {
        IfsParams::new(vec![0.2, 0.31, 0.23], vec![0.1; 3], vec![0.08, 0.1, 0.1])
    }

    #[test]
    fn classical_coefficients_collapse() {
        let m = FifModel::new(d1(), IfsParams::classical(vec![0.1; 3], vec![0.08, 0.1, 0.1]))
            .unwrap();
        let [u, _, _, z] = m.coefficients(0);
        assert!((u - 0.01).abs() < 1e-15);
        assert!((z - 0.1).abs() < 1e-15);
        assert_eq!(m.map_piece(1), m.classical_piece(1));
    }

    #[test]
    fn table_b_second_interval_u() {
        let m = FifModel::new(d1(), table_b()).unwrap();
        let expect = 0.1 * (1.0 - 0.31 * 0.1);
        assert!((m.coefficients(1)[0] - expect).abs() < 1e-15);
        assert!((expect - 0.0969).abs() < 1e-15);
    }

    #[test]
    fn parameter_errors() {
        let mut p = table_b();
        p.alphas[0] = 0.5;
        assert!(matches!(
            FifModel::new(d1(), p),
            Err(Error::ContractivityViolation { interval: 0, .. })
        ));
        let mut p = table_b();
        p.u[2] = 0.0;
        assert_eq!(FifModel::new(d1(), p), Err(Error::NonPositiveU { interval: 2 }));
        let mut p = table_b();
        p.v[1] = -1e-3;
        assert_eq!(FifModel::new(d1(), p), Err(Error::NegativeV { interval: 1 }));
        assert_eq!(
            FifModel::new(d1(), table_b().with_kappa(1.0)),
            Err(Error::InvalidKappa(1.0))
        );
        let bare = DataSet::new(vec![0.0, 1.0, 2.0], vec![1.0; 3], None).unwrap();
        assert_eq!(
            FifModel::new(bare, IfsParams::classical(vec![1.0; 2], vec![0.0; 2])),
            Err(Error::MissingDerivatives)
        );
    }

    #[test]
    fn q_endpoints_and_midpoint() {
        let m = FifModel::new(d1(), table_b()).unwrap();
        for i in 0..3 {
            let y = m.data().values();
            let a = m.params().alphas[i];
            assert!((m.eval_q(i, 0.0) - (y[i] - a * y[0])).abs() < 1e-14);
            assert!((m.eval_q(i, 1.0) - (y[i + 1] - a * y[3])).abs() < 1e-14);
        }
        let c = FifModel::new(d1(), IfsParams::classical(vec![0.1; 3], vec![0.08, 0.1, 0.1]))
            .unwrap();
        let [u, v, w, z] = c.coefficients(0);
        let expect = (u + v + w + z) / 8.0 / (0.1 + 0.08 / 4.0);
        assert!((c.eval_q(0, 0.5) - expect).abs() < 1e-15);
    }

    #[test]
    fn q_derivative_at_left_end() {
        let m = FifModel::new(d1(), table_b()).unwrap();
        for i in 0..3 {
            let [u_c, v_c, _, _] = m.coefficients(i);
            let (u, v) = (m.params().u[i], m.params().v[i]);
            let expect = (u * v_c - (3.0 * u + v) * u_c) / (u * u * m.partition().span());
            assert!((m.eval_q_derivative(i, 0.0) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_data_has_flat_q() {
        let data = DataSet::new(vec![0.0, 1.0, 3.0], vec![2.0; 3], Some(vec![0.0; 3])).unwrap();
        let m = FifModel::new(data, IfsParams::classical(vec![0.7, 1.3], vec![0.2, 5.0])).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            assert!(m.eval_q_derivative(0, t).abs() < 1e-14);
            assert!(m.eval_q_derivative(1, t).abs() < 1e-14);
        }
    }

    #[test]
    fn eval_hits_knots_exactly() {
        let m = FifModel::new(d1(), table_b()).unwrap();
        for j in 0..4 {
            let x = m.data().knots()[j];
            assert_eq!(m.eval(x, 1.0).unwrap(), m.data().values()[j]);
            assert_eq!(m.eval_derivative(x, 1.0).unwrap(), m.derivatives()[j]);
        }
    }

    #[test]
    fn zero_alpha_is_classical_bit_for_bit() {
        let m = FifModel::new(d1(), IfsParams::classical(vec![0.1; 3], vec![0.08, 0.1, 0.1]))
            .unwrap();
        for k in 0..=200 {
            let x = k as f64 / 200.0;
            assert_eq!(m.eval(x, 1e-12).unwrap(), m.eval_classical(x).unwrap());
        }
    }

    #[test]
    fn classical_regression_at_point_two() {
        // Exact rational value from a power-basis expansion: 25381 / 60000.
        let m = FifModel::new(d1(), IfsParams::classical(vec![0.1; 3], vec![0.08, 0.1, 0.1]))
            .unwrap();
        assert!((m.eval_classical(0.2).unwrap() - 0.42301666666666665).abs() < 1e-14);
    }

    #[test]
    fn affine_regression_at_half() {
        // Depth-30 recursion with a piecewise-linear base.
        let m = FifModel::new(d1(), table_b()).unwrap();
        assert!((m.eval_affine(0.5, 1e-13).unwrap() - 0.9227522091268179).abs() < 1e-12);
    }

    #[test]
    fn affine_with_zero_alpha_is_piecewise_linear() {
        let m = FifModel::new(d1(), IfsParams::classical(vec![0.1; 3], vec![0.08, 0.1, 0.1]))
            .unwrap();
        assert!((m.eval_affine(0.2, 1e-9).unwrap() - 0.55).abs() < 1e-15);
        assert!((m.eval_affine(0.875, 1e-9).unwrap() - 3.5).abs() < 1e-14);
    }

    #[test]
    fn domain_and_tolerance_errors() {
        let m = FifModel::new(d1(), table_b()).unwrap();
        assert_eq!(m.eval(1.5, 1e-6), Err(Error::OutOfDomain { x: 1.5 }));
        assert_eq!(m.eval_derivative(-0.1, 1e-6), Err(Error::OutOfDomain { x: -0.1 }));
        assert_eq!(m.eval_classical(2.0), Err(Error::OutOfDomain { x: 2.0 }));
        assert_eq!(m.eval(0.5, 0.0), Err(Error::InvalidTolerance(0.0)));
        assert!(m.eval_affine(0.5, f64::NAN).is_err());
    }

    #[test]
    fn apply_map_keeps_knots_exact() {
        let m = FifModel::new(d1(), table_b()).unwrap();
        for i in 0..3 {
            assert_eq!(m.apply_map(i, &m.knot_sample(0)), m.knot_sample(i));
            assert_eq!(m.apply_map(i, &m.knot_sample(3)), m.knot_sample(i + 1));
        }
    }

    #[test]
    fn perturbation_bound_regression() {
        // Direct rational evaluation of the bound for these parameters.
        let m = FifModel::new(d1(), table_b()).unwrap();
        assert!((m.perturbation_bound() - 9.559578200483092).abs() < 1e-12);
    }
}
