//! The rational cubic piece shared by the fractal maps, the classical spline
//! and the constraint checks.

/// `P(t) / Q(t)` on `t in [0, 1]` with
/// `P(t) = c0 (1-t)^3 + c1 (1-t)^2 t + c2 (1-t) t^2 + c3 t^3` and
/// `Q(t) = u + v t (1-t)`.
///
/// The middle coefficients carry no binomial factor, so the Bernstein control
/// points of `P` are `(c0, c1/3, c2/3, c3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalCubic {
    pub num: [f64; 4],
    pub u: f64,
    pub v: f64,
}

impl RationalCubic {
    pub fn new(num: [f64; 4], u: f64, v: f64) -> Self {
        RationalCubic { num, u, v }
    }

    fn control_points(&self) -> [f64; 4] {
        [self.num[0], self.num[1] / 3.0, self.num[2] / 3.0, self.num[3]]
    }

    /// Numerator by de Casteljau's convex combinations.
    pub fn numerator(&self, t: f64) -> f64 {
        let s = 1.0 - t;
        let [b0, b1, b2, b3] = self.control_points();
        let c0 = s * b0 + t * b1;
        let c1 = s * b1 + t * b2;
        let c2 = s * b2 + t * b3;
        let e0 = s * c0 + t * c1;
        let e1 = s * c1 + t * c2;
        s * e0 + t * e1
    }

    pub fn numerator_derivative(&self, t: f64) -> f64 {
        let s = 1.0 - t;
        let [b0, b1, b2, b3] = self.control_points();
        let (d0, d1, d2) = (b1 - b0, b2 - b1, b3 - b2);
        let e0 = s * d0 + t * d1;
        let e1 = s * d1 + t * d2;
        3.0 * (s * e0 + t * e1)
    }

    pub fn denominator(&self, t: f64) -> f64 {
        self.u + self.v * t * (1.0 - t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.numerator(t) / self.denominator(t)
    }

    /// Derivative with respect to `t`.
    pub fn derivative(&self, t: f64) -> f64 {
        let q = self.denominator(t);
        let dq = self.v * (1.0 - 2.0 * t);
        (self.numerator_derivative(t) * q - self.numerator(t) * dq) / (q * q)
    }

    /// Upper bound on `sup |P/Q|` over `[0, 1]` from the Bernstein hull and
    /// `Q >= u` (valid for `u > 0`, `v >= 0`).
    pub fn sup_bound(&self) -> f64 {
        let hull = self.control_points().iter().fold(0.0_f64, |m, b| m.max(b.abs()));
        hull / self.u
    }

    /// Upper bound on `sup |d(P/Q)/dt|` over `[0, 1]`.
    pub fn derivative_sup_bound(&self) -> f64 {
        let b = self.control_points();
        let hull = b.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let diff = (0..3).fold(0.0_f64, |m, k| m.max((b[k + 1] - b[k]).abs()));
        3.0 * diff / self.u + hull * self.v / (self.u * self.u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RationalCubic {
        RationalCubic::new([0.3, -1.2, 2.5, 0.7], 0.4, 1.7)
    }

    fn expanded(r: &RationalCubic, t: f64) -> f64 {
        let s = 1.0 - t;
        let p = r.num[0] * s * s * s
            + r.num[1] * s * s * t
            + r.num[2] * s * t * t
            + r.num[3] * t * t * t;
        p / (r.u + r.v * t * s)
    }

    #[test]
    fn de_casteljau_matches_expanded_form() {
        let r = sample();
        for k in 0..=50 {
            let t = k as f64 / 50.0;
            assert!((r.eval(t) - expanded(&r, t)).abs() < 1e-14);
        }
    }

    #[test]
    fn endpoints() {
        let r = sample();
        assert_eq!(r.eval(0.0), 0.3 / 0.4);
        assert_eq!(r.eval(1.0), 0.7 / 0.4);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let r = sample();
        let step = 1e-6;
        for k in 1..50 {
            let t = k as f64 / 50.0;
            let fd = (expanded(&r, t + step) - expanded(&r, t - step)) / (2.0 * step);
            let d = r.derivative(t);
            assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "t={t}: {d} vs {fd}");
        }
    }

    #[test]
    fn bounds_dominate_grid() {
        let r = sample();
        let (vb, db) = (r.sup_bound(), r.derivative_sup_bound());
        for k in 0..=1000 {
            let t = k as f64 / 1000.0;
            assert!(r.eval(t).abs() <= vb);
            assert!(r.derivative(t).abs() <= db);
        }
    }
}
