use alloc::vec::Vec;
use core::fmt;

use super::{Constraint, DENOMINATOR_EPS};
use crate::error::{Error, Result};
use crate::mesh::{DataSet, Partition};

/// `p - alpha * q`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Linear {
    p: f64,
    q: f64,
}

impl Linear {
    fn at(self, alpha: f64) -> f64 {
        self.p - alpha * self.q
    }

    /// Vanishes for every alpha (e.g. a data value sitting on the rectangle edge).
    fn is_identically_zero(self) -> bool {
        self.p == 0.0 && self.q == 0.0
    }

    /// Supremum of alpha >= 0 keeping `p - alpha q > 0`.
    fn upper_limit(self) -> f64 {
        if self.q > 0.0 {
            self.p / self.q
        } else {
            f64::INFINITY
        }
    }

    /// Infimum of alpha <= 0 keeping `p - alpha q > 0`.
    fn lower_limit(self) -> f64 {
        if self.q < 0.0 {
            self.p / self.q
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// One end of the transformed cubic: outer coefficient `u g`, inner
/// coefficient `v g + u n`.
#[derive(Debug, Clone, Copy)]
struct Side {
    g: Linear,
    n: Linear,
    label: ThresholdLabel,
}

/// The left and right ends of one interval's cubic.
#[derive(Debug, Clone, Copy)]
struct SidePair {
    left: Side,
    right: Side,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    /// `alpha y + q >= lower` for `alpha >= 0`.
    Lower(f64),
    /// `alpha y + q <= upper` for `alpha >= 0`.
    Upper(f64),
    /// `alpha upper + q >= lower` for `alpha < 0`.
    LowerNeg(f64, f64),
    /// `alpha lower + q <= upper` for `alpha < 0`.
    UpperNeg(f64, f64),
    /// Above `t = slope x + intercept` for `alpha >= 0`.
    Line(f64, f64),
}

/// Data, derivatives and partition flattened for the threshold formulas.
#[derive(Debug, Clone, PartialEq)]
struct Frame {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    h: Vec<f64>,
    a: Vec<f64>,
    span: f64,
}

impl Frame {
    fn new(data: &DataSet) -> Result<Self> {
        let d = data.slopes_or_err()?.to_vec();
        let part = Partition::new(data);
        Ok(Frame {
            x: data.knots().to_vec(),
            y: data.values().to_vec(),
            d,
            h: part.widths().to_vec(),
            a: part.scales().to_vec(),
            span: part.span(),
        })
    }

    fn last(&self) -> usize {
        self.y.len() - 1
    }

    fn sides(&self, i: usize, family: Family) -> SidePair {
        let (y, d, h, s) = (&self.y, &self.d, self.h[i], self.span);
        let last = self.last();
        let (y1, yn, d1, dn) = (y[0], y[last], d[0], d[last]);
        let (yl, yr, dl, dr) = (y[i], y[i + 1], d[i], d[i + 1]);
        let pair = |gl: Linear, nl: Linear, gr: Linear, nr: Linear, labels: (ThresholdLabel, ThresholdLabel)| SidePair {
            left: Side { g: gl, n: nl, label: labels.0 },
            right: Side { g: gr, n: nr, label: labels.1 },
        };
        use ThresholdLabel::*;
        match family {
            Family::Lower(c) => pair(
                Linear { p: yl - c, q: y1 - c },
                Linear { p: 3.0 * (yl - c) + h * dl, q: 3.0 * (y1 - c) + s * d1 },
                Linear { p: yr - c, q: yn - c },
                Linear { p: 3.0 * (yr - c) - h * dr, q: 3.0 * (yn - c) - s * dn },
                (V1, V2),
            ),
            Family::Upper(u) => pair(
                Linear { p: u - yl, q: u - y1 },
                Linear { p: 3.0 * (u - yl) - h * dl, q: 3.0 * (u - y1) - s * d1 },
                Linear { p: u - yr, q: u - yn },
                Linear { p: 3.0 * (u - yr) + h * dr, q: 3.0 * (u - yn) + s * dn },
                (V3, V4),
            ),
            Family::LowerNeg(c, u) => pair(
                Linear { p: yl - c, q: y1 - u },
                Linear { p: 3.0 * (yl - c) + h * dl, q: 3.0 * (y1 - u) + s * d1 },
                Linear { p: yr - c, q: yn - u },
                Linear { p: 3.0 * (yr - c) - h * dr, q: 3.0 * (yn - u) - s * dn },
                (V5, V6),
            ),
            Family::UpperNeg(c, u) => pair(
                Linear { p: u - yl, q: c - y1 },
                Linear { p: 3.0 * (u - yl) - h * dl, q: 3.0 * (c - y1) - s * d1 },
                Linear { p: u - yr, q: c - yn },
                Linear { p: 3.0 * (u - yr) + h * dr, q: 3.0 * (c - yn) + s * dn },
                (V7, V8),
            ),
            Family::Line(m, k) => {
                let t = |j: usize| m * self.x[j] + k;
                let (tl, tr, t1, tn) = (t(i), t(i + 1), t(0), t(last));
                pair(
                    Linear { p: yl - tl, q: y1 - t1 },
                    Linear {
                        p: 2.0 * (yl - tl) + (yl - tr) + h * dl,
                        q: 2.0 * (y1 - t1) + (y1 - tn) + s * d1,
                    },
                    Linear { p: yr - tr, q: yn - tn },
                    Linear {
                        p: (yr - tl) + 2.0 * (yr - tr) - h * dr,
                        q: (yn - t1) + 2.0 * (yn - tn) - s * dn,
                    },
                    (V9, V10),
                )
            }
        }
    }
}

/// Names the individual lower thresholds on `v_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThresholdLabel {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
    V10,
}

impl ThresholdLabel {
    pub fn as_str(self) -> &'static str {
        use ThresholdLabel::*;
        match self {
            V1 => "v1",
            V2 => "v2",
            V3 => "v3",
            V4 => "v4",
            V5 => "v5",
            V6 => "v6",
            V7 => "v7",
            V8 => "v8",
            V9 => "v9",
            V10 => "v10",
        }
    }
}

impl fmt::Display for ThresholdLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A lower bound on `v_i`. `-inf` imposes nothing; `+inf` means no `v_i`
/// satisfies the inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub label: ThresholdLabel,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSet {
    pub entries: Vec<Threshold>,
}

impl ThresholdSet {
    /// `max{0, entries}`.
    pub fn required(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, t| m.max(t.value))
    }

    /// Entry attaining the maximum, or `None` when the floor at zero binds.
    pub fn binding(&self) -> Option<ThresholdLabel> {
        let req = self.required();
        if req <= 0.0 {
            return None;
        }
        self.entries.iter().find(|t| t.value == req).map(|t| t.label)
    }

    pub fn is_feasible(&self) -> bool {
        self.required().is_finite()
    }

    pub fn get(&self, label: ThresholdLabel) -> Option<f64> {
        self.entries.iter().find(|t| t.label == label).map(|t| t.value)
    }
}

/// Admissible scaling factors `lo (<=|<) alpha < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
}

impl AlphaInterval {
    /// Membership with relative slack on the open ends.
    pub fn contains_with_slack(&self, alpha: f64, slack: f64) -> bool {
        let below_hi = alpha <= self.hi * (1.0 - slack) && alpha < self.hi;
        let above_lo = if self.lo_closed {
            alpha >= self.lo
        } else {
            alpha >= self.lo * (1.0 - slack) && alpha > self.lo
        };
        below_hi && above_lo
    }

    /// Signed distance to the nearer end; negative outside.
    pub fn margin(&self, alpha: f64) -> f64 {
        (self.hi - alpha).min(alpha - self.lo)
    }
}

/// Admissible alpha intervals per interval plus threshold evaluation at a
/// queried alpha.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    constraint: Constraint,
    frame: Frame,
    u: Vec<f64>,
    intervals: Vec<AlphaInterval>,
}

impl BoundsReport {
    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn alpha_intervals(&self) -> &[AlphaInterval] {
        &self.intervals
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    fn families(&self, alpha: f64) -> (Family, Option<Family>) {
        match self.constraint {
            Constraint::Positivity => (Family::Lower(0.0), None),
            Constraint::Rectangle { lower, upper } if alpha >= 0.0 => {
                (Family::Lower(lower), Some(Family::Upper(upper)))
            }
            Constraint::Rectangle { lower, upper } => {
                (Family::LowerNeg(lower, upper), Some(Family::UpperNeg(lower, upper)))
            }
            // Below-line frames are stored reflected.
            Constraint::AboveLine { slope, intercept } => (Family::Line(slope, intercept), None),
            Constraint::BelowLine { slope, intercept } => {
                (Family::Line(-slope, -intercept), None)
            }
        }
    }

    /// Individual thresholds on `v_i` at `alpha` using the report's `u_i`.
    pub fn thresholds(&self, i: usize, alpha: f64) -> Result<ThresholdSet> {
        self.thresholds_with_u(i, alpha, self.u[i])
    }

    pub fn thresholds_with_u(&self, i: usize, alpha: f64, u: f64) -> Result<ThresholdSet> {
        let (first, second) = self.families(alpha);
        let mut entries = Vec::with_capacity(4);
        for family in core::iter::once(first).chain(second) {
            let pair = self.frame.sides(i, family);
            for side in [pair.left, pair.right] {
                entries.push(Threshold { label: side.label, value: side_threshold(side, alpha, u, i)? });
            }
        }
        Ok(ThresholdSet { entries })
    }

    /// Coefficients `(U*, V*, W*, Z*)` of the transformed cubic for
    /// one-sided families (positivity and lines); `None` for rectangles.
    pub fn transformed_cubic(&self, i: usize, alpha: f64, u: f64, v: f64) -> Option<[f64; 4]> {
        if let Constraint::Rectangle { .. } = self.constraint {
            return None;
        }
        let (family, _) = self.families(alpha);
        let SidePair { left, right } = self.frame.sides(i, family);
        let (gl, gr) = (left.g.at(alpha), right.g.at(alpha));
        Some([u * gl, v * gl + u * left.n.at(alpha), v * gr + u * right.n.at(alpha), u * gr])
    }
}

fn side_threshold(side: Side, alpha: f64, u: f64, interval: usize) -> Result<f64> {
    if side.g.is_identically_zero() {
        // Inner coefficient reduces to u n, independent of v.
        return Ok(if side.n.at(alpha) >= 0.0 { f64::NEG_INFINITY } else { f64::INFINITY });
    }
    let g = side.g.at(alpha);
    if g <= DENOMINATOR_EPS {
        return Err(Error::AlphaOnBoundary { interval });
    }
    Ok(-u * side.n.at(alpha) / g)
}

fn check_u(u: &[f64], intervals: usize) -> Result<()> {
    if u.len() != intervals {
        return Err(Error::LengthMismatch { expected: intervals, found: u.len() });
    }
    match u.iter().position(|&v| !(v > 0.0) || !v.is_finite()) {
        Some(interval) => Err(Error::NonPositiveU { interval }),
        None => Ok(()),
    }
}

/// `[0, min{a_i, y_i / y_1, y_{i+1} / y_N})` per interval.
pub fn positivity_alpha_bounds(data: &DataSet) -> Result<Vec<AlphaInterval>> {
    Constraint::Positivity.check_data(data)?;
    let y = data.values();
    let last = y.len() - 1;
    let part = Partition::new(data);
    Ok((0..data.intervals())
        .map(|i| {
            let left = Linear { p: y[i], q: y[0] }.upper_limit();
            let right = Linear { p: y[i + 1], q: y[last] }.upper_limit();
            AlphaInterval { lo: 0.0, hi: part.scales()[i].min(left).min(right), lo_closed: true }
        })
        .collect())
}

/// Lower bound on `v_i` for positivity at the given `alpha_i` and `u_i`.
pub fn positivity_v_threshold(data: &DataSet, i: usize, alpha: f64, u: f64) -> Result<f64> {
    Constraint::Positivity.check_data(data)?;
    if !(u > 0.0) {
        return Err(Error::NonPositiveU { interval: i });
    }
    let frame = Frame::new(data)?;
    let pair = frame.sides(i, Family::Lower(0.0));
    let left = side_threshold(pair.left, alpha, u, i)?;
    let right = side_threshold(pair.right, alpha, u, i)?;
    Ok(left.max(right).max(0.0))
}

fn one_sided_report(
    data: &DataSet,
    constraint: Constraint,
    family: Family,
    u: &[f64],
) -> Result<BoundsReport> {
    let frame = Frame::new(data)?;
    check_u(u, data.intervals())?;
    let intervals = (0..data.intervals())
        .map(|i| {
            let pair = frame.sides(i, family);
            let hi = frame.a[i].min(pair.left.g.upper_limit()).min(pair.right.g.upper_limit());
            AlphaInterval { lo: 0.0, hi, lo_closed: true }
        })
        .collect();
    Ok(BoundsReport { constraint, frame, u: u.to_vec(), intervals })
}

/// Positivity bounds with thresholds.
pub fn positivity_bounds(data: &DataSet, u: &[f64]) -> Result<BoundsReport> {
    Constraint::Positivity.check_data(data)?;
    one_sided_report(data, Constraint::Positivity, Family::Lower(0.0), u)
}

/// Containment in `[x_1, x_N] x [lower, upper]`, both signs of alpha.
pub fn rectangle_bounds(data: &DataSet, lower: f64, upper: f64, u: &[f64]) -> Result<BoundsReport> {
    let constraint = Constraint::Rectangle { lower, upper };
    constraint.check_data(data)?;
    let frame = Frame::new(data)?;
    check_u(u, data.intervals())?;
    let intervals = (0..data.intervals())
        .map(|i| {
            let mut hi = frame.a[i];
            for family in [Family::Lower(lower), Family::Upper(upper)] {
                let p = frame.sides(i, family);
                hi = hi.min(p.left.g.upper_limit()).min(p.right.g.upper_limit());
            }
            let mut lo = -frame.a[i];
            for family in [Family::LowerNeg(lower, upper), Family::UpperNeg(lower, upper)] {
                let p = frame.sides(i, family);
                lo = lo.max(p.left.g.lower_limit()).max(p.right.g.lower_limit());
            }
            AlphaInterval { lo, hi, lo_closed: lo >= 0.0 }
        })
        .collect();
    Ok(BoundsReport { constraint, frame, u: u.to_vec(), intervals })
}

/// Graph above `t = slope x + intercept`.
pub fn above_line_bounds(
    data: &DataSet,
    slope: f64,
    intercept: f64,
    u: &[f64],
) -> Result<BoundsReport> {
    let constraint = Constraint::AboveLine { slope, intercept };
    constraint.check_data(data)?;
    one_sided_report(data, constraint, Family::Line(slope, intercept), u)
}

/// Graph below the line, by reflection `y -> -y` onto the above-line case.
pub fn below_line_bounds(
    data: &DataSet,
    slope: f64,
    intercept: f64,
    u: &[f64],
) -> Result<BoundsReport> {
    let constraint = Constraint::BelowLine { slope, intercept };
    constraint.check_data(data)?;
    let mirrored = data.reflected();
    one_sided_report(&mirrored, constraint, Family::Line(-slope, -intercept), u)
}

/// Dispatches on the constraint family.
pub fn bounds_for(data: &DataSet, constraint: Constraint, u: &[f64]) -> Result<BoundsReport> {
    match constraint {
        Constraint::Positivity => positivity_bounds(data, u),
        Constraint::Rectangle { lower, upper } => rectangle_bounds(data, lower, upper, u),
        Constraint::AboveLine { slope, intercept } => above_line_bounds(data, slope, intercept, u),
        Constraint::BelowLine { slope, intercept } => below_line_bounds(data, slope, intercept, u),
    }
}
