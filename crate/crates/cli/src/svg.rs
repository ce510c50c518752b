//! Fixed-size SVG export of a sampled curve.

use std::fmt::Write as _;

use fractal_spline_core::{Constraint, DataSet, Sample};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn frame(samples: &[Sample], data: &DataSet, overlay: Option<Constraint>) -> Frame {
    let x0 = data.knots()[0];
    let x1 = data.knots()[data.len() - 1];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let ys = samples.iter().map(|s| s.y).chain(data.values().iter().copied());
    let extra: Vec<f64> = match overlay {
        Some(Constraint::Rectangle { lower, upper }) => vec![lower, upper],
        Some(Constraint::AboveLine { slope, intercept } | Constraint::BelowLine { slope, intercept }) => {
            vec![slope * x0 + intercept, slope * x1 + intercept]
        }
        Some(Constraint::Positivity) => vec![0.0],
        None => Vec::new(),
    };
    for y in ys.chain(extra) {
        lo = lo.min(y);
        hi = hi.max(y);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = 0.05 * (hi - lo);
    Frame { x0, x1, y0: lo - pad, y1: hi + pad }
}

/// Keeps the lowest and highest sample in every pixel column, preserving
/// extrema while bounding the output size.
fn decimate(samples: &[Sample], f: &Frame) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut column = None;
    let (mut lo, mut hi) = (None::<(f64, f64)>, None::<(f64, f64)>);
    let flush = |lo: Option<(f64, f64)>, hi: Option<(f64, f64)>, out: &mut Vec<(f64, f64)>| {
        if let (Some(a), Some(b)) = (lo, hi) {
            if a == b {
                out.push(a);
            } else if a.0 <= b.0 {
                out.extend([a, b]);
            } else {
                out.extend([b, a]);
            }
        }
    };
    for s in samples {
        let p = (f.px(s.x), f.py(s.y));
        let c = p.0.floor() as i64;
        if column != Some(c) {
            flush(lo, hi, &mut out);
            column = Some(c);
            lo = Some(p);
            hi = Some(p);
            continue;
        }
        // Screen y grows downwards.
        if p.1 > lo.unwrap().1 {
            lo = Some(p);
        }
        if p.1 < hi.unwrap().1 {
            hi = Some(p);
        }
    }
    flush(lo, hi, &mut out);
    out
}

/// Renders `samples` (sorted by `x`) with the data points as circles and an
/// optional constraint overlay.
pub fn render(samples: &[Sample], data: &DataSet, overlay: Option<Constraint>) -> String {
    let f = frame(samples, data, overlay);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (bx0, by0, bx1, by1) = (LEFT, TOP, WIDTH - RIGHT, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<rect x="{bx0}" y="{by0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        bx1 - bx0,
        by1 - by0
    );
    for k in 0..TICKS {
        let t = k as f64 / (TICKS - 1) as f64;
        let xv = f.x0 + t * (f.x1 - f.x0);
        let yv = f.y0 + t * (f.y1 - f.y0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{by1}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, by1 + 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.2}</text>"#,
            by1 + 20.0
        );
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{bx0}" y2="{py:.2}" stroke="black"/>"#, bx0 - 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.2}</text>"#,
            bx0 - 8.0,
            py + 4.0
        );
    }
    match overlay {
        Some(Constraint::Rectangle { lower, upper }) => {
            let (ya, yb) = (f.py(upper), f.py(lower));
            let _ = writeln!(
                s,
                r#"<rect x="{bx0}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="gray" stroke-dasharray="6 4"/>"#,
                bx1 - bx0,
                yb - ya
            );
        }
        Some(Constraint::AboveLine { slope, intercept } | Constraint::BelowLine { slope, intercept }) => {
            let _ = writeln!(
                s,
                r#"<line x1="{bx0}" y1="{:.2}" x2="{bx1}" y2="{:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
                f.py(slope * f.x0 + intercept),
                f.py(slope * f.x1 + intercept)
            );
        }
        Some(Constraint::Positivity) => {
            let y = f.py(0.0);
            let _ = writeln!(s, r#"<line x1="{bx0}" y1="{y:.2}" x2="{bx1}" y2="{y:.2}" stroke="gray" stroke-dasharray="6 4"/>"#);
        }
        None => {}
    }
    s.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points=""#);
    for (k, (px, py)) in decimate(samples, &f).into_iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{px:.2},{py:.2}");
    }
    s.push_str("\"/>\n");
    for (x, y) in data.knots().iter().zip(data.values()) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="white" stroke="crimson" stroke-width="1.5"/>"#,
            f.px(*x),
            f.py(*y)
        );
    }
    s.push_str("</svg>\n");
    s
}
