//! End-to-end acceptance checks. Prints one `criterion N: PASS|FAIL: detail`
//! line per item and fails if any item fails.

use std::path::Path;
use std::time::Instant;

use fractal_spline_core::analysis::{empirical_margin, perturbation_bound, sampled_classical_distance, tension_study};
use fractal_spline_core::constraint::{
    auto_select, bounds_for, cubic_nonneg_oracle, validate, SelectionPolicy,
};
use fractal_spline_core::{Constraint, DataSet, FifModel, IfsParams};
use fractal_spline_tools::io::{model_to_json, parse_model};
use fractal_spline_tools::scenario::{write_bundle, DataRef, Expectation, Scenario, SCENARIOS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const DEPTH: usize = 10;
const TRIALS: usize = 50;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn models() -> Vec<(&'static Scenario, FifModel)> {
    SCENARIOS.iter().map(|s| (s, s.model().unwrap())).collect()
}

fn interpolation() -> Verdict {
    let mut worst = 0.0_f64;
    for (_, m) in models() {
        let d = m.data().derivatives().unwrap();
        for (j, (&x, &y)) in m.data().knots().iter().zip(m.data().values()).enumerate() {
            worst = worst.max((m.eval(x, 1e-13).unwrap() - y).abs());
            worst = worst.max((m.eval_derivative(x, 1e-13).unwrap() - d[j]).abs());
        }
    }
    verdict(worst <= TOL, format!("worst knot residual {worst:.3e} over 9 scenarios"))
}

fn self_reference() -> Verdict {
    let (mut value, mut slope) = (0.0_f64, 0.0_f64);
    for (_, m) in models() {
        let part = m.partition();
        let alphas = &m.params().alphas;
        for s in m.sample_attractor(8).unwrap().samples() {
            let theta = part.global_param(s.x);
            let psi = m.eval(s.x, 1e-13).unwrap();
            let dpsi = m.eval_derivative(s.x, 1e-12).unwrap();
            for i in 0..m.intervals() {
                let lx = part.map(i, s.x);
                let lhs = m.eval(lx, 1e-13).unwrap();
                value = value.max((lhs - alphas[i] * psi - m.eval_q(i, theta)).abs());
                let dl = part.scales()[i] * m.eval_derivative(lx, 1e-12).unwrap();
                slope = slope.max((dl - alphas[i] * dpsi - m.eval_q_derivative(i, theta)).abs());
            }
        }
    }
    verdict(
        value <= 1e-9 && slope <= 1e-8,
        format!("value residual {value:.3e} (limit 1e-9), derivative residual {slope:.3e} (limit 1e-8)"),
    )
}

/// Closed-form classical rational cubic on the interval containing `x`.
fn classical(data: &DataSet, u: &[f64], v: &[f64], x: f64) -> f64 {
    let (xs, y, d) = (data.knots(), data.values(), data.derivatives().unwrap());
    let i = (0..xs.len() - 1).rfind(|&i| xs[i] <= x).unwrap_or(0).min(xs.len() - 2);
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let s = 1.0 - t;
    let p = u[i] * y[i] * s * s * s
        + ((3.0 * u[i] + v[i]) * y[i] + u[i] * h * d[i]) * s * s * t
        + ((3.0 * u[i] + v[i]) * y[i + 1] - u[i] * h * d[i + 1]) * s * t * t
        + u[i] * y[i + 1] * t * t * t;
    p / (u[i] + v[i] * t * s)
}

fn classical_limit() -> Verdict {
    let mut worst = 0.0_f64;
    for (s, m) in models().into_iter().filter(|(s, _)| s.alphas == [0.0; 3]) {
        let part = m.partition();
        for k in 0..1000 {
            let x = (part.first() + part.span() * k as f64 / 999.0).min(part.last());
            let c = classical(m.data(), &s.u, &s.v, x);
            worst = worst.max((m.eval(x, 1e-13).unwrap() - c).abs());
        }
    }
    let data = DataRef::Positive.dataset();
    let hermite = FifModel::new(data.clone(), IfsParams::classical(vec![1.0; 3], vec![0.0; 3])).unwrap();
    let (xs, y, d) = (data.knots(), data.values(), data.derivatives().unwrap());
    let mut worst_h = 0.0_f64;
    for k in 0..1000 {
        let x = k as f64 / 999.0;
        let i = hermite.partition().locate(x).unwrap();
        let h = xs[i + 1] - xs[i];
        let t = (x - xs[i]) / h;
        let e = (2.0 * t * t * t - 3.0 * t * t + 1.0) * y[i]
            + (t * t * t - 2.0 * t * t + t) * h * d[i]
            + (-2.0 * t * t * t + 3.0 * t * t) * y[i + 1]
            + (t * t * t - t * t) * h * d[i + 1];
        worst_h = worst_h.max((hermite.eval(x, 1e-14).unwrap() - e).abs());
    }
    verdict(
        worst <= 1e-10 && worst_h <= 1e-12,
        format!("fig1c/e/i vs closed form {worst:.3e} (limit 1e-10), cubic Hermite {worst_h:.3e} (limit 1e-12)"),
    )
}

fn constraint_reproduction() -> Verdict {
    let mut failed = Vec::new();
    let mut parts = Vec::new();
    for (s, m) in models() {
        let r = empirical_margin(&m, s.constraint, DEPTH).unwrap();
        let ok = s.expect.matches(&r);
        let sign = match s.expect {
            Expectation::Violates => "< 0",
            Expectation::Satisfies => ">= -1e-9",
        };
        parts.push(format!("{} {:+.4e}", s.name, r.margin));
        if !ok {
            failed.push(format!("{} (needs {sign})", s.name));
        }
    }
    let detail = if failed.is_empty() {
        format!("margins {}", parts.join(", "))
    } else {
        format!("mismatched {}; margins {}", failed.join(", "), parts.join(", "))
    };
    verdict(failed.is_empty(), detail)
}

fn bounds_cross_check() -> Verdict {
    let d1 = DataRef::Positive.dataset();
    let pos = bounds_for(&d1, Constraint::Positivity, &[0.1; 3]).unwrap();
    let want = [0.2, 0.35, 0.25];
    let mut ok = true;
    for (iv, w) in pos.alpha_intervals().iter().zip(want) {
        ok &= iv.lo == 0.0 && iv.lo_closed && (iv.hi - w).abs() <= 1e-12;
    }
    let table_b = [0.2, 0.31, 0.23];
    let ivs = pos.alpha_intervals();
    // Interval 1 is the documented boundary case: alpha_1 equals the open bound.
    ok &= table_b[0] == ivs[0].hi && !ivs[0].contains_with_slack(table_b[0], 0.0);
    ok &= ivs[1].contains_with_slack(table_b[1], 0.0) && ivs[2].contains_with_slack(table_b[2], 0.0);

    let d2 = DataRef::AboveLine.dataset();
    let line = Constraint::AboveLine { slope: -0.5, intercept: -1.0 };
    let above = bounds_for(&d2, line, &[0.1; 3]).unwrap();
    let caps = [0.17033, 0.209677, 0.419355];
    let got: Vec<f64> = above.alpha_intervals().iter().map(|iv| iv.hi).collect();
    for (g, c) in got.iter().zip(caps) {
        ok &= (g - c).abs() <= 1e-5;
    }
    for (iv, a) in above.alpha_intervals().iter().zip([0.17, 0.2, 0.4]) {
        ok &= iv.contains_with_slack(a, 0.0);
    }
    verdict(
        ok,
        format!(
            "D1 caps ({:.12}, {:.12}, {:.12}), D2 caps ({:.6}, {:.6}, {:.6})",
            ivs[0].hi, ivs[1].hi, ivs[2].hi, got[0], got[1], got[2]
        ),
    )
}

/// Random Hermite data with 3 or 4 knots, so that depth 10 stays cheap.
fn random_data(rng: &mut ChaCha8Rng) -> DataSet {
    let n = rng.gen_range(3..=4);
    let mut x = vec![rng.gen_range(-5.0..5.0)];
    for _ in 1..n {
        x.push(x.last().unwrap() + rng.gen_range(0.2..2.0));
    }
    let y = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
    let d = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    DataSet::new(x, y, Some(d)).unwrap()
}

fn random_constraint(rng: &mut ChaCha8Rng, data: &DataSet, family: usize) -> Constraint {
    let (x, y) = (data.knots(), data.values());
    match family {
        0 => Constraint::Positivity,
        1 => {
            let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Constraint::Rectangle { lower: lo - rng.gen_range(0.001..2.0), upper: hi + rng.gen_range(0.001..2.0) }
        }
        2 => {
            let slope = rng.gen_range(-2.0..2.0);
            let k = (0..x.len()).map(|j| y[j] - slope * x[j]).fold(f64::INFINITY, f64::min);
            Constraint::AboveLine { slope, intercept: k - rng.gen_range(0.001..0.1) }
        }
        _ => {
            let slope = rng.gen_range(-2.0..2.0);
            let k = (0..x.len()).map(|j| y[j] - slope * x[j]).fold(f64::NEG_INFINITY, f64::max);
            Constraint::BelowLine { slope, intercept: k + rng.gen_range(0.001..0.1) }
        }
    }
}

const FAMILIES: [&str; 4] = ["positivity", "rectangle", "above-line", "below-line"];

/// The randomized suite: validated models per family.
fn suite() -> Vec<(usize, Constraint, FifModel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for family in 0..FAMILIES.len() {
        for _ in 0..TRIALS {
            let data = random_data(&mut rng);
            let c = random_constraint(&mut rng, &data, family);
            let policy = SelectionPolicy {
                rho: rng.gen_range(0.05..0.95),
                sigma: rng.gen_range(0.001..3.0),
                u: rng.gen_range(0.05..2.0),
                ..SelectionPolicy::default()
            };
            if let Ok(params) = auto_select(&data, c, policy) {
                out.push((family, c, FifModel::new(data, params).unwrap()));
            }
        }
    }
    out
}

fn soundness(suite: &[(usize, Constraint, FifModel)]) -> Verdict {
    let mut counts = [0usize; 4];
    let mut worst = f64::INFINITY;
    let mut bad = 0;
    for (family, c, m) in suite {
        let report = validate(m, *c).unwrap();
        if !report.is_verified() {
            bad += 1;
            continue;
        }
        counts[*family] += 1;
        let r = empirical_margin(m, *c, DEPTH).unwrap();
        worst = worst.min(r.margin);
        if !r.satisfied(TOL) {
            bad += 1;
        }
    }
    let per: Vec<String> = FAMILIES.iter().zip(counts).map(|(f, c)| format!("{f} {c}/{TRIALS}")).collect();
    verdict(
        bad == 0,
        format!("validated {}; {bad} failures; smallest margin {worst:.3e}", per.join(", ")),
    )
}

fn perturbation(suite: &[(usize, Constraint, FifModel)]) -> Verdict {
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for (_, _, m) in suite {
        let dist = sampled_classical_distance(m, DEPTH).unwrap();
        let bound = perturbation_bound(m);
        tightest = tightest.min(bound - dist);
        if dist > bound + TOL {
            violations += 1;
        }
    }
    let mut zero_ok = true;
    for (_, _, m) in suite.iter().take(20) {
        let p = m.params();
        let flat = FifModel::new(m.data().clone(), IfsParams::classical(p.u.clone(), p.v.clone())).unwrap();
        zero_ok &= perturbation_bound(&flat) == 0.0;
        zero_ok &= (p.max_abs_alpha() > 0.0) == (perturbation_bound(m) > 0.0);
    }
    verdict(
        violations == 0 && zero_ok,
        format!(
            "{} models, {violations} above the bound, smallest slack {tightest:.3e}; zero exactly at alpha = 0: {zero_ok}",
            suite.len()
        ),
    )
}

fn tension() -> Verdict {
    let d = tension_study(&DataRef::Positive.dataset(), &[0.2, 0.31, 0.23], &[0.1; 3], &[1.0, 1e2, 1e4, 1e6]).unwrap();
    let monotone = d.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    verdict(
        monotone && d[3] < 1e-3,
        format!("distances {:.3e}, {:.3e}, {:.3e}, {:.3e}", d[0], d[1], d[2], d[3]),
    )
}

/// Minimum of the cubic on `[0, inf)` by dense sampling plus local refinement.
fn brute_min(c: [f64; 4]) -> f64 {
    let p = |x: f64| ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
    let lead = c.iter().position(|a| *a != 0.0);
    let Some(k) = lead else { return 0.0 };
    if k == 3 {
        return c[3];
    }
    // Every root lies below the Cauchy bound, so the sign beyond it is the
    // sign of the leading coefficient.
    let r = 1.0 + c[k + 1..].iter().map(|a| (a / c[k]).abs()).fold(0.0, f64::max);
    let end = 2.0 * r;
    let n = 4000;
    let xs: Vec<f64> = (0..=n).map(|j| end * j as f64 / n as f64).collect();
    let mut best = p(end).min(p(0.0));
    for j in 1..n {
        if p(xs[j]) <= p(xs[j - 1]) && p(xs[j]) <= p(xs[j + 1]) {
            let (mut a, mut b) = (xs[j - 1], xs[j + 1]);
            for _ in 0..100 {
                let m1 = a + (b - a) / 3.0;
                let m2 = b - (b - a) / 3.0;
                if p(m1) < p(m2) {
                    b = m2;
                } else {
                    a = m1;
                }
            }
            best = best.min(p(0.5 * (a + b))).min(p(xs[j]));
        }
    }
    best
}

fn oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut false_pos, mut false_neg, mut nonneg) = (0, 0, 0);
    for _ in 0..10_000 {
        let mut c: [f64; 4] = [0.0; 4];
        for a in &mut c {
            *a = rng.gen_range(-1.0..1.0);
        }
        match rng.gen_range(0..10) {
            0 => c[0] = 0.0,
            1 => c[3] = 0.0,
            _ => {}
        }
        let claim = cubic_nonneg_oracle(c[0], c[1], c[2], c[3]);
        let truth = brute_min(c) >= -TOL;
        nonneg += usize::from(truth);
        match (claim, truth) {
            (true, false) => false_pos += 1,
            (false, true) => false_neg += 1,
            _ => {}
        }
    }
    verdict(
        false_pos == 0 && false_neg == 0,
        format!("10000 cubics ({nonneg} nonnegative): {false_pos} false nonnegative, {false_neg} false negative"),
    )
}

fn read_bundle(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn determinism(suite: &[(usize, Constraint, FifModel)]) -> Verdict {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    for s in &SCENARIOS {
        write_bundle(s, a.path()).unwrap();
        write_bundle(s, b.path()).unwrap();
        let (fa, fb) = (read_bundle(&a.path().join(s.name)), read_bundle(&b.path().join(s.name)));
        if fa.len() != 4 || fa != fb {
            differing.push(s.name);
        }
    }
    let mut drift = 0;
    let scenario_models = models().into_iter().map(|(_, m)| m);
    let all: Vec<FifModel> = scenario_models.chain(suite.iter().map(|(_, _, m)| m.clone())).collect();
    for m in &all {
        let back = parse_model(&model_to_json(m), Path::new("<memory>")).unwrap();
        for i in 0..m.intervals() {
            let (x, y) = (m.coefficients(i), back.coefficients(i));
            if x.iter().zip(&y).any(|(p, q)| p.to_bits() != q.to_bits()) {
                drift += 1;
            }
        }
    }
    verdict(
        differing.is_empty() && drift == 0,
        format!(
            "bundles differing between runs: {}; {} models round-tripped, {drift} coefficient mismatches",
            if differing.is_empty() { "none".into() } else { differing.join(", ") },
            all.len()
        ),
    )
}

#[test]
fn acceptance() {
    let mut results: Vec<(usize, Verdict, f64)> = Vec::new();
    let mut timed = |n: usize, f: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = f();
        results.push((n, v, start.elapsed().as_secs_f64()));
    };
    timed(1, &mut interpolation);
    timed(2, &mut self_reference);
    timed(3, &mut classical_limit);
    timed(4, &mut constraint_reproduction);
    timed(5, &mut bounds_cross_check);
    let suite = suite();
    timed(6, &mut || soundness(&suite));
    timed(7, &mut || perturbation(&suite));
    timed(8, &mut tension);
    timed(9, &mut oracle);
    timed(10, &mut || determinism(&suite));

    for (n, v, secs) in &results {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {tag}: {} [{secs:.2}s]", v.detail);
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.1.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
