//! Command-line front end.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fractal_spline_core::analysis::empirical_margin;
use fractal_spline_core::attractor::max_depth;
use fractal_spline_core::constraint::{auto_select, bounds_for, validate, SelectionPolicy};
use fractal_spline_core::{Constraint, DataSet, FifModel, IfsParams, DEFAULT_KAPPA, DEFAULT_MAX_SAMPLES};
use serde::Serialize;

use crate::error::{Result, ToolError};
use crate::io;
use crate::report::{to_json, BoundsDto, MarginDto, ValidationDto};
use crate::scenario::{self, SCENARIOS};
use crate::svg;

pub const DEFAULT_DEPTH: usize = 10;
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "fractal-spline", version, about = "Constrained rational cubic spline fractal interpolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print admissible scaling factors and shape-parameter thresholds as JSON.
    Bounds {
        data: PathBuf,
        #[command(flatten)]
        constraint: ConstraintArgs,
        /// Shape parameters u_i (default 1 on every interval).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Option<Vec<f64>>,
        /// Scaling factors at which to evaluate the v thresholds (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Option<Vec<f64>>,
        #[arg(long)]
        estimate_derivatives: bool,
    },
    /// Build a model from data and parameters and save it as JSON.
    Build {
        data: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<f64>>,
        /// Choose parameters from the constraint's sufficient conditions,
        /// taking alpha_i = RHO times its upper bound.
        #[arg(long, value_name = "RHO", num_args = 0..=1, default_missing_value = "0.9")]
        auto: Option<f64>,
        #[command(flatten)]
        constraint: ConstraintArgs,
        #[arg(long, default_value_t = DEFAULT_KAPPA)]
        kappa: f64,
        #[arg(long)]
        estimate_derivatives: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write attractor samples `x,y,d` sorted by x.
    Sample {
        model: PathBuf,
        #[arg(long, conflicts_with = "tol")]
        depth: Option<usize>,
        /// Use the smallest depth whose largest abscissa gap is at most this.
        #[arg(long)]
        tol: Option<f64>,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a model against a constraint; exit 0 when satisfied, 1 otherwise.
    Verify {
        model: PathBuf,
        #[command(flatten)]
        constraint: ConstraintArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Render the sampled curve and the data points to SVG.
    Plot {
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[command(flatten)]
        constraint: ConstraintArgs,
    },
    /// Reproduce a reference scenario (fig1a ... fig1i, or `all`).
    Scenario {
        name: String,
        /// Output directory (overridden by FRACTAL_SPLINE_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct ConstraintArgs {
    #[arg(long)]
    pub positivity: bool,
    /// Rectangle `[x_1, x_N] x [C, D]`.
    #[arg(long, num_args = 2, value_names = ["C", "D"], allow_hyphen_values = true)]
    pub rect: Option<Vec<f64>>,
    /// Line `y = M x + K`.
    #[arg(long, num_args = 2, value_names = ["M", "K"], allow_hyphen_values = true)]
    pub above_line: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["M", "K"], allow_hyphen_values = true)]
    pub below_line: Option<Vec<f64>>,
}

impl ConstraintArgs {
    pub fn constraint(&self) -> Option<Constraint> {
        if self.positivity {
            return Some(Constraint::Positivity);
        }
        if let Some(r) = &self.rect {
            return Some(Constraint::Rectangle { lower: r[0], upper: r[1] });
        }
        if let Some(l) = &self.above_line {
            return Some(Constraint::AboveLine { slope: l[0], intercept: l[1] });
        }
        self.below_line.as_ref().map(|l| Constraint::BelowLine { slope: l[0], intercept: l[1] })
    }

    fn required(&self) -> Result<Constraint> {
        self.constraint().ok_or_else(|| {
            ToolError::Usage("a constraint is required: --positivity, --rect, --above-line or --below-line".into())
        })
    }
}

/// Outcome of a successful command, mapped onto the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Verified,
    Violation,
}

fn load_data(path: &Path, estimate: bool) -> Result<DataSet> {
    let data = io::read_dataset(path)?;
    if estimate {
        if data.has_derivatives() {
            return Err(ToolError::Usage(
                "--estimate-derivatives given but the data already has a `d` column".into(),
            ));
        }
        return Ok(data.with_estimated_derivatives()?);
    }
    Ok(data)
}

fn check_len(name: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(ToolError::Usage(format!("--{name} needs {n} values, got {}", v.len())))
    }
}

/// Smallest depth whose widest gap between neighbouring samples is at most `tol`.
pub fn depth_for_tolerance(model: &FifModel, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(fractal_spline_core::Error::InvalidTolerance(tol).into());
    }
    let part = model.partition();
    let ratio = part.scales().iter().copied().fold(0.0, f64::max);
    let limit = max_depth(model.data().len(), DEFAULT_MAX_SAMPLES);
    let mut gap = part.max_width();
    for depth in 0..=limit {
        if gap <= tol {
            return Ok(depth);
        }
        gap *= ratio;
    }
    Err(fractal_spline_core::Error::DepthTooLarge { depth: limit + 1, max_depth: limit }.into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| ToolError::Io { path: "<stdout>".into(), source })
        }
    }
}

#[derive(Serialize)]
struct VerifyRecord {
    margin: MarginDto,
    validation: Option<ValidationDto>,
    validation_error: Option<String>,
}

#[derive(Serialize)]
struct ScenarioLine<'a> {
    scenario: &'a str,
    matched: bool,
    margin: f64,
    dir: String,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Bounds { data, constraint, u, alpha, estimate_derivatives } => {
            let data = load_data(&data, estimate_derivatives)?;
            let n = data.intervals();
            let u = u.unwrap_or_else(|| vec![1.0; n]);
            check_len("u", &u, n)?;
            if let Some(a) = &alpha {
                check_len("alpha", a, n)?;
            }
            let report = bounds_for(&data, constraint.required()?, &u)?;
            emit(None, &to_json(&BoundsDto::new(&report, alpha.as_deref()))?)?;
            Ok(Outcome::Verified)
        }
        Command::Build { data, alpha, u, v, auto, constraint, kappa, estimate_derivatives, out } => {
            let data = load_data(&data, estimate_derivatives)?;
            let n = data.intervals();
            let params = match auto {
                Some(rho) => {
                    if alpha.is_some() || v.is_some() {
                        return Err(ToolError::Usage("--auto chooses alpha and v; drop --alpha/--v".into()));
                    }
                    let base = SelectionPolicy { rho, kappa, ..SelectionPolicy::default() };
                    let policy = match &u {
                        Some(u) if u.len() == 1 => SelectionPolicy { u: u[0], ..base },
                        Some(_) => return Err(ToolError::Usage("--auto takes a single --u value".into())),
                        None => base,
                    };
                    auto_select(&data, constraint.required()?, policy)?
                }
                None => {
                    let (Some(alpha), Some(u), Some(v)) = (alpha, u, v) else {
                        return Err(ToolError::Usage("give --alpha, --u and --v, or --auto".into()));
                    };
                    check_len("alpha", &alpha, n)?;
                    check_len("u", &u, n)?;
                    check_len("v", &v, n)?;
                    IfsParams::new(alpha, u, v).with_kappa(kappa)
                }
            };
            let model = FifModel::new(data, params)?;
            io::save_model(&out, &model)?;
            Ok(Outcome::Verified)
        }
        Command::Sample { model, depth, tol, out } => {
            let model = io::load_model(&model)?;
            let depth = match (depth, tol) {
                (Some(d), _) => d,
                (None, Some(t)) => depth_for_tolerance(&model, t)?,
                (None, None) => DEFAULT_DEPTH,
            };
            let samples = model.sample_attractor(depth)?;
            emit(out.as_deref(), &io::samples_to_csv(samples.samples()))?;
            Ok(Outcome::Verified)
        }
        Command::Verify { model, constraint, depth } => {
            let model = io::load_model(&model)?;
            let constraint = constraint.required()?;
            let margin = empirical_margin(&model, constraint, depth)?;
            let (validation, validation_error) = match validate(&model, constraint) {
                Ok(r) => (Some(ValidationDto::from(&r)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let record = VerifyRecord { margin: MarginDto::new(&margin, MARGIN_TOL), validation, validation_error };
            emit(None, &to_json(&record)?)?;
            Ok(if margin.satisfied(MARGIN_TOL) { Outcome::Verified } else { Outcome::Violation })
        }
        Command::Plot { model, out, depth, constraint } => {
            let model = io::load_model(&model)?;
            let samples = model.sample_attractor(depth)?;
            let picture = svg::render(samples.samples(), model.data(), constraint.constraint());
            io::write_atomic(&out, picture.as_bytes())?;
            Ok(Outcome::Verified)
        }
        Command::Scenario { name, out } => {
            let root = scenario::output_root(out.as_deref());
            let names: Vec<&str> = if name == "all" {
                SCENARIOS.iter().map(|s| s.name).collect()
            } else {
                vec![scenario::find(&name)?.name]
            };
            let mut all_matched = true;
            for name in names {
                let outcome = scenario::write_bundle(scenario::find(name)?, &root)?;
                all_matched &= outcome.matched;
                let line = ScenarioLine {
                    scenario: name,
                    matched: outcome.matched,
                    margin: outcome.margin.margin,
                    dir: outcome.dir.display().to_string(),
                };
                let json = serde_json::to_string(&line).expect("line serializes");
                emit(None, &format!("{json}\n"))?;
                if !outcome.matched {
                    let err = ToolError::ExpectationFailed {
                        name: name.into(),
                        expected: outcome.scenario.expect.as_str(),
                        margin: outcome.margin.margin,
                    };
                    eprintln!("fractal-spline: {err}");
                }
            }
            Ok(if all_matched { Outcome::Verified } else { Outcome::Violation })
        }
    }
}
