//! The nine reference configurations and their artifact bundles.

use std::path::{Path, PathBuf};

use fractal_spline_core::analysis::{empirical_margin, MarginReport};
use fractal_spline_core::constraint::{validate, ValidationReport};
use fractal_spline_core::{Constraint, DataSet, FifModel, IfsParams};
use serde::Serialize;

use crate::error::{Result, ToolError};
use crate::io::{model_to_json, samples_to_csv, write_atomic};
use crate::report::{to_json, ConstraintDto, MarginDto, ValidationDto};
use crate::svg;

/// Overrides the default bundle directory.
pub const OUT_DIR_ENV: &str = "FRACTAL_SPLINE_OUT";
pub const DEFAULT_OUT_DIR: &str = "scenario-output";
pub const SCENARIO_DEPTH: usize = 10;
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataRef {
    /// Positive data on `[0, 1]` with fixed slopes.
    Positive,
    /// Hermite data above `y = -0.5 x - 1`.
    AboveLine,
}

impl DataRef {
    pub fn dataset(self) -> DataSet {
        match self {
            DataRef::Positive => DataSet::new(
                vec![0.0, 0.4, 0.75, 1.0],
                vec![0.1, 1.0, 2.0, 5.0],
                Some(vec![-1.5238, 1.5238, 8.1905, 15.8095]),
            ),
            DataRef::AboveLine => DataSet::new(
                vec![1.0, 3.3, 4.6, 7.2],
                vec![-1.2, -1.1, -1.0, 4.5],
                Some(vec![0.85, -0.15, -0.4583, -0.7861]),
            ),
        }
        .expect("reference data is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Violates,
    Satisfies,
}

impl Expectation {
    pub fn as_str(self) -> &'static str {
        match self {
            Expectation::Violates => "violate the constraint",
            Expectation::Satisfies => "satisfy the constraint",
        }
    }

    pub fn matches(self, margin: &MarginReport) -> bool {
        match self {
            Expectation::Violates => margin.margin < 0.0,
            Expectation::Satisfies => margin.satisfied(MARGIN_TOL),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub data: DataRef,
    pub alphas: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub constraint: Constraint,
    pub expect: Expectation,
    pub note: Option<&'static str>,
}

const POSITIVE: Constraint = Constraint::Positivity;
const BOX: Constraint = Constraint::Rectangle { lower: 0.1, upper: 5.0 };
const LINE: Constraint = Constraint::AboveLine { slope: -0.5, intercept: -1.0 };
const EDGE_NOTE: &str = "y_1 lies on the lower edge; the 0/0 ratio there imposes no alpha bound and \
                         the v threshold reduces to the sign of d_1 (h_1 - alpha_1 (x_N - x_1))";

pub const SCENARIOS: [Scenario; 9] = [
    // Negative first scaling factor, chosen to break positivity.
    Scenario {
        name: "fig1a",
        data: DataRef::Positive,
        alphas: [-0.2, 0.31, 0.23],
        u: [0.1; 3],
        v: [0.08, 0.1, 0.1],
        constraint: POSITIVE,
        expect: Expectation::Violates,
        note: None,
    },
    // Positivity-preserving choice; alpha_1 sits on its open bound.
    Scenario {
        name: "fig1b",
        data: DataRef::Positive,
        alphas: [0.2, 0.31, 0.23],
        u: [0.1; 3],
        v: [0.08, 0.1, 0.1],
        constraint: POSITIVE,
        expect: Expectation::Satisfies,
        note: Some("alpha_1 = 0.2 equals the open bound y_2 / y_N and is reported as a boundary case"),
    },
    // Classical spline (all scaling factors zero).
    Scenario {
        name: "fig1c",
        data: DataRef::Positive,
        alphas: [0.0; 3],
        u: [0.1; 3],
        v: [0.08, 0.1, 0.1],
        constraint: POSITIVE,
        expect: Expectation::Satisfies,
        note: None,
    },
    // Fractal curve inside [0, 1] x [0.1, 5].
    Scenario {
        name: "fig1d",
        data: DataRef::Positive,
        alphas: [0.1, 0.3, 0.2],
        u: [0.1; 3],
        v: [0.26, 0.1, 0.1],
        constraint: BOX,
        expect: Expectation::Satisfies,
        note: Some(EDGE_NOTE),
    },
    // Classical spline inside the same rectangle.
    Scenario {
        name: "fig1e",
        data: DataRef::Positive,
        alphas: [0.0; 3],
        u: [0.1; 3],
        v: [3.8, 0.1, 0.1],
        constraint: BOX,
        expect: Expectation::Satisfies,
        note: Some(EDGE_NOTE),
    },
    // Negative scaling factors, chosen to cross the line.
    Scenario {
        name: "fig1f",
        data: DataRef::AboveLine,
        alphas: [-0.3, -0.2, -0.4],
        u: [0.1; 3],
        v: [3.8, 0.1, 0.1],
        constraint: LINE,
        expect: Expectation::Violates,
        note: None,
    },
    // Above the line with alpha just under the caps.
    Scenario {
        name: "fig1g",
        data: DataRef::AboveLine,
        alphas: [0.17, 0.2, 0.4],
        u: [0.1; 3],
        v: [3.8, 0.1, 0.1],
        constraint: LINE,
        expect: Expectation::Satisfies,
        note: None,
    },
    // As fig1g with alpha_2 = 0.1.
    Scenario {
        name: "fig1h",
        data: DataRef::AboveLine,
        alphas: [0.17, 0.1, 0.4],
        u: [0.1; 3],
        v: [3.8, 0.1, 0.1],
        constraint: LINE,
        expect: Expectation::Satisfies,
        note: None,
    },
    // Classical spline above the line.
    Scenario {
        name: "fig1i",
        data: DataRef::AboveLine,
        alphas: [0.0; 3],
        u: [0.1; 3],
        v: [3.8, 0.1, 0.1],
        constraint: LINE,
        expect: Expectation::Satisfies,
        note: None,
    },
];

pub fn find(name: &str) -> Result<&'static Scenario> {
    SCENARIOS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ToolError::UnknownScenario(name.into()))
}

impl Scenario {
    pub fn model(&self) -> Result<FifModel> {
        let params = IfsParams::new(self.alphas.to_vec(), self.u.to_vec(), self.v.to_vec());
        Ok(FifModel::new(self.data.dataset(), params)?)
    }
}

/// Bundle directory: `$FRACTAL_SPLINE_OUT` if set, else `default`.
pub fn output_root(default: Option<&Path>) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => default.map_or_else(|| PathBuf::from(DEFAULT_OUT_DIR), Path::to_path_buf),
    }
}

#[derive(Debug, Clone, Serialize)]
struct MarginFile<'a> {
    scenario: &'a str,
    expected: Expectation,
    matched: bool,
    constraint: ConstraintDto,
    margin: MarginDto,
    validation: ValidationDto,
    note: Option<&'a str>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub scenario: Scenario,
    pub margin: MarginReport,
    pub validation: ValidationReport,
    pub dir: PathBuf,
    pub matched: bool,
}

/// Builds, samples and checks a scenario, writing `model.json`,
/// `samples.csv`, `curve.svg` and `margin.json` under `root/<name>`.
/// Artifacts are written even when the expectation fails.
pub fn run_scenario(name: &str, root: &Path) -> Result<ScenarioOutcome> {
    let outcome = write_bundle(find(name)?, root)?;
    if outcome.matched {
        Ok(outcome)
    } else {
        Err(ToolError::ExpectationFailed {
            name: name.into(),
            expected: outcome.scenario.expect.as_str(),
            margin: outcome.margin.margin,
        })
    }
}

/// As `run_scenario`, reporting a mismatch in the outcome instead of failing.
pub fn write_bundle(scenario: &Scenario, root: &Path) -> Result<ScenarioOutcome> {
    let model = scenario.model()?;
    let samples = model.sample_attractor(SCENARIO_DEPTH)?;
    let margin = empirical_margin(&model, scenario.constraint, SCENARIO_DEPTH)?;
    let validation = validate(&model, scenario.constraint)?;
    let matched = scenario.expect.matches(&margin);
    let dir = root.join(scenario.name);
    write_atomic(&dir.join("model.json"), model_to_json(&model).as_bytes())?;
    write_atomic(&dir.join("samples.csv"), samples_to_csv(samples.samples()).as_bytes())?;
    let picture = svg::render(samples.samples(), model.data(), Some(scenario.constraint));
    write_atomic(&dir.join("curve.svg"), picture.as_bytes())?;
    let record = MarginFile {
        scenario: scenario.name,
        expected: scenario.expect,
        matched,
        constraint: scenario.constraint.into(),
        margin: MarginDto::new(&margin, MARGIN_TOL),
        validation: ValidationDto::from(&validation),
        note: scenario.note,
    };
    write_atomic(&dir.join("margin.json"), to_json(&record)?.as_bytes())?;
    Ok(ScenarioOutcome { scenario: *scenario, margin, validation, dir, matched })
}
