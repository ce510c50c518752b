//! Data, model and sample files.
//!
//! Data sets are CSV with header `x,y` or `x,y,d`, or JSON
//! `{"knots": [...], "values": [...], "derivatives": [...] | null}`. Models are
//! JSON holding the data plus the IFS parameters; coefficients are always
//! recomputed on load. Samples are CSV with header `x,y,d`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use fractal_spline_core::{DataSet, Error as CoreError, FifModel, IfsParams, RawPoint, Sample};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Option<Vec<f64>>,
}

impl From<&DataSet> for DatasetFile {
    fn from(d: &DataSet) -> Self {
        DatasetFile {
            knots: d.knots().to_vec(),
            values: d.values().to_vec(),
            derivatives: d.derivatives().map(<[f64]>::to_vec),
        }
    }
}

impl DatasetFile {
    pub fn into_dataset(self) -> fractal_spline_core::Result<DataSet> {
        DataSet::new(self.knots, self.values, self.derivatives)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub data: DatasetFile,
    pub alphas: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub kappa: f64,
}

impl From<&FifModel> for ModelFile {
    fn from(m: &FifModel) -> Self {
        let p = m.params();
        ModelFile {
            data: DatasetFile::from(m.data()),
            alphas: p.alphas.clone(),
            u: p.u.clone(),
            v: p.v.clone(),
            kappa: p.kappa,
        }
    }
}

impl ModelFile {
    pub fn build(self) -> fractal_spline_core::Result<FifModel> {
        let data = self.data.into_dataset()?;
        FifModel::new(data, IfsParams::new(self.alphas, self.u, self.v).with_kappa(self.kappa))
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| ToolError::Io { path: path.into(), source })
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a data set, choosing the format by extension (`.json` or CSV).
pub fn read_dataset(path: &Path) -> Result<DataSet> {
    let text = read_text(path)?;
    if is_json(path) {
        let file: DatasetFile = serde_json::from_str(&text)
            .map_err(|source| ToolError::Json { path: path.into(), source })?;
        Ok(file.into_dataset()?)
    } else {
        parse_dataset_csv(&text, path)
    }
}

/// Parses `x,y[,d]` rows. Errors carry 1-based line numbers.
pub fn parse_dataset_csv(text: &str, path: &Path) -> Result<DataSet> {
    let parse_err = |line: u64, message: String| ToolError::Parse { path: path.into(), line, message };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let with_d = match names.as_slice() {
        ["x", "y"] => false,
        ["x", "y", "d"] => true,
        _ => return Err(parse_err(1, format!("expected header `x,y` or `x,y,d`, found `{}`", names.join(",")))),
    };
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |k: usize| -> Result<f64> {
            let raw = record.get(k).unwrap_or("");
            raw.parse::<f64>().map_err(|_| parse_err(line, format!("`{raw}` is not a number")))
        };
        let point = if with_d {
            RawPoint::hermite(field(0)?, field(1)?, field(2)?)
        } else {
            RawPoint::new(field(0)?, field(1)?)
        };
        points.push(point);
        lines.push(line);
    }
    DataSet::from_points(&points).map_err(|e| {
        let at = |index: usize| lines.get(index).copied().unwrap_or(0);
        match e {
            CoreError::NonIncreasingKnots { index } => parse_err(at(index), e.to_string()),
            CoreError::NonFiniteValue { index } => parse_err(at(index), e.to_string()),
            other => ToolError::Core(other),
        }
    })
}

pub fn dataset_to_csv(data: &DataSet) -> String {
    let mut out = String::new();
    match data.derivatives() {
        Some(d) => {
            out.push_str("x,y,d\n");
            for j in 0..data.len() {
                let _ = writeln!(out, "{},{},{}", data.knots()[j], data.values()[j], d[j]);
            }
        }
        None => {
            out.push_str("x,y\n");
            for j in 0..data.len() {
                let _ = writeln!(out, "{},{}", data.knots()[j], data.values()[j]);
            }
        }
    }
    out
}

pub fn model_to_json(model: &FifModel) -> String {
    let mut s = serde_json::to_string_pretty(&ModelFile::from(model)).expect("model serializes");
    s.push('\n');
    s
}

pub fn parse_model(text: &str, path: &Path) -> Result<FifModel> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|source| ToolError::Json { path: path.into(), source })?;
    Ok(file.build()?)
}

pub fn load_model(path: &Path) -> Result<FifModel> {
    parse_model(&read_text(path)?, path)
}

pub fn save_model(path: &Path, model: &FifModel) -> Result<()> {
    write_atomic(path, model_to_json(model).as_bytes())
}

pub fn samples_to_csv(samples: &[Sample]) -> String {
    let mut out = String::with_capacity(samples.len() * 60 + 8);
    out.push_str("x,y,d\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{}", s.x, s.y, s.dy);
    }
    out
}

pub fn parse_samples_csv(text: &str, path: &Path) -> Result<Vec<Sample>> {
    let parse_err = |line: u64, message: String| ToolError::Parse { path: path.into(), line, message };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| parse_err(1, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["x", "y", "d"] {
        return Err(parse_err(1, "expected header `x,y,d`".into()));
    }
    reader
        .records()
        .map(|record| {
            let record = record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            let mut vals = [0.0; 3];
            for (k, v) in vals.iter_mut().enumerate() {
                let raw = record.get(k).unwrap_or("");
                *v = raw.parse().map_err(|_| parse_err(line, format!("`{raw}` is not a number")))?;
            }
            Ok(Sample { x: vals[0], y: vals[1], dy: vals[2] })
        })
        .collect()
}

pub fn read_samples(path: &Path) -> Result<Vec<Sample>> {
    parse_samples_csv(&read_text(path)?, path)
}

/// Writes via a temporary file in the target directory and renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| ToolError::Io { path: path.into(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
