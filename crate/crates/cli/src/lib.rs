//! File formats, reports, SVG export, the reference scenarios and the
//! `fractal-spline` command line for `fractal-spline-core`.

pub mod cli;
pub mod error;
pub mod io;
pub mod report;
pub mod scenario;
pub mod svg;

pub use error::{Result, ToolError};
