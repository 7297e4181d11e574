//! Front end for `cpindex`: problem files in, spectral reports out.
//!
//! Exit codes: 0 success, 1 oracle disagreement (or any failed file in a
//! batch), 2 schema or usage error, 3 validation error, 4 numerical error.

pub mod analyze;
pub mod batch;
pub mod error;
pub mod num;
pub mod problem;
pub mod report;
pub mod settings;
pub mod text;

use std::path::Path;

pub use analyze::analyze;
pub use batch::{run_batch, BatchSummary};
pub use error::CliError;
pub use problem::ProblemFile;
pub use report::{ErrorReport, Report, Status};
pub use settings::{Flags, Settings, TOL_OVERRIDE_ENV};

/// JSON Schema of problem files.
pub const PROBLEM_SCHEMA: &str = include_str!("../schema/problem-v1.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

pub type Outcome = Result<Report, CliError>;

pub fn run_text(text: &str, flags: &Flags, env: Option<&str>) -> Outcome {
    let problem = ProblemFile::parse(text)?;
    let settings = Settings::resolve(&problem.options, env, flags)?;
    analyze(&problem, &settings)
}

pub fn run_path(path: &Path, flags: &Flags, env: Option<&str>) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::schema(format!("cannot read problem file: {e}")))?;
    run_text(&text, flags, env)
}

pub fn exit_code(outcome: &Outcome) -> i32 {
    match outcome {
        Ok(r) if r.status == Status::Ok => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render(outcome: &Outcome, format: Format) -> String {
    match (outcome, format) {
        (Ok(r), Format::Json) => to_json(r),
        (Ok(r), Format::Text) => text::render(r),
        (Err(e), Format::Json) => to_json(&ErrorReport::new(e.clone())),
        (Err(e), Format::Text) => text::render_error(&ErrorReport::new(e.clone())),
    }
}

pub fn render_summary(summary: &BatchSummary, format: Format) -> String {
    match format {
        Format::Json => to_json(summary),
        Format::Text => text::render_summary(summary),
    }
}
