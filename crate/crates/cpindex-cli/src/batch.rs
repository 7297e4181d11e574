//! Runs every `*.json` problem of a directory in parallel. Files are
//! independent; each report is written to its own output file and the
//! summary is sorted by file name.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::report::{Agreement, Status};
use crate::{render, run_path, Format, Outcome};
use crate::settings::Flags;

#[derive(Debug, Clone, Serialize)]
pub struct FileOutcome {
    pub file: String,
    pub status: Status,
    pub exit_code: i32,
    pub maslov: Option<i64>,
    pub conley_zehnder: Option<i64>,
    pub agreement: Option<Agreement>,
    pub error: Option<CliError>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Totals {
    pub files: usize,
    pub ok: usize,
    pub disagreement: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchSummary {
    pub schema_version: u32,
    pub generator: &'static str,
    pub files: Vec<FileOutcome>,
    pub totals: Totals,
}

impl BatchSummary {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.totals.ok != self.totals.files)
    }
}

pub fn problem_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::schema(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn outcome(file: String, result: &Outcome) -> FileOutcome {
    match result {
        Ok(report) => {
            let analysis = report.analysis.as_ref();
            FileOutcome {
                file,
                status: report.status,
                exit_code: crate::exit_code(result),
                maslov: analysis.map(|a| a.maslov.total).or(report.oracle.as_ref().map(|o| o.maslov)),
                conley_zehnder: analysis.and_then(|a| a.conley_zehnder.as_ref().map(|c| c.total)),
                agreement: report.oracle.as_ref().map(|o| o.agreement.clone()),
                error: None,
            }
        }
        Err(e) => FileOutcome {
            file,
            status: Status::Failed,
            exit_code: e.exit_code(),
            maslov: None,
            conley_zehnder: None,
            agreement: None,
            error: Some(e.clone()),
        },
    }
}

/// Analyzes every problem file in `dir`; with `out`, writes
/// `<stem>.report.json` (or `.report.txt`) per file into it.
pub fn run_batch(
    dir: &Path,
    out: Option<&Path>,
    flags: &Flags,
    env: Option<&str>,
    format: Format,
) -> Result<BatchSummary, CliError> {
    let files = problem_files(dir)?;
    if let Some(out) = out {
        std::fs::create_dir_all(out).map_err(|e| CliError::schema(format!("{}: {e}", out.display())))?;
    }
    let extension = match format {
        Format::Json => "report.json",
        Format::Text => "report.txt",
    };
    let outcomes: Vec<Result<FileOutcome, CliError>> = files
        .par_iter()
        .map(|path| {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let result = run_path(path, flags, env);
            if let Some(out) = out {
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let target = out.join(format!("{stem}.{extension}"));
                std::fs::write(&target, render(&result, format))
                    .map_err(|e| CliError::schema(format!("{}: {e}", target.display())))?;
            }
            Ok(outcome(name, &result))
        })
        .collect();
    let files = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut totals = Totals { files: files.len(), ..Default::default() };
    for f in &files {
        match f.status {
            Status::Ok => totals.ok += 1,
            Status::Disagreement => totals.disagreement += 1,
            Status::Failed => totals.failed += 1,
        }
    }
    Ok(BatchSummary {
        schema_version: crate::problem::SCHEMA_VERSION,
        generator: crate::report::GENERATOR,
        files,
        totals,
    })
}
