use cpindex::ErrorKind;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Unreadable input, malformed JSON, wrong shapes or bad flags.
    Schema,
    /// Well-formed input that violates a mathematical precondition.
    Validation,
    /// Conditioning or convergence failure during the analysis.
    Numeric,
}

#[derive(Debug, Clone, Error, Serialize)]
#[error("{message}")]
pub struct CliError {
    pub category: Category,
    /// Name of the failed invariant.
    pub invariant: String,
    pub message: String,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        CliError { category: Category::Schema, invariant: "schema".into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category {
            Category::Schema => 2,
            Category::Validation => 3,
            Category::Numeric => 4,
        }
    }
}

impl From<cpindex::Error> for CliError {
    fn from(e: cpindex::Error) -> Self {
        let category = match e.kind() {
            ErrorKind::Validation => Category::Validation,
            ErrorKind::Numeric => Category::Numeric,
        };
        CliError { category, invariant: e.code().into(), message: e.to_string() }
    }
}
