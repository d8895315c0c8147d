use std::path::{Path, PathBuf};

use chebwidom::jacobi::JacobiParams;
use chebwidom::IntervalSet;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_QUAD_ORDER: usize = 2048;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config::{code}: {message}")]
    Config { code: &'static str, message: String },
    #[error("{code}: {source}")]
    Solver { code: String, source: chebwidom::Error },
    #[error("verify::BoundViolation: {0}")]
    Violation(String),
    #[error("io::{kind:?}: {message}")]
    Io { kind: std::io::ErrorKind, message: String },
}

impl CliError {
    pub fn config(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Config { code, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver { .. } => 1,
            CliError::Violation(_) => 2,
            CliError::Config { .. } | CliError::Io { .. } => 3,
        }
    }
}

impl From<chebwidom::Error> for CliError {
    fn from(e: chebwidom::Error) -> Self {
        CliError::Solver { code: e.code(), source: e }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io { kind: e.kind(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub set: Option<IntervalSet>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub tol: f64,
    pub quad_order: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn require_set(&self) -> Result<&IntervalSet, CliError> {
        self.set.as_ref().ok_or_else(|| CliError::config("MissingSet", "--set is required"))
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::config("MissingDegree", "--n is required"))
    }

    pub fn require_n_max(&self) -> Result<usize, CliError> {
        self.n_max.ok_or_else(|| CliError::config("MissingDegree", "--n-max is required"))
    }

    pub fn out_path(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

pub fn check_tol(tol: f64) -> Result<f64, CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::config("InvalidTolerance", format!("--tol must be positive, got {tol}")))
    }
}

pub fn check_degree(flag: &str, n: Option<usize>) -> Result<Option<usize>, CliError> {
    match n {
        Some(0) => Err(CliError::config("InvalidDegree", format!("{flag} must be at least 1"))),
        other => Ok(other),
    }
}

pub fn check_quad_order(order: usize) -> Result<usize, CliError> {
    if order >= 256 && order.is_power_of_two() {
        Ok(order)
    } else {
        Err(CliError::config("InvalidQuadOrder", format!("--quad-order must be a power of two >= 256, got {order}")))
    }
}

/// Inline JSON if the argument starts with `{`, otherwise a file path.
fn read_json_arg(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::config("UnreadableInput", format!("{arg}: {e}")))
}

pub fn load_set(arg: &str) -> Result<IntervalSet, CliError> {
    let text = read_json_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::config("MalformedSet", e.to_string()))
}

pub fn load_params(arg: &str) -> Result<JacobiParams, CliError> {
    let text = read_json_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::config("MalformedParams", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_and_invalid_sets() {
        let s = load_set(r#"{"bands": [[0.5, 1], [-1, -0.5]]}"#).unwrap();
        assert_eq!(s.band_count(), 2);
        assert_eq!(load_set(r#"{"bands": [[1, 0]]}"#).unwrap_err().exit_code(), 3);
        assert_eq!(load_set(r#"{"bands": "#).unwrap_err().exit_code(), 3);
        assert_eq!(load_set("/no/such/file.json").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn numeric_checks() {
        assert!(check_quad_order(2048).is_ok());
        assert!(check_quad_order(128).is_err());
        assert!(check_quad_order(1000).is_err());
        assert!(check_tol(0.0).is_err());
        assert!(check_tol(f64::NAN).is_err());
        assert!(check_degree("--n", Some(0)).is_err());
        assert_eq!(check_degree("--n", Some(3)).unwrap(), Some(3));
    }

    #[test]
    fn params_need_matching_lengths() {
        assert!(load_params(r#"{"p": 2, "a": [1, 1], "b": [0, 0]}"#).is_ok());
        assert!(load_params(r#"{"p": 3, "a": [1, 1], "b": [0, 0]}"#).is_err());
        assert!(load_params(r#"{"p": 1, "a": [-1], "b": [0]}"#).is_err());
    }
}
