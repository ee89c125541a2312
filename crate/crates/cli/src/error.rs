use std::fmt;
use std::io;

use mec_core::MecError;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_MONOTONICITY: i32 = 3;
pub const EXIT_ORACLE_MISMATCH: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(MecError),
    Monotonicity { at: f64, previous: f64, value: f64 },
    OracleMismatch { closed_form: f64, vertex: f64 },
    OracleVerdict(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) if e.is_infeasible() => EXIT_INFEASIBLE,
            CliError::Usage(_) | CliError::Solver(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Monotonicity { .. } => EXIT_MONOTONICITY,
            CliError::OracleMismatch { .. } | CliError::OracleVerdict(_) => EXIT_ORACLE_MISMATCH,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Solver(e) if e.is_infeasible() => write!(f, "{e}"),
            CliError::Solver(e) => write!(f, "domain error: {e}"),
            CliError::Monotonicity {
                at,
                previous,
                value,
            } => {
                write!(
                    f,
                    "monotonicity violation at {at}: value fell from {previous} to {value}"
                )
            }
            CliError::OracleMismatch {
                closed_form,
                vertex,
            } => write!(
                f,
                "oracle mismatch: closed form {closed_form}, vertex {vertex}, difference {}",
                (closed_form - vertex).abs()
            ),
            CliError::OracleVerdict(msg) => write!(f, "oracle mismatch: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<MecError> for CliError {
    fn from(e: MecError) -> Self {
        CliError::Solver(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
