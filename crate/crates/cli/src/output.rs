use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mec_core::SolverResult;
use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::error::CliError;

pub const OUTPUT_DIR_ENV: &str = "MEC_OUTPUT_DIR";
pub const INFEASIBLE_LABEL: &str = "infeasible";

pub fn tool_version() -> String {
    format!("mec {}", env!("CARGO_PKG_VERSION"))
}

/// One solved (or infeasible) problem instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub qx: f64,
    pub qy: f64,
    pub qs1: Option<f64>,
    pub rate: f64,
    pub cclass: Option<f64>,
    pub value_bits: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
    pub p4: Option<f64>,
    pub case_label: String,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointInputs {
    pub qx: f64,
    pub qy: f64,
    pub qs1: Option<f64>,
    pub rate: f64,
    pub cclass: Option<f64>,
}

impl CurvePoint {
    pub fn solved(inputs: PointInputs, res: &SolverResult<f64>) -> Self {
        let [p1, p2, p3, p4] = res.mixture.weights();
        Self {
            qx: inputs.qx,
            qy: inputs.qy,
            qs1: inputs.qs1,
            rate: inputs.rate,
            cclass: inputs.cclass,
            value_bits: Some(res.value),
            p1: Some(p1),
            p2: Some(p2),
            p3: Some(p3),
            p4: Some(p4),
            case_label: res.case_label.to_string(),
            alpha: res.alpha,
        }
    }

    pub fn infeasible(inputs: PointInputs) -> Self {
        Self {
            qx: inputs.qx,
            qy: inputs.qy,
            qs1: inputs.qs1,
            rate: inputs.rate,
            cclass: inputs.cclass,
            value_bits: None,
            p1: None,
            p2: None,
            p3: None,
            p4: None,
            case_label: INFEASIBLE_LABEL.to_string(),
            alpha: None,
        }
    }
}

pub fn resolve_output(path: &Path, env_dir: Option<&Path>) -> PathBuf {
    match env_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

pub fn open_sink(out: &OutputArgs) -> Result<Box<dyn Write>, CliError> {
    match &out.output {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(path) => {
            let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
            let path = resolve_output(path, env_dir.as_deref());
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Ok(Box::new(BufWriter::new(File::create(path)?)))
        }
    }
}

/// `# key: value` metadata lines followed by a CSV table of `rows`.
pub fn write_csv<W: Write, R: Serialize>(
    mut w: W,
    meta: &[(&str, String)],
    rows: &[R],
) -> Result<(), CliError> {
    for (key, value) in meta {
        writeln!(w, "# {key}: {value}")?;
    }
    let mut csv = csv::Writer::from_writer(&mut w);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    drop(csv);
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn emit<R: Serialize, J: Serialize>(
    out: &OutputArgs,
    meta: &[(&str, String)],
    rows: &[R],
    json: &J,
) -> Result<(), CliError> {
    let sink = open_sink(out)?;
    match out.format {
        Format::Csv => write_csv(sink, meta, rows),
        Format::Json => write_json(sink, json),
    }
}
