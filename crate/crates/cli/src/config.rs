use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::error::CliError;

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped; keys are flag names without the leading dashes.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key = value",
                lineno + 1
            )));
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!(
                "config line {}: invalid key",
                lineno + 1
            )));
        }
        pairs.push((key.replace('_', "-"), value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return iter.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

/// Inserts flags from the `--config` file right after the subcommand, so that
/// flags given on the command line override them.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path)).map_err(|e| {
        CliError::Usage(format!(
            "cannot read config {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    let mut injected = Vec::new();
    for (key, value) in parse_config(&text)? {
        match value.as_str() {
            "true" => injected.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                injected.push(format!("--{key}").into());
                injected.push(value.into());
            }
        }
    }
    let mut skip_next = false;
    let sub = args.iter().enumerate().skip(1).find_map(|(i, a)| {
        let s = a.to_string_lossy();
        if skip_next {
            skip_next = false;
            return None;
        }
        if s == "--config" {
            skip_next = true;
            return None;
        }
        (!s.starts_with('-')).then_some(i)
    });
    let Some(sub) = sub else {
        return Ok(args);
    };
    let mut out = args;
    out.splice(sub + 1..sub + 1, injected);
    Ok(out)
}
