//! Merging of `--config` files with command-line flags.
//!
//! A config file is flat TOML whose keys are the snake_case flag names.
//! The reserved keys `command`, `output` and `format` fill the common
//! options. Flags given on the command line win over the file.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{usage, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Common {
    /// TOML file with parameters for this command
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output table; standard output when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Everything needed to reproduce a scan; written next to its table.
#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    pub command: String,
    pub params: Value,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

fn read_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table =
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    match serde_json::to_value(table) {
        Ok(Value::Object(map)) => Ok(map),
        _ => usage(format!("config {} is not a key-value table", path.display())),
    }
}

/// Resolves the parameters of `command` from the config file and flags.
pub fn resolve<P, F>(command: &str, common: &Common, flags: &F) -> Result<(P, ScanConfig), CliError>
where
    P: DeserializeOwned + Serialize,
    F: Serialize,
{
    let mut merged = match &common.config {
        Some(path) => read_file(path)?,
        None => Map::new(),
    };
    if let Some(c) = merged.remove("command") {
        if c.as_str() != Some(command) {
            return usage(format!("config is for command {c}, not {command}"));
        }
    }
    let file_output = merged.remove("output");
    let file_format = merged.remove("format");
    if let Value::Object(given) = serde_json::to_value(flags).map_err(|e| CliError::Usage(e.to_string()))? {
        merged.extend(given);
    }
    let params: P = serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(e.to_string()))?;

    let output_path = match (&common.output, file_output) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(Value::String(s))) => Some(PathBuf::from(s)),
        (None, Some(v)) => return usage(format!("output must be a path, got {v}")),
        (None, None) => None,
    };
    let format = match (common.format, file_format) {
        (Some(f), _) => f,
        (None, Some(v)) => serde_json::from_value(v).map_err(|e| CliError::Usage(format!("format: {e}")))?,
        (None, None) => Format::Csv,
    };
    let config = ScanConfig {
        command: command.to_string(),
        params: serde_json::to_value(&params).map_err(|e| CliError::Usage(e.to_string()))?,
        output_path,
        format,
    };
    Ok((params, config))
}
