use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = "vinebend";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Run metadata attached to every output.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: Value,
    pub units: Value,
}

impl Metadata {
    pub fn new<I: Serialize>(command: &'static str, input: &I, units: Value) -> Self {
        Self { tool: TOOL, version: VERSION, command, input: serde_json::to_value(input).unwrap_or(Value::Null), units }
    }

    /// Single `#` comment line carrying the same fields as the JSON envelope.
    pub fn csv_comment(&self) -> String {
        format!(
            "# {} {} {} input={} units={}\n",
            self.tool,
            self.version,
            self.command,
            serde_json::to_string(&self.input).unwrap_or_default(),
            serde_json::to_string(&self.units).unwrap_or_default()
        )
    }
}

pub fn json_envelope<P: Serialize>(meta: &Metadata, payload: &P) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "metadata": meta, "payload": payload })).unwrap_or_default();
    s.push('\n');
    s
}

/// Write to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
