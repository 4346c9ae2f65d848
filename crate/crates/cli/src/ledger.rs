use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One line of the results ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRecord {
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
    pub command: String,
    pub params: Value,
    pub result: Value,
    pub version: String,
}

impl LedgerRecord {
    pub fn new(command: &str, params: Value, result: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        LedgerRecord { timestamp, command: command.to_string(), params, result, version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// Append records to `path`, one JSON object per line.
pub fn append(path: &Path, records: &[LedgerRecord]) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r)?;
        buf.push(b'\n');
    }
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("ledger: cannot open {}", path.display()))?;
    f.write_all(&buf).with_context(|| format!("ledger: cannot write {}", path.display()))
}
