use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct ResultEnvelope {
    pub tool_version: String,
    pub config_echo: RunConfig,
    pub results: Vec<Value>,
    pub timing_ms: u64,
}

/// Rounds to 9 significant digits; non-finite values become `null`.
pub fn sig9(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    Value::from(r)
}

/// Applies [`sig9`] to every float in a JSON value.
pub fn round_all(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => sig9(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(round_all).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_all(v))).collect()),
        other => other,
    }
}

impl ResultEnvelope {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes the envelope, and `csv_rows` (if any) next to it with a `.csv`
    /// extension.
    pub fn write(&self, csv_rows: Option<&[Value]>) -> Result<()> {
        let json = self.to_json()?;
        match &self.config_echo.output_path {
            None => println!("{json}"),
            Some(p) => {
                let path = Path::new(p);
                std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
                if let Some(rows) = csv_rows {
                    write_csv(&path.with_extension("csv"), rows)?;
                }
            }
        }
        Ok(())
    }
}

/// Flat JSON objects to CSV; the header comes from the first row.
pub fn write_csv(path: &Path, rows: &[Value]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let Some(Value::Object(first)) = rows.first() else {
        w.flush()?;
        return Ok(());
    };
    let header: Vec<String> = first.keys().cloned().collect();
    w.write_record(&header)?;
    for row in rows {
        let cells = header.iter().map(|k| match row.get(k) {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Null) | None => String::new(),
            Some(v) => v.to_string(),
        });
        w.write_record(cells)?;
    }
    w.flush()?;
    Ok(())
}
