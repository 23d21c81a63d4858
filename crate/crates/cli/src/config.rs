use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A fully resolved run: the echoed part of every envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig { command: command.to_string(), params: BTreeMap::new(), output_path: None, seed: 0 }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Overlays values given on the command line.
    pub fn overlay(&mut self, params: BTreeMap<String, Value>, output: Option<String>, seed: Option<u64>) {
        self.params.extend(params);
        if output.is_some() {
            self.output_path = output;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
    }

    /// Rejects parameters not in `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for k in self.params.keys() {
            if !allowed.contains(&k.as_str()) {
                bail!("unknown parameter `{k}` for `{}` (allowed: {})", self.command, allowed.join(", "));
            }
        }
        Ok(())
    }
}

/// Typed access to `RunConfig::params`; defaults are written back so the
/// echo shows every value that was used.
pub struct Params<'a>(pub &'a mut BTreeMap<String, Value>);

impl Params<'_> {
    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => {
                self.0.insert(key.to_string(), Value::from(default));
                Ok(default)
            }
            Some(v) => v.as_f64().with_context(|| format!("parameter `{key}` must be a number, got {v}")),
        }
    }

    pub fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).with_context(|| format!("parameter `{key}` must be a number, got {v}")),
        }
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None => {
                self.0.insert(key.to_string(), Value::from(default));
                Ok(default)
            }
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .with_context(|| format!("parameter `{key}` must be a non-negative integer, got {v}")),
        }
    }

    pub fn u32(&mut self, key: &str, default: u32) -> Result<u32> {
        let v = self.usize(key, default as usize)?;
        u32::try_from(v).with_context(|| format!("parameter `{key}` is out of range"))
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String> {
        match self.0.get(key) {
            None => {
                self.0.insert(key.to_string(), Value::from(default));
                Ok(default.to_string())
            }
            Some(v) => v.as_str().map(str::to_string).with_context(|| format!("parameter `{key}` must be a string, got {v}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_unknown_keys() {
        let mut c = RunConfig::new("constants");
        c.params.insert("gamma".into(), Value::from(1.5));
        c.output_path = Some("out.json".into());
        c.seed = 9;
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        assert!(serde_json::from_str::<RunConfig>(r#"{"command":"constants","colour":1}"#).is_err());
        assert!(c.check_keys(&["gamma"]).is_ok());
        assert!(c.check_keys(&["d"]).is_err());
    }

    #[test]
    fn defaults_are_recorded() {
        let mut m = BTreeMap::new();
        let mut p = Params(&mut m);
        assert_eq!(p.f64("b", 3.0).unwrap(), 3.0);
        assert_eq!(p.opt_f64("x").unwrap(), None);
        assert_eq!(m.get("b"), Some(&Value::from(3.0)));
        assert!(!m.contains_key("x"));
    }
}
