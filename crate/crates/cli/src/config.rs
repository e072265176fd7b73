use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use fdl_core::random::DEFAULT_SEED;
use serde_json::{json, Map, Value};

use crate::CliError;

/// Every parameter name the CLI understands, as spelled on the command line and in config files.
pub const KEYS: &[&str] = &[
    "j", "alpha", "p", "q", "n", "N", "s", "R", "r", "k", "omega", "eps", "eta", "delta", "degree", "trials",
    "depth", "grid", "interior", "jmax", "seed", "beta", "M_thresh", "strategy", "x", "betas", "tolerance",
    "box_lo", "box_hi", "source", "source_seed", "input", "out", "csv",
];

/// Parses a flat `key = value` file. Blank lines and lines starting with `#` are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Seed used when neither a flag nor the config file sets one: `FDL_SEED` if present.
pub fn default_seed() -> Result<u64, CliError> {
    match std::env::var("FDL_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("FDL_SEED must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Resolves parameters from flags over the config file over defaults, and records every
/// resolved value for the `config` block of the output.
pub struct RunConfig {
    command: String,
    subcommand: String,
    flags: BTreeMap<String, String>,
    file: BTreeMap<String, String>,
    allowed: &'static [&'static str],
    resolved: Map<String, Value>,
}

impl RunConfig {
    pub fn new(
        command: &str,
        subcommand: &str,
        flags: BTreeMap<String, String>,
        file: BTreeMap<String, String>,
        allowed: &'static [&'static str],
    ) -> Result<Self, CliError> {
        for key in flags.keys() {
            if !allowed.contains(&key.as_str()) && key != "out" && key != "csv" {
                return Err(CliError::Usage(format!("--{key} does not apply to `{command} {subcommand}`")));
            }
        }
        Ok(Self {
            command: command.into(),
            subcommand: subcommand.into(),
            flags,
            file,
            allowed,
            resolved: Map::new(),
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        debug_assert!(KEYS.contains(&key));
        self.flags
            .get(key)
            .or_else(|| if self.allowed.contains(&key) { self.file.get(key) } else { None })
            .map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str, raw: &str) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        raw.parse()
            .map_err(|e| CliError::Usage(format!("invalid value {raw:?} for {key}: {e}")))
    }

    /// Value of `key`, or `default` when unset.
    pub fn get<T>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = match self.raw(key) {
            Some(raw) => self.parse(key, raw)?,
            None => default,
        };
        self.resolved.insert(key.into(), typed(&v.to_string()));
        Ok(v)
    }

    /// Value of `key` if set; recorded as `null` otherwise.
    pub fn opt<T>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v: Option<T> = self.raw(key).map(|raw| self.parse(key, raw)).transpose()?;
        self.resolved
            .insert(key.into(), v.as_ref().map_or(Value::Null, |v| typed(&v.to_string())));
        Ok(v)
    }

    /// Comma-separated list.
    pub fn list<T>(&mut self, key: &str, default: &str) -> Result<Vec<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        let raw = self.raw(key).unwrap_or(default).to_string();
        let v = raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.parse(key, s))
            .collect::<Result<Vec<T>, _>>()?;
        self.resolved
            .insert(key.into(), Value::Array(raw.split(',').map(|s| typed(s.trim())).collect()));
        Ok(v)
    }

    pub fn seed(&mut self) -> Result<u64, CliError> {
        let d = default_seed()?;
        self.get("seed", d)
    }

    pub fn out(&mut self) -> Option<String> {
        let v = self.raw("out").map(str::to_string);
        self.resolved.insert("out".into(), json!(v));
        v
    }

    pub fn csv(&mut self) -> Option<String> {
        let v = self.raw("csv").map(str::to_string);
        self.resolved.insert("csv".into(), json!(v));
        v
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("subcommand".into(), json!(self.subcommand));
        for (k, v) in &self.resolved {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// Numbers stay numbers in the JSON record; everything else is a string.
fn typed(s: &str) -> Value {
    if let Ok(u) = s.parse::<u64>() {
        return json!(u);
    }
    if let Ok(i) = s.parse::<i64>() {
        return json!(i);
    }
    match s.parse::<f64>() {
        Ok(f) if f.is_finite() => json!(f),
        _ => json!(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let m = parse_config_text("# sweep\nN = 512\n\nalpha=0.5\n").unwrap();
        assert_eq!(m["N"], "512");
        assert_eq!(m["alpha"], "0.5");
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("N 512").is_err());
    }

    #[test]
    fn flags_override_file() {
        let flags = BTreeMap::from([("N".to_string(), "64".to_string())]);
        let file = BTreeMap::from([("N".to_string(), "128".to_string()), ("trials".to_string(), "3".to_string())]);
        let mut c = RunConfig::new("verify", "maximal", flags, file, &["N", "trials", "alpha"]).unwrap();
        assert_eq!(c.get("N", 0u64).unwrap(), 64);
        assert_eq!(c.get("trials", 100u64).unwrap(), 3);
        assert_eq!(c.get("alpha", 0.5f64).unwrap(), 0.5);
        assert_eq!(c.to_json()["alpha"], json!(0.5));
    }

    #[test]
    fn rejects_foreign_flags() {
        let flags = BTreeMap::from([("j".to_string(), "3".to_string())]);
        assert!(RunConfig::new("verify", "maximal", flags, BTreeMap::new(), &["N"]).is_err());
    }
}
