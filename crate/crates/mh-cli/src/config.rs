//! Flat key/value config files.
//!
//! Grammar: one `key = value` assignment per line, `#` starts a comment,
//! blank lines ignored. Values are scalars, names or comma-separated
//! number lists. Parsing is strict — duplicate keys and keys no command
//! consumes are rejected by name, and `chain.seed` / `chain.iterations`
//! have no defaults.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::errors::{CliError, CliResult};

pub struct Config {
    values: BTreeMap<String, String>,
    consumed: RefCell<BTreeSet<String>>,
}

impl Config {
    pub fn parse_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(idx) => &raw[..idx],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got {line:?}",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.' || c == '_')
            {
                return Err(CliError::Config(format!("line {}: invalid key {key:?}", lineno + 1)));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::Config(format!("duplicate key \"{key}\"")));
            }
        }
        Ok(Self {
            values,
            consumed: RefCell::new(BTreeSet::new()),
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let v = self.values.get(key)?;
        self.consumed.borrow_mut().insert(key.to_string());
        Some(v.as_str())
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.raw(key)
    }

    pub fn require_str(&self, key: &str) -> CliResult<&str> {
        self.raw(key)
            .ok_or_else(|| CliError::Config(format!("missing required key \"{key}\"")))
    }

    fn parse_scalar<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
        v.parse::<T>()
            .map_err(|_| CliError::Config(format!("key \"{key}\": cannot parse value {v:?}")))
    }

    pub fn require_u64(&self, key: &str) -> CliResult<u64> {
        Self::parse_scalar(key, self.require_str(key)?)
    }

    pub fn require_usize(&self, key: &str) -> CliResult<usize> {
        Self::parse_scalar(key, self.require_str(key)?)
    }

    pub fn get_usize(&self, key: &str) -> CliResult<Option<usize>> {
        self.raw(key).map(|v| Self::parse_scalar(key, v)).transpose()
    }

    pub fn require_f64(&self, key: &str) -> CliResult<f64> {
        Self::parse_scalar(key, self.require_str(key)?)
    }

    pub fn get_f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.raw(key).map(|v| Self::parse_scalar(key, v)).transpose()
    }

    /// Comma-separated list of numbers (a single number is a 1-list).
    pub fn get_f64_list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|item| Self::parse_scalar(key, item.trim()))
                .collect::<CliResult<Vec<f64>>>()
                .map(Some),
        }
    }

    pub fn require_f64_list(&self, key: &str) -> CliResult<Vec<f64>> {
        self.get_f64_list(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key \"{key}\"")))
    }

    pub fn get_name_list(&self, key: &str) -> Option<Vec<String>> {
        self.raw(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).collect())
    }

    /// Rejects keys outside the command's vocabulary up front, so typos
    /// are reported as unknown keys rather than as missing required ones.
    pub fn check_keys(&self, allowed: &[&str]) -> CliResult<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown key \"{key}\"")));
            }
        }
        Ok(())
    }

    /// Rejects any key no command consumed.
    pub fn finish(&self) -> CliResult<()> {
        let consumed = self.consumed.borrow();
        for key in self.values.keys() {
            if !consumed.contains(key) {
                return Err(CliError::Config(format!("unknown key \"{key}\"")));
            }
        }
        Ok(())
    }
}
