//! Flat `key = value` configuration files.
//!
//! Values given on the command line win over the file, and the file wins over
//! built-in defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "q",
    "l",
    "beta",
    "eta",
    "t",
    "epsilon",
    "delta",
    "shots",
    "seed",
    "secret",
    "prep_mode",
    "realization",
    "mode",
    "output",
    "format",
    "n_min",
    "n_max",
    "q_min",
    "q_max",
    "c_rz",
    "rz_precision",
    "m_target",
];

#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::invalid(format!("cannot read config {}: {e}", p.display()))
                })?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::invalid(format!("config line {}: expected `key = value`", no + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::invalid(format!(
                    "config line {}: unknown key `{key}`",
                    no + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    /// CLI value if present, else the file value, else `None`.
    pub fn get<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::invalid(format!("config key `{key}`: {e}")))
            })
            .transpose()
    }

    pub fn or<T>(&self, cli: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(cli, key)?.unwrap_or(default))
    }

    pub fn require<T>(&self, cli: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(cli, key)?
            .ok_or_else(|| CliError::invalid(format!("missing required parameter `{key}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let cfg = FileConfig::parse("# comment\neta = 0.25\nseed=9 # trailing\n").unwrap();
        assert_eq!(cfg.or(Some(0.1), "eta", 0.5).unwrap(), 0.1);
        assert_eq!(cfg.or(None, "eta", 0.5).unwrap(), 0.25);
        assert_eq!(cfg.or::<f64>(None, "t", 0.5).unwrap(), 0.5);
        assert_eq!(cfg.require::<u64>(None, "seed").unwrap(), 9);
        assert!(cfg.require::<u64>(None, "shots").is_err());
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(FileConfig::parse("colour = red").is_err());
        assert!(FileConfig::parse("eta").is_err());
        let cfg = FileConfig::parse("n = four").unwrap();
        assert!(cfg.require::<usize>(None, "n").is_err());
    }
}
