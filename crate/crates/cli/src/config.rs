//! Plain `key = value` experiment files. Values given on the command line
//! take precedence over the file, which takes precedence over defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Keys understood by at least one command. Dashes and underscores are
/// interchangeable.
const KNOWN_KEYS: &[&str] = &[
    "shape", "h", "k", "tol", "n_max", "delta", "p", "window", "oracle", "a", "b", "zero_tol", "out", "seed",
    "lattice", "torus", "radius", "greedy", "radii", "attempts", "load", "scan_out", "no_vectors",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
            let key = normalize(key.trim());
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{}'", no + 1, key));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn normalize(key: &str) -> String {
    key.replace('-', "_")
}

/// Resolved settings of one command, recorded verbatim in the manifest.
#[derive(Debug, Default)]
pub struct Resolver<'a> {
    file: Option<&'a ConfigFile>,
    pub resolved: BTreeMap<String, String>,
}

impl<'a> Resolver<'a> {
    pub fn new(file: Option<&'a ConfigFile>) -> Self {
        Resolver { file, resolved: BTreeMap::new() }
    }

    /// Flag, else file, else `None`.
    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.and_then(|f| f.get(key)) {
                Some(text) => {
                    Some(text.parse::<T>().map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))?)
                }
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    pub fn value<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = self.optional(key, flag)?.unwrap_or(default);
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Boolean switch: set by the flag or by `key = true` in the file.
    pub fn switch(&mut self, key: &str, flag: bool) -> Result<bool, CliError> {
        let v = if flag { true } else { self.optional::<bool>(key, None)?.unwrap_or(false) };
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }
}
