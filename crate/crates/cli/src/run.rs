//! Timestamped output directories with a manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::CliError;

pub struct RunDir {
    root: PathBuf,
    command: String,
    outputs: Vec<PathBuf>,
    started: Instant,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    versions: BTreeMap<&'static str, &'static str>,
    outputs: Vec<String>,
    wall_time_s: f64,
}

impl RunDir {
    /// `<base>/<command>-<UTC timestamp>`; a numeric suffix keeps
    /// directories of runs started within the same millisecond apart.
    pub fn create(base: &Path, command: &str) -> Result<Self, CliError> {
        let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
        let mut root = base.join(format!("{command}-{stamp}"));
        let mut suffix = 1;
        while root.exists() {
            root = base.join(format!("{command}-{stamp}-{suffix}"));
            suffix += 1;
        }
        fs::create_dir_all(&root)?;
        Ok(RunDir { root, command: command.to_string(), outputs: Vec::new(), started: Instant::now() })
    }

    /// Write `bytes` to `name` inside the run directory.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_vec_pretty(value).map_err(|e| CliError::Compute(e.to_string()))?;
        text.push(b'\n');
        self.write(name, &text)
    }

    /// Record a file written elsewhere (for example a user-chosen path).
    pub fn record(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    pub fn finish(self, config: &BTreeMap<String, String>) -> Result<PathBuf, CliError> {
        let manifest = Manifest {
            command: &self.command,
            config,
            versions: BTreeMap::from([("nlab", env!("CARGO_PKG_VERSION"))]),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let path = self.root.join("manifest.json");
        let mut text = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Compute(e.to_string()))?;
        text.push(b'\n');
        fs::write(&path, text)?;
        Ok(self.root)
    }
}
