//! Run-directory handling: every command writes its data files into one
//! directory and finishes by dropping a `manifest.json` that echoes the
//! resolved configuration and lists every output with its SHA-256, so a
//! run can be audited and reproduced later. Timestamps live only in the
//! manifest — the data files are byte-identical across reruns with the
//! same configuration and seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// One persisted data file, named relative to the run directory.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// A run directory in the middle of being filled.
pub struct RunDir {
    root: PathBuf,
    outputs: Vec<OutputRecord>,
    started: Instant,
}

fn sha256_hex(data: &[u8]) -> String {
    let digest = Sha256::digest(data);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

impl RunDir {
    /// Creates (or reuses) the run directory: `--out-dir` verbatim when
    /// given, otherwise `runs/<UTC timestamp>-<command>/`.
    pub fn create(out_dir: Option<&Path>, command: &str) -> Result<Self, CliError> {
        let root = match out_dir {
            Some(dir) => dir.to_path_buf(),
            None => {
                let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%3fZ");
                PathBuf::from("runs").join(format!("{stamp}-{command}"))
            }
        };
        fs::create_dir_all(&root)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", root.display())))?;
        Ok(RunDir {
            root,
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    /// Writes one data file and records its hash for the manifest.
    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::Numeric(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            bytes: contents.len() as u64,
            sha256: sha256_hex(contents),
        });
        Ok(())
    }

    /// Writes `manifest.json` (config echo, seed, version, outputs with
    /// hashes, wall clock) and returns the run directory path.
    pub fn finish(
        self,
        command: &str,
        seed: u64,
        threads: Option<usize>,
        config: Value,
        stats: Value,
    ) -> Result<PathBuf, CliError> {
        let manifest = serde_json::json!({
            "tool": "pmqoc",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "created_utc": chrono::Utc::now().to_rfc3339(),
            "wall_clock_s": self.started.elapsed().as_secs_f64(),
            "seed": seed,
            "threads": threads,
            "config": config,
            "stats": stats,
            "outputs": self.outputs,
        });
        let path = self.root.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest)
            .expect("manifest serializes")
            + "\n";
        fs::write(&path, text)
            .map_err(|e| CliError::Numeric(format!("cannot write {}: {e}", path.display())))?;
        Ok(self.root)
    }
}
