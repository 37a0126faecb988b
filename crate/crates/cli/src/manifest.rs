use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub nqscps: String,
    pub cli: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix: f64,
    pub elapsed_seconds: f64,
}

/// Everything needed to rerun a command: `nqscps replay <manifest>` parses
/// `arguments` again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command-line arguments after the program name.
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub versions: Versions,
    pub timing: Timing,
    pub outputs: Vec<PathBuf>,
}

pub struct Recorder {
    command: String,
    arguments: Vec<String>,
    started: SystemTime,
    clock: Instant,
}

impl Recorder {
    pub fn start(command: &str, arguments: &[String]) -> Self {
        Self {
            command: command.into(),
            arguments: arguments.to_vec(),
            started: SystemTime::now(),
            clock: Instant::now(),
        }
    }

    pub fn finish(self, seed: Option<u64>, outputs: Vec<PathBuf>) -> RunManifest {
        RunManifest {
            command: self.command,
            arguments: self.arguments,
            seed,
            versions: Versions {
                nqscps: nqscps::VERSION.into(),
                cli: env!("CARGO_PKG_VERSION").into(),
            },
            timing: Timing {
                started_unix: self.started.duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64()),
                elapsed_seconds: self.clock.elapsed().as_secs_f64(),
            },
            outputs,
        }
    }
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}

/// `model.json` → `model.json.manifest.json`.
pub fn beside(file: &Path) -> PathBuf {
    let mut name = file.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
