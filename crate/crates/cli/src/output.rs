use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::CliError;

/// Timing and invocation details kept out of the report so reports stay byte-identical.
#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    version: &'a str,
    argv: Vec<String>,
    report: String,
    started_unix_ms: u128,
    elapsed_ms: u128,
}

pub struct Sink {
    command: &'static str,
    out: Option<PathBuf>,
    started: SystemTime,
    clock: Instant,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl Sink {
    pub fn new(command: &'static str, out: Option<PathBuf>) -> Self {
        Sink {
            command,
            out,
            started: SystemTime::now(),
            clock: Instant::now(),
        }
    }

    pub fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    /// Writes the report to `--out` plus its sidecar, or to stdout.
    pub fn emit(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, bytes).map_err(|e| io_err(path, e))?;
                self.write_meta(path)
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(bytes)
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Io(format!("stdout: {e}")))
            }
        }
    }

    /// Writes a secondary artifact next to the main one, then the sidecar.
    pub fn emit_file(&self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(path, bytes).map_err(|e| io_err(path, e))?;
        self.write_meta(path)
    }

    pub fn stdout(&self, bytes: &[u8]) -> Result<(), CliError> {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))
    }

    fn write_meta(&self, path: &Path) -> Result<(), CliError> {
        let meta = Meta {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            argv: std::env::args().collect(),
            report: path.display().to_string(),
            started_unix_ms: self
                .started
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_millis()),
            elapsed_ms: self.clock.elapsed().as_millis(),
        };
        let mut name = path.as_os_str().to_owned();
        name.push(".meta.json");
        let meta_path = PathBuf::from(name);
        std::fs::write(&meta_path, to_json(&meta)).map_err(|e| io_err(&meta_path, e))
    }
}
