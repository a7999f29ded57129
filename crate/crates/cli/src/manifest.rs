use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

/// Record of one invocation. Kept apart from the reports so that those stay
/// byte-identical between runs with the same arguments.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a, C: Serialize> {
    pub command: String,
    pub config: &'a C,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub threads: usize,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<PathBuf>,
    /// Quantities that are not part of a report, such as measured constants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<serde_json::Value>,
    pub exit_code: i32,
}

pub fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Default manifest location next to a primary output file.
pub fn beside(path: &Path) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}

pub fn write<C: Serialize>(manifest: &RunManifest<'_, C>, target: Option<&Path>) -> std::io::Result<()> {
    match target {
        Some(path) => {
            let mut text = serde_json::to_string_pretty(manifest)?;
            text.push('\n');
            std::fs::write(path, text)
        }
        None => {
            let line = serde_json::to_string(manifest)?;
            writeln!(std::io::stderr().lock(), "{line}")
        }
    }
}
