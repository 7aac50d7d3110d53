use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Wraps `body` with the resolved config and its digest.
pub fn envelope(cfg: &ExperimentConfig, command: &str, body: Value) -> Value {
    json!({
        "command": command,
        "config": cfg,
        "config_sha256": cfg.digest(),
        "result": body,
    })
}

/// Writes every file only after all of them are rendered, so a failure
/// while rendering leaves no partial output behind.
pub fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for (name, text) in files {
        let tmp = dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, dir.join(name))?;
    }
    Ok(())
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
