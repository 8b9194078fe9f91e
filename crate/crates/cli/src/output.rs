//! Output plumbing: atomic file writes, config-embedding JSON and CSV
//! artifacts, machine-readable errors.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

/// Writes bytes atomically: temp file in the target directory, then
/// rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into()),
        std::process::id()
    ));
    if tmp == *path {
        tmp = dir.join(".corr1.tmp");
    }
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// JSON artifact: `{ "config": ..., "result": ... }`.
pub fn json_artifact<T: Serialize>(config: &Value, result: &T) -> Vec<u8> {
    let doc = json!({ "config": config, "result": result });
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("serializable");
    bytes.push(b'\n');
    bytes
}

/// CSV artifact with the full config embedded as a leading comment line.
pub fn csv_artifact(config: &Value, body: Vec<u8>) -> Vec<u8> {
    let mut out = format!("# config: {config}\n").into_bytes();
    out.extend(body);
    out
}

/// Machine-readable error on stderr.
pub fn emit_error(kind: &str, message: &str) {
    let doc = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{doc}");
}
