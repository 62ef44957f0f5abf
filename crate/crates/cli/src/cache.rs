//! Run records keyed by the SHA-256 of the canonical configuration.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "WEYL_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".weyl-cache";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub wall_time_secs: f64,
    pub config: Value,
    pub outputs: Value,
}

/// `serde_json::Value` keeps object keys sorted, so its compact form is canonical.
pub fn canonical(config: &Value) -> String {
    serde_json::to_string(config).expect("JSON values always serialize")
}

pub fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(canonical(config).as_bytes()))
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn record_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("{hash}.json"))
}

/// A stored record for `hash` written by this version, if readable.
pub fn load(dir: &Path, hash: &str, version: &str) -> Option<RunRecord> {
    let text = fs::read_to_string(record_path(dir, hash)).ok()?;
    let record: RunRecord = serde_json::from_str(&text).ok()?;
    (record.config_hash == hash && record.version == version).then_some(record)
}

pub fn store(dir: &Path, record: &RunRecord) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = record_path(dir, &record.config_hash);
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec_pretty(record).expect("record serializes"))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
