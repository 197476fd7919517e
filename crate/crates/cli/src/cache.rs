//! On-disk result cache keyed by command, canonical parameters and schema
//! version.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever an algorithm change could alter a cached payload.
pub const SCHEMA_VERSION: u32 = 1;

pub const CACHE_DIR_ENV: &str = "CONFSTAT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub command: String,
    pub params: String,
    pub schema: u32,
}

impl CacheKey {
    pub fn new(command: &str, params: &Value) -> Self {
        Self {
            command: command.to_string(),
            params: serde_json::to_string(params).expect("params serialize"),
            schema: SCHEMA_VERSION,
        }
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.schema.to_le_bytes());
        h.update(self.command.as_bytes());
        h.update([0]);
        h.update(self.params.as_bytes());
        format!("{:x}", h.finalize())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub command: String,
    pub params: String,
    pub schema: u32,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub value: Value,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `CONFSTAT_CACHE_DIR`, then the explicit directory, then
    /// `$XDG_CACHE_HOME/confstat`, then `~/.cache/confstat`.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        let nonempty = |v: std::ffi::OsString| (!v.is_empty()).then(|| PathBuf::from(v));
        std::env::var_os(CACHE_DIR_ENV)
            .and_then(nonempty)
            .or_else(|| explicit.map(Path::to_path_buf))
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").and_then(nonempty).map(|d| d.join("confstat")))
            .or_else(|| std::env::var_os("HOME").and_then(nonempty).map(|d| d.join(".cache").join("confstat")))
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// A stored value for `key`; entries from another schema or with a
    /// mismatched key are ignored.
    pub fn get(&self, key: &CacheKey) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.schema == key.schema && entry.command == key.command && entry.params == key.params).then_some(entry)
    }

    /// Writes through a temporary file renamed into place.
    pub fn put(&self, key: &CacheKey, value: &Value) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating cache directory {}", self.dir.display()))?;
        let entry = CacheEntry {
            command: key.command.clone(),
            params: key.params.clone(),
            schema: key.schema,
            created_at: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            value: value.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(key)).context("renaming cache entry into place")?;
        Ok(())
    }
}
