use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CartierError, Result};
use crate::filtration::GridMemo;
use crate::fpmod::SubmoduleRecord;
use crate::rational::{fmt_rat, Rat};

pub const ENGINE_VERSION: &str = concat!("cartier-", env!("CARGO_PKG_VERSION"), "/cache-1");

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CacheEntry {
    engine: String,
    key: String,
    value: serde_json::Value,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub stale: usize,
    pub corrupted: usize,
    pub verified: usize,
}

/// Content-addressed store of canonical result JSON.
#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    engine: String,
    pub stats: CacheStats,
    pub warnings: Vec<String>,
}

/// sha256 over the canonical serialization of `parts`, prefixed with the engine version.
pub fn cache_key(engine: &str, parts: &serde_json::Value) -> String {
    let mut h = Sha256::new();
    h.update(engine.as_bytes());
    h.update([0u8]);
    h.update(parts.to_string().as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        Cache::with_engine(dir, ENGINE_VERSION)
    }

    pub fn with_engine(dir: &Path, engine: &str) -> Result<Cache> {
        fs::create_dir_all(dir).map_err(|e| CartierError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Cache { dir: dir.to_path_buf(), engine: engine.to_string(), stats: CacheStats::default(), warnings: Vec::new() })
    }

    pub fn key(&self, parts: &serde_json::Value) -> String {
        cache_key(&self.engine, parts)
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    /// Cached value for `key`. Entries from other engine versions are ignored; unreadable
    /// entries are reported as warnings and treated as missing.
    pub fn lookup(&mut self, key: &str) -> Result<Option<serde_json::Value>> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                self.stats.misses += 1;
                return Ok(None);
            }
            Err(e) => return Err(CartierError::Io(format!("{}: {e}", path.display()))),
        };
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) if entry.key == key && entry.engine == self.engine => {
                self.stats.hits += 1;
                Ok(Some(entry.value))
            }
            Ok(entry) if entry.key == key => {
                self.stats.stale += 1;
                self.stats.misses += 1;
                Ok(None)
            }
            _ => {
                let msg = format!("corrupted cache entry {}; recomputing", path.display());
                log::warn!("{msg}");
                self.warnings.push(msg);
                self.stats.corrupted += 1;
                self.stats.misses += 1;
                Ok(None)
            }
        }
    }

    /// Writes to a temporary file in the target directory and renames it into place.
    pub fn store(&mut self, key: &str, value: &serde_json::Value) -> Result<()> {
        let path = self.path(key);
        let parent = path.parent().expect("cache paths have a parent");
        let io = |e: std::io::Error| CartierError::Io(format!("{}: {e}", path.display()));
        fs::create_dir_all(parent).map_err(io)?;
        let entry = CacheEntry { engine: self.engine.clone(), key: key.to_string(), value: value.clone() };
        let body = serde_json::to_string(&entry).map_err(|e| CartierError::Io(e.to_string()))?;
        let nonce = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
        let tmp = parent.join(format!(".{key}.{}.{nonce}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(body.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Cached value, or the computed one stored for next time. With `verify`, hits whose key
    /// falls in a fixed 1/8 sample are recomputed and compared.
    pub fn get_or_compute(
        &mut self,
        parts: &serde_json::Value,
        verify: bool,
        compute: impl FnOnce() -> Result<serde_json::Value>,
    ) -> Result<serde_json::Value> {
        let key = self.key(parts);
        if let Some(v) = self.lookup(&key)? {
            if !(verify && key.as_bytes()[0].is_multiple_of(8)) {
                return Ok(v);
            }
            let fresh = compute()?;
            self.stats.verified += 1;
            if fresh != v {
                let msg = format!("cache entry {key} differs from recomputation; overwriting");
                log::warn!("{msg}");
                self.warnings.push(msg);
                self.store(&key, &fresh)?;
            }
            return Ok(fresh);
        }
        let v = compute()?;
        self.store(&key, &v)?;
        Ok(v)
    }
}

/// Grid values of a jump sweep, keyed by the task fragment and the parameter.
pub struct CacheMemo<'a> {
    pub cache: &'a mut Cache,
    pub fragment: serde_json::Value,
    pub errors: Vec<String>,
}

impl CacheMemo<'_> {
    fn key(&self, t: &Rat) -> String {
        self.cache.key(&serde_json::json!({ "grid": self.fragment, "t": fmt_rat(t) }))
    }
}

impl GridMemo for CacheMemo<'_> {
    fn lookup(&mut self, t: &Rat) -> Option<SubmoduleRecord> {
        let key = self.key(t);
        match self.cache.lookup(&key) {
            Ok(Some(v)) => match serde_json::from_value(v) {
                Ok(rec) => Some(rec),
                Err(_) => {
                    self.cache.warnings.push(format!("grid entry {key} has the wrong shape; recomputing"));
                    self.cache.stats.corrupted += 1;
                    None
                }
            },
            Ok(None) => None,
            Err(e) => {
                self.errors.push(e.to_string());
                None
            }
        }
    }

    fn store(&mut self, t: &Rat, value: &SubmoduleRecord) {
        let key = self.key(t);
        let v = serde_json::to_value(value).expect("records serialize");
        if let Err(e) = self.cache.store(&key, &v) {
            self.errors.push(e.to_string());
        }
    }
}
