//! On-disk cache of density functions keyed by (ring hash, p, n, view).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hkd_core::densityfn::{StepFunction, View};
use serde::{Deserialize, Serialize};

/// Bumped whenever the stored layout or the meaning of an entry changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub ring_hash: String,
    pub prime: u64,
    pub power: u32,
    pub view: View,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    format_version: u32,
    key: CacheKey,
    value: StepFunction,
}

pub struct Cache {
    root: PathBuf,
    verify: bool,
}

impl Cache {
    pub fn new(root: &Path, verify: bool) -> Self {
        Cache {
            root: root.join(format!("v{FORMAT_VERSION}")),
            verify,
        }
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.root
            .join(&key.ring_hash)
            .join(format!("p{}-n{}-{}.json", key.prime, key.power, key.view))
    }

    /// Unreadable, stale or mismatched entries count as misses.
    fn load(&self, key: &CacheKey) -> Option<StepFunction> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.format_version == FORMAT_VERSION && &entry.key == key).then_some(entry.value)
    }

    /// Write to a temporary file next to the target, then rename over it, so
    /// readers never see a partial entry.
    fn store(&self, key: &CacheKey, value: &StepFunction) -> Result<()> {
        let path = self.path(key);
        let dir = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let entry = CacheEntry {
            format_version: FORMAT_VERSION,
            key: key.clone(),
            value: value.clone(),
        };
        let tmp = dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().unwrap().to_string_lossy(),
            std::process::id()
        ));
        let mut file = fs::File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
        file.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, &path).with_context(|| format!("renaming into {}", path.display()))?;
        Ok(())
    }

    /// Cached value for `key`, or `compute()` stored under it. With
    /// verification on, a hit is recomputed and must serialize identically.
    pub fn get_or_compute(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> hkd_core::Result<StepFunction>,
    ) -> Result<StepFunction> {
        if let Some(hit) = self.load(key) {
            if !self.verify {
                return Ok(hit);
            }
            let fresh = compute()?;
            if fresh.to_json() != hit.to_json() {
                bail!("cache entry {} differs from recomputation", self.path(key).display());
            }
            return Ok(hit);
        }
        let value = compute()?;
        self.store(key, &value)?;
        Ok(value)
    }
}
