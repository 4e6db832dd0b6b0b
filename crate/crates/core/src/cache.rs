//! On-disk cache of generated Weyl groups.
//!
//! One JSON file per type, `weyl-<type>-v<FORMAT_VERSION>.json`, holding the witness words in
//! canonical order. Permutations are rebuilt (and thereby validated) on load; a file that fails
//! validation is regenerated with a warning.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::LieType;
use crate::weyl::WeylGroup;

pub const FORMAT_VERSION: u32 = 1;
pub const ENV_VAR: &str = "TODA_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct Stored {
    format_version: u32,
    lie_type: String,
    words: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub file: String,
    pub bytes: u64,
}

#[derive(Debug, Clone)]
pub struct GroupCache {
    dir: PathBuf,
}

impl GroupCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        GroupCache { dir: dir.into() }
    }

    /// `$TODA_CACHE_DIR`, if set and nonempty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(GroupCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(ty: LieType) -> String {
        format!("weyl-{ty}-v{FORMAT_VERSION}.json")
    }

    fn path(&self, ty: LieType) -> PathBuf {
        self.dir.join(Self::key(ty))
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::Io { path: path.to_path_buf(), source }
    }

    /// Loads `ty` from the cache, generating and storing it when absent or corrupt.
    pub fn load_or_generate(&self, ty: LieType, cap: usize) -> Result<WeylGroup> {
        let path = self.path(ty);
        if path.exists() {
            match self.load(ty, &path) {
                Ok(g) => {
                    log::debug!("loaded W({ty}) from {}", path.display());
                    return Ok(g);
                }
                Err(e) => log::warn!("cache entry {} is unusable ({e}); regenerating", path.display()),
            }
        }
        let g = WeylGroup::generate_with_cap(ty, cap)?;
        self.store(&g)?;
        Ok(g)
    }

    fn load(&self, ty: LieType, path: &Path) -> Result<WeylGroup> {
        let text = fs::read_to_string(path).map_err(Self::io(path))?;
        let corrupt = |reason: String| Error::Corrupt { path: path.to_path_buf(), reason };
        let stored: Stored = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if stored.format_version != FORMAT_VERSION || stored.lie_type != ty.to_string() {
            return Err(corrupt(format!("header {} v{} does not match", stored.lie_type, stored.format_version)));
        }
        WeylGroup::from_witness_words(ty, &stored.words).map_err(|e| corrupt(e.to_string()))
    }

    pub fn store(&self, g: &WeylGroup) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(Self::io(&self.dir))?;
        let path = self.path(g.lie_type());
        let stored = Stored {
            format_version: FORMAT_VERSION,
            lie_type: g.lie_type().to_string(),
            words: g.witness_words(),
        };
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string(&stored).expect("plain data serializes");
        fs::write(&tmp, text).map_err(Self::io(&tmp))?;
        fs::rename(&tmp, &path).map_err(Self::io(&path))?;
        Ok(())
    }

    /// Cache files, sorted by name. A missing directory is an empty cache.
    pub fn list(&self) -> Result<Vec<CacheEntry>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir).map_err(Self::io(&self.dir))? {
            let entry = entry.map_err(Self::io(&self.dir))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.starts_with("weyl-") && name.ends_with(".json") {
                let bytes = entry.metadata().map_err(Self::io(&entry.path()))?.len();
                out.push(CacheEntry { file: name, bytes });
            }
        }
        out.sort_by(|a, b| a.file.cmp(&b.file));
        Ok(out)
    }

    /// Removes every cache file; returns how many were removed. Idempotent.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.list()?;
        for e in &entries {
            let p = self.dir.join(&e.file);
            fs::remove_file(&p).map_err(Self::io(&p))?;
        }
        Ok(entries.len())
    }
}

/// Generates a group, going through the cache when one is given.
pub fn group_for(ty: LieType, cap: usize, cache: Option<&GroupCache>) -> Result<WeylGroup> {
    match cache {
        Some(c) => c.load_or_generate(ty, cap),
        None => WeylGroup::generate_with_cap(ty, cap),
    }
}
