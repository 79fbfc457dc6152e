//! JSON cache for tower representations.
//!
//! Only the parameters, modulus and generator are stored. Tables are rebuilt
//! on load and checked against the recorded checksum of the exponent table.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{FfError, FieldTower, TowerConfig};

pub const TOWER_CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TowerCacheFile {
    version: u32,
    p: u64,
    n: u32,
    #[serde(rename = "N")]
    ext_degree: u32,
    modulus: Vec<u32>,
    generator: Vec<u32>,
    checksum: String,
}

fn cache_path(dir: &Path, p: u64, n: u32, ext_degree: u32) -> PathBuf {
    dir.join(format!("tower-p{p}-n{n}-N{ext_degree}.json"))
}

impl FieldTower {
    /// Writes this tower's cache record into `dir`, returning the file path.
    pub fn save_cache(&self, dir: &Path) -> Result<PathBuf, FfError> {
        fs::create_dir_all(dir)?;
        let record = TowerCacheFile {
            version: TOWER_CACHE_VERSION,
            p: self.p(),
            n: self.base.n,
            ext_degree: self.ext_degree,
            modulus: self.modulus.clone(),
            generator: self.generator.clone(),
            checksum: self.checksum(),
        };
        let path = cache_path(dir, self.p(), self.base.n, self.ext_degree);
        let body = serde_json::to_string_pretty(&record)
            .map_err(|e| FfError::Cache(e.to_string()))?;
        fs::write(&path, body)?;
        Ok(path)
    }

    /// Loads a tower from a cache record, rebuilding and verifying its tables.
    pub fn load_cache(path: &Path, cfg: &TowerConfig) -> Result<Self, FfError> {
        let body = fs::read_to_string(path)?;
        let record: TowerCacheFile =
            serde_json::from_str(&body).map_err(|e| FfError::Cache(e.to_string()))?;
        if record.version != TOWER_CACHE_VERSION {
            return Err(FfError::Cache(format!(
                "unsupported version {} (expected {TOWER_CACHE_VERSION})",
                record.version
            )));
        }
        let tower = FieldTower::from_parts(
            record.p,
            record.n,
            record.ext_degree,
            record.modulus,
            record.generator,
            cfg,
        )?;
        if tower.checksum() != record.checksum {
            return Err(FfError::Cache("log-table checksum mismatch".into()));
        }
        Ok(tower)
    }

    /// Reuses a cached tower from `dir` when present, otherwise builds and
    /// caches a fresh one.
    pub fn load_or_build(
        dir: &Path,
        p: u64,
        n: u32,
        ext_degree: u32,
        cfg: &TowerConfig,
    ) -> Result<Self, FfError> {
        let path = cache_path(dir, p, n, ext_degree);
        if path.exists() {
            return Self::load_cache(&path, cfg);
        }
        let tower = Self::build_with(p, n, ext_degree, cfg)?;
        tower.save_cache(dir)?;
        Ok(tower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = TowerConfig::default();
        let built = FieldTower::load_or_build(dir.path(), 5, 1, 3, &cfg).unwrap();
        let path = cache_path(dir.path(), 5, 1, 3);
        assert!(path.exists());
        let loaded = FieldTower::load_or_build(dir.path(), 5, 1, 3, &cfg).unwrap();
        assert_eq!(built.checksum(), loaded.checksum());
        assert_eq!(built.info(), loaded.info());
    }

    #[test]
    fn tampered_checksum_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let tower = FieldTower::build(3, 1, 4).unwrap();
        let path = tower.save_cache(dir.path()).unwrap();
        let body = fs::read_to_string(&path).unwrap();
        let mut record: TowerCacheFile = serde_json::from_str(&body).unwrap();
        record.checksum = "00".repeat(32);
        fs::write(&path, serde_json::to_string(&record).unwrap()).unwrap();
        let err = FieldTower::load_cache(&path, &TowerConfig::default()).unwrap_err();
        assert!(err.to_string().contains("checksum"));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let tower = FieldTower::build(3, 1, 2).unwrap();
        let path = tower.save_cache(dir.path()).unwrap();
        let body = fs::read_to_string(&path)
            .unwrap()
            .replace("\"version\": 1", "\"version\": 99");
        fs::write(&path, body).unwrap();
        assert!(matches!(
            FieldTower::load_cache(&path, &TowerConfig::default()),
            Err(FfError::Cache(_))
        ));
    }
}
