//! On-disk cache of lattices and census reports, one JSON file per group.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dessins_core::census::{census_with_lattice, dessin_census, Census, CensusReport};
use dessins_core::error::{DessinError, Result};
use dessins_core::group::GroupHandle;
use dessins_core::lattice::LatticeRecord;
use dessins_core::report::SCHEMA_VERSION;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    descriptor: String,
    lattice: LatticeRecord,
    census: CensusReport,
}

pub fn cache_path(dir: &Path, descriptor: &str) -> PathBuf {
    dir.join(format!("{descriptor}.v{SCHEMA_VERSION}.json"))
}

fn load(path: &Path, descriptor: &str, group: &Arc<GroupHandle>) -> Result<Census> {
    let text = fs::read_to_string(path).map_err(|e| DessinError::Corrupt(e.to_string()))?;
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| DessinError::Corrupt(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION || file.descriptor != descriptor {
        return Err(DessinError::Corrupt("cache key mismatch".into()));
    }
    let (lattice, moebius) = file.lattice.restore(group)?;
    let census = census_with_lattice(group.clone(), lattice, moebius)?;
    if census.report() != &file.census {
        return Err(DessinError::Corrupt(
            "cached census differs from its lattice".into(),
        ));
    }
    Ok(census)
}

fn store(path: &Path, descriptor: &str, census: &Census) -> std::io::Result<()> {
    let moebius = census.moebius();
    let file = CacheFile {
        schema_version: SCHEMA_VERSION,
        descriptor: descriptor.to_string(),
        lattice: LatticeRecord::new(census.lattice(), moebius),
        census: census.report().clone(),
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(tmp, path)
}

/// Census of `group`, reusing a valid cache entry. Unreadable or
/// inconsistent entries are reported through `warn` and recomputed.
pub fn load_or_compute(
    group: Arc<GroupHandle>,
    descriptor: &str,
    dir: Option<&Path>,
    warn: &mut dyn FnMut(String),
) -> Result<Census> {
    let Some(dir) = dir else {
        return dessin_census(group);
    };
    let path = cache_path(dir, descriptor);
    if path.exists() {
        match load(&path, descriptor, &group) {
            Ok(census) => return Ok(census),
            Err(e) => warn(format!(
                "cache entry {} is unusable ({e}); recomputing",
                path.display()
            )),
        }
    }
    let census = dessin_census(group)?;
    if let Err(e) = store(&path, descriptor, &census) {
        warn(format!(
            "could not write cache entry {}: {e}",
            path.display()
        ));
    }
    Ok(census)
}
