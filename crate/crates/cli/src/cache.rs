//! On-disk cache of symbolic coordinate maps.

use std::fs;
use std::path::PathBuf;

use isogeo::embed::{PolyMap, Variety};
use serde_json::{json, Value};

/// Bumped whenever the serialized map layout changes.
pub const FORMAT_VERSION: u64 = 1;

pub struct MapCache {
    dir: Option<PathBuf>,
}

impl MapCache {
    /// `$ISOGEO_CACHE_DIR`, else `~/.cache/isogeo`; no cache without either.
    pub fn from_env() -> Self {
        let dir = std::env::var_os("ISOGEO_CACHE_DIR")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("isogeo")));
        MapCache { dir }
    }

    #[cfg(test)]
    pub fn at(dir: PathBuf) -> Self {
        MapCache { dir: Some(dir) }
    }

    fn path(&self, variety: Variety, n: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("polymap-{}-{n}.json", variety.cli_name())))
    }

    fn read(&self, variety: Variety, n: usize) -> Option<PolyMap> {
        let text = fs::read_to_string(self.path(variety, n)?).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("format_version")?.as_u64()? != FORMAT_VERSION {
            return None;
        }
        let map = PolyMap::from_json(v.get("map")?).ok()?;
        (map.variety() == variety && map.n() == n).then_some(map)
    }

    /// Loads the map, rebuilding and rewriting it when missing or stale.
    /// Write failures only cost the cache.
    pub fn load(&self, variety: Variety, n: usize) -> PolyMap {
        if let Some(m) = self.read(variety, n) {
            return m;
        }
        let map = PolyMap::build(variety, n);
        if let (Some(dir), Some(path)) = (&self.dir, self.path(variety, n)) {
            let body = json!({ "format_version": FORMAT_VERSION, "map": map.to_json() });
            let tmp = path.with_extension(format!("tmp{}", std::process::id()));
            let written = fs::create_dir_all(dir).and_then(|_| fs::write(&tmp, body.to_string())).and_then(|_| fs::rename(&tmp, &path));
            if written.is_err() {
                let _ = fs::remove_file(&tmp);
            }
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stale_entries_are_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MapCache::at(dir.path().to_path_buf());
        let built = cache.load(Variety::Lg, 3);
        let path = cache.path(Variety::Lg, 3).unwrap();
        assert!(path.exists());
        assert_eq!(cache.read(Variety::Lg, 3).unwrap(), built);
        fs::write(&path, json!({ "format_version": 0, "map": built.to_json() }).to_string()).unwrap();
        assert!(cache.read(Variety::Lg, 3).is_none());
        assert_eq!(cache.load(Variety::Lg, 3), built);
        assert!(cache.read(Variety::Lg, 3).is_some());
    }
}
