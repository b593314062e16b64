//! On-disk report cache. Each entry is `sha256:<hex of body>\n<body>`,
//! written to a temporary file and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

pub const CACHE_ENV: &str = "CFTLAB_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> anyhow::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Self { dir })
    }

    /// `$CFTLAB_CACHE_DIR`, else `$HOME/.cache/cftlab`, else a temp dir.
    pub fn from_env() -> anyhow::Result<Self> {
        let dir = match std::env::var_os(CACHE_ENV) {
            Some(d) => PathBuf::from(d),
            None => match std::env::var_os("HOME") {
                Some(h) => Path::new(&h).join(".cache").join("cftlab"),
                None => std::env::temp_dir().join("cftlab-cache"),
            },
        };
        Self::new(dir)
    }

    pub fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.entry"))
    }

    /// The cached body, or `None` if absent or its hash does not verify.
    pub fn load(&self, key: &str) -> Option<Vec<u8>> {
        let raw = fs::read(self.entry_path(key)).ok()?;
        let nl = raw.iter().position(|&b| b == b'\n')?;
        let header = std::str::from_utf8(&raw[..nl]).ok()?;
        let body = &raw[nl + 1..];
        let expected = header.strip_prefix("sha256:")?;
        if hex::encode(Sha256::digest(body)) != expected {
            return None;
        }
        Some(body.to_vec())
    }

    pub fn store(&self, key: &str, body: &[u8]) -> anyhow::Result<()> {
        let mut entry = format!("sha256:{}\n", hex::encode(Sha256::digest(body))).into_bytes();
        entry.extend_from_slice(body);
        write_atomic(&self.entry_path(key), &entry)
    }
}

/// Writes `bytes` to a temp file next to `path` and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp =
        NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        assert!(cache.load("k").is_none());
        cache.store("k", b"{\"a\": 1}\n").unwrap();
        assert_eq!(cache.load("k").unwrap(), b"{\"a\": 1}\n");
        let path = cache.entry_path("k");
        let mut raw = fs::read(&path).unwrap();
        let last = raw.len() - 2;
        raw[last] = b'2';
        fs::write(&path, raw).unwrap();
        assert!(cache.load("k").is_none());
    }
}
