//! Content-addressed on-disk store of reduced Gröbner bases.

use std::fs;
use std::path::{Path, PathBuf};

use qsheaf_core::poly::cache::GroebnerCache;
use qsheaf_core::poly::{parse_polynomial, GroebnerBasis, MonomialOrder, Polynomial};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Stored {
    key: String,
    nvars: usize,
    order: String,
    polys: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FileCache {
    dir: PathBuf,
}

/// `QSHEAF_CACHE`, else `$XDG_CACHE_HOME/qsheaf`, else `~/.cache/qsheaf`.
pub fn default_dir() -> Option<PathBuf> {
    let env = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    env("QSHEAF_CACHE")
        .or_else(|| env("XDG_CACHE_HOME").map(|p| p.join("qsheaf")))
        .or_else(|| env("HOME").map(|p| p.join(".cache").join("qsheaf")))
}

fn parse_order(tag: &str) -> Option<MonomialOrder> {
    if tag == "grevlex" {
        return Some(MonomialOrder::GrevLex);
    }
    let split = tag.strip_prefix("block-grevlex:")?.parse().ok()?;
    Some(MonomialOrder::BlockGrevLex { split })
}

impl FileCache {
    pub fn new(dir: impl Into<PathBuf>) -> FileCache {
        FileCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    fn decode(key: &str, text: &str) -> Option<GroebnerBasis> {
        let s: Stored = serde_json::from_str(text).ok()?;
        if s.key != key {
            return None;
        }
        let order = parse_order(&s.order)?;
        let n = s.nvars;
        let lookup = |name: &str| {
            let i: usize = name.strip_prefix("psi")?.parse().ok()?;
            (1..=n).contains(&i).then(|| Polynomial::var(n, i - 1))
        };
        let polys = s
            .polys
            .iter()
            .map(|p| parse_polynomial(p, n, &lookup).ok())
            .collect::<Option<Vec<_>>>()?;
        Some(GroebnerBasis::from_reduced(n, order, polys))
    }
}

impl GroebnerCache for FileCache {
    fn get(&self, key: &str) -> Option<GroebnerBasis> {
        // unreadable or foreign entries count as misses
        let text = fs::read_to_string(self.path(key)).ok()?;
        FileCache::decode(key, &text)
    }

    fn put(&self, key: &str, basis: &GroebnerBasis) {
        let stored = Stored {
            key: key.to_string(),
            nvars: basis.nvars(),
            order: basis.order().tag(),
            polys: basis.polys().iter().map(|p| p.to_string()).collect(),
        };
        let Ok(text) = serde_json::to_string(&stored) else { return };
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let target = self.path(key);
        let tmp = target.with_extension(format!("tmp.{}.{:?}", std::process::id(), std::thread::current().id()));
        if fs::write(&tmp, text).is_ok() && fs::rename(&tmp, &target).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}
