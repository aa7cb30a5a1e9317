//! Durable JSON-lines store for integral values, keyed by the canonical
//! monomial string. Writes are idempotent; a conflicting value for an
//! existing key is a hard integrity error; every line carries a checksum.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use tautring::rat::{q_parse, q_str};
use tautring::recursion::{CacheEntry, IntegralCache, IntegralKey, Provenance};

pub const CACHE_FILE: &str = "integrals.jsonl";

#[derive(Serialize, Deserialize, Debug, Clone)]
struct Line {
    n: u32,
    d: u32,
    mono: String,
    value: String,
    prov: Provenance,
    sum: String,
}

fn checksum(n: u32, d: u32, mono: &str, value: &str, prov: Provenance) -> String {
    let tag = match prov {
        Provenance::Recursion => "recursion",
        Provenance::Oracle => "oracle",
    };
    let mut h = Sha256::new();
    h.update(format!("{}|{}|{}|{}|{}", n, d, mono, value, tag));
    let digest = h.finalize();
    digest[..8].iter().map(|b| format!("{:02x}", b)).collect()
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(CACHE_FILE)
}

/// Load a cache file into the in-memory store. Corrupt lines (bad JSON or
/// checksum mismatch) and value conflicts are hard errors.
pub fn load(dir: &Path, cache: &IntegralCache) -> Result<usize> {
    let path = cache_path(dir);
    if !path.exists() {
        return Ok(0);
    }
    let data = fs::read_to_string(&path)
        .with_context(|| format!("reading cache file {}", path.display()))?;
    let mut loaded = 0;
    for (lineno, line) in data.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: Line = serde_json::from_str(line)
            .with_context(|| format!("corrupt cache line {} in {}", lineno + 1, path.display()))?;
        let want = checksum(entry.n, entry.d, &entry.mono, &entry.value, entry.prov);
        if want != entry.sum {
            bail!(
                "cache corruption: checksum mismatch at line {} of {}",
                lineno + 1,
                path.display()
            );
        }
        let value = q_parse(&entry.value)
            .with_context(|| format!("bad rational at line {}", lineno + 1))?;
        cache
            .store(
                IntegralKey {
                    n: entry.n,
                    d: entry.d,
                    mono: entry.mono,
                },
                value,
                entry.prov,
            )
            .map_err(|e| anyhow::anyhow!("{}", e))?;
        loaded += 1;
    }
    Ok(loaded)
}

/// Persist the store, sorted, rewriting the whole file (entry counts here
/// are small). The write goes through a temp file and a rename.
pub fn save(dir: &Path, cache: &IntegralCache) -> Result<usize> {
    fs::create_dir_all(dir)?;
    let entries = cache.entries();
    let path = cache_path(dir);
    let tmp = dir.join(format!("{}.tmp", CACHE_FILE));
    {
        let mut f = fs::File::create(&tmp)?;
        for e in &entries {
            let value = q_str(&e.value);
            let line = Line {
                n: e.key.n,
                d: e.key.d,
                mono: e.key.mono.clone(),
                value: value.clone(),
                prov: e.provenance,
                sum: checksum(e.key.n, e.key.d, &e.key.mono, &value, e.provenance),
            };
            writeln!(f, "{}", serde_json::to_string(&line)?)?;
        }
    }
    fs::rename(&tmp, &path)?;
    Ok(entries.len())
}

/// Stats used by the `cache` subcommand.
pub fn stats(entries: &[CacheEntry]) -> (usize, usize, usize) {
    let rec = entries
        .iter()
        .filter(|e| e.provenance == Provenance::Recursion)
        .count();
    let ora = entries
        .iter()
        .filter(|e| e.provenance == Provenance::Oracle)
        .count();
    (entries.len(), rec, ora)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tautring::rat::qi;

    #[test]
    fn store_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = IntegralCache::new();
        cache
            .store(
                IntegralKey {
                    n: 2,
                    d: 3,
                    mono: "th(2,1)^2*P(2)".into(),
                },
                qi(9),
                Provenance::Recursion,
            )
            .unwrap();
        let saved = save(dir.path(), &cache).unwrap();
        assert_eq!(saved, 1);

        let reload = IntegralCache::new();
        let loaded = load(dir.path(), &reload).unwrap();
        assert_eq!(loaded, 1);
        assert_eq!(
            reload.lookup(&IntegralKey {
                n: 2,
                d: 3,
                mono: "th(2,1)^2*P(2)".into()
            }),
            Some(qi(9))
        );
        // loading an absent key gives none
        assert_eq!(
            reload.lookup(&IntegralKey {
                n: 2,
                d: 3,
                mono: "absent".into()
            }),
            None
        );
    }

    #[test]
    fn conflicting_value_is_an_integrity_error() {
        let dir = tempfile::tempdir().unwrap();
        let cache = IntegralCache::new();
        let key = IntegralKey {
            n: 2,
            d: 3,
            mono: "th(2,1)^2*P(2)".into(),
        };
        cache.store(key.clone(), qi(9), Provenance::Recursion).unwrap();
        save(dir.path(), &cache).unwrap();

        let poisoned = IntegralCache::new();
        poisoned.store(key, qi(8), Provenance::Oracle).unwrap();
        assert!(load(dir.path(), &poisoned).is_err());
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = IntegralCache::new();
        cache
            .store(
                IntegralKey {
                    n: 1,
                    d: 3,
                    mono: "th(2,2)".into(),
                },
                qi(-1),
                Provenance::Recursion,
            )
            .unwrap();
        save(dir.path(), &cache).unwrap();
        let path = cache_path(dir.path());
        let data = fs::read_to_string(&path).unwrap().replace("-1", "-2");
        fs::write(&path, data).unwrap();
        assert!(load(dir.path(), &IntegralCache::new()).is_err());
    }
}
