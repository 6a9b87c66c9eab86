//! Memoization of key polynomials and Kostka tables, with an optional disk
//! layer controlled by the ASK_CACHE_DIR environment variable (read once).
//! Disk entries are advisory: unreadable or stale files are rebuilt in place.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::combinatorics::{trim, KostkaTables, Partition};
use crate::poly::QPolynomial;

pub struct KeyCache {
    mem: Mutex<HashMap<Vec<u32>, QPolynomial>>,
    dir: Option<PathBuf>,
}

static GLOBAL: Lazy<KeyCache> =
    Lazy::new(|| KeyCache::new(std::env::var_os("ASK_CACHE_DIR").map(PathBuf::from)));

impl KeyCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        KeyCache { mem: Mutex::new(HashMap::new()), dir }
    }

    pub fn global() -> &'static KeyCache {
        &GLOBAL
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Memoized lookup keyed by the reduced composition. The computation runs
    /// outside the lock; a concurrent duplicate is harmless.
    pub fn get_or_compute(
        &self,
        alpha: &[u32],
        compute: impl FnOnce() -> QPolynomial,
    ) -> QPolynomial {
        let key = trim(alpha);
        if let Some(hit) = self.mem.lock().unwrap().get(&key) {
            return hit.clone();
        }
        if !key.is_empty() {
            if let Some(poly) = self.load_key(&key) {
                self.mem.lock().unwrap().insert(key, poly.clone());
                return poly;
            }
        }
        let poly = compute();
        if !key.is_empty() {
            self.store_key(&key, &poly);
        }
        self.mem.lock().unwrap().insert(key, poly.clone());
        poly
    }

    fn key_path(dir: &Path, key: &[u32]) -> PathBuf {
        let parts: Vec<String> = key.iter().map(|p| p.to_string()).collect();
        dir.join(format!("key_{}.json", parts.join("_")))
    }

    fn load_key(&self, key: &[u32]) -> Option<QPolynomial> {
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(Self::key_path(dir, key)).ok()?;
        let value: serde_json::Value = serde_json::from_str(&text).ok()?;
        QPolynomial::from_json(&value).ok()
    }

    fn store_key(&self, key: &[u32], poly: &QPolynomial) {
        let Some(dir) = self.dir.as_ref() else { return };
        let _ = fs::create_dir_all(dir);
        let _ = fs::write(Self::key_path(dir, key), poly.to_json().to_string());
    }
}

fn kostka_path(dir: &Path, d: u32) -> PathBuf {
    dir.join(format!("kostka_{d}.json"))
}

fn kostka_to_json(t: &KostkaTables) -> serde_json::Value {
    serde_json::json!({
        "index": t.index.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(),
        "kostka": t.kostka,
        "inverse": t.inverse,
    })
}

fn kostka_from_json(value: &serde_json::Value, d: u32) -> Option<KostkaTables> {
    let index: Vec<Partition> = value["index"]
        .as_array()?
        .iter()
        .map(|row| {
            let parts: Option<Vec<u32>> = row
                .as_array()?
                .iter()
                .map(|x| x.as_u64().map(|v| v as u32))
                .collect();
            Partition::new(parts?)
        })
        .collect::<Option<_>>()?;
    if index.iter().any(|p| p.size() != d) || !index.windows(2).all(|w| w[0] < w[1]) {
        return None;
    }
    let parse_matrix = |key: &str| -> Option<Vec<Vec<i64>>> {
        let rows = value[key].as_array()?;
        if rows.len() != index.len() {
            return None;
        }
        rows.iter()
            .map(|row| {
                let row = row.as_array()?;
                if row.len() != index.len() {
                    return None;
                }
                row.iter().map(|x| x.as_i64()).collect()
            })
            .collect()
    };
    let kostka = parse_matrix("kostka")?;
    let inverse = parse_matrix("inverse")?;
    Some(KostkaTables { index, kostka, inverse })
}

fn load_kostka(path: &Path, d: u32) -> Option<KostkaTables> {
    let text = fs::read_to_string(path).ok()?;
    let value: serde_json::Value = serde_json::from_str(&text).ok()?;
    kostka_from_json(&value, d)
}

pub(crate) fn load_or_build_kostka(d: u32, build: fn(u32) -> KostkaTables) -> KostkaTables {
    let Some(dir) = KeyCache::global().cache_dir() else {
        return build(d);
    };
    let path = kostka_path(dir, d);
    if let Some(tables) = load_kostka(&path, d) {
        return tables;
    }
    let tables = build(d);
    let _ = fs::create_dir_all(dir);
    let _ = fs::write(&path, kostka_to_json(&tables).to_string());
    tables
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::build_kostka_tables;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn sample_poly() -> QPolynomial {
        QPolynomial::monomial(&[2, 1], BigRational::from_integer(BigInt::from(3)))
            .add(&QPolynomial::monomial(&[0, 0, 1], BigRational::new(1.into(), 2.into())))
    }

    #[test]
    fn memoizes_in_memory() {
        let cache = KeyCache::new(None);
        let p = cache.get_or_compute(&[2, 1], sample_poly);
        assert_eq!(p, sample_poly());
        let again = cache.get_or_compute(&[2, 1], || panic!("must hit the memo"));
        assert_eq!(again, sample_poly());
        // Trailing zeros share the entry.
        let padded = cache.get_or_compute(&[2, 1, 0, 0], || panic!("must hit the memo"));
        assert_eq!(padded, sample_poly());
    }

    #[test]
    fn roundtrips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let first = KeyCache::new(Some(dir.path().to_path_buf()));
        first.get_or_compute(&[1, 3], sample_poly);

        let second = KeyCache::new(Some(dir.path().to_path_buf()));
        let loaded = second.get_or_compute(&[1, 3], || panic!("must load from disk"));
        assert_eq!(loaded, sample_poly());
    }

    #[test]
    fn corrupted_entries_are_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let path = KeyCache::key_path(dir.path(), &[4]);
        fs::write(&path, "not json at all").unwrap();
        let cache = KeyCache::new(Some(dir.path().to_path_buf()));
        let p = cache.get_or_compute(&[4], sample_poly);
        assert_eq!(p, sample_poly());
        // The bad file was overwritten with a loadable one.
        let fresh = KeyCache::new(Some(dir.path().to_path_buf()));
        assert_eq!(fresh.get_or_compute(&[4], || panic!("rebuilt")), sample_poly());
    }

    #[test]
    fn kostka_tables_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let built = build_kostka_tables(4);
        let path = kostka_path(dir.path(), 4);
        fs::write(&path, kostka_to_json(&built).to_string()).unwrap();
        let loaded = load_kostka(&path, 4).expect("loadable");
        assert_eq!(loaded.index, built.index);
        assert_eq!(loaded.kostka, built.kostka);
        assert_eq!(loaded.inverse, built.inverse);
        // Degree mismatch is rejected rather than trusted.
        assert!(load_kostka(&path, 5).is_none());
    }
}
