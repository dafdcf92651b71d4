//! Memoization of reduced Gröbner bases keyed by the generating ideal.

use std::collections::HashMap;

use parking_lot::Mutex;

use super::groebner::{groebner, GroebnerBasis, Ideal};

/// Storage for reduced bases. Writes are idempotent: every key maps to a
/// unique reduced basis, so concurrent writers store equal values.
pub trait GroebnerCache: Send + Sync {
    fn get(&self, key: &str) -> Option<GroebnerBasis>;
    fn put(&self, key: &str, basis: &GroebnerBasis);
}

/// Canonical text of an ideal: order tag, variable count and generators.
pub fn ideal_key(ideal: &Ideal) -> String {
    let mut s = format!("{};{}", ideal.order.tag(), ideal.nvars);
    for g in &ideal.generators {
        s.push(';');
        s.push_str(&g.to_string());
    }
    s
}

pub fn cached_groebner(ideal: &Ideal, cache: Option<&dyn GroebnerCache>) -> GroebnerBasis {
    let Some(cache) = cache else {
        return groebner(ideal);
    };
    let key = ideal_key(ideal);
    if let Some(gb) = cache.get(&key) {
        return gb;
    }
    let gb = groebner(ideal);
    cache.put(&key, &gb);
    gb
}

#[derive(Debug, Default)]
pub struct MemoryCache {
    map: Mutex<HashMap<String, GroebnerBasis>>,
}

impl MemoryCache {
    pub fn new() -> MemoryCache {
        MemoryCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.lock().is_empty()
    }
}

impl GroebnerCache for MemoryCache {
    fn get(&self, key: &str) -> Option<GroebnerBasis> {
        self.map.lock().get(key).cloned()
    }

    fn put(&self, key: &str, basis: &GroebnerBasis) {
        self.map.lock().entry(key.to_string()).or_insert_with(|| basis.clone());
    }
}
