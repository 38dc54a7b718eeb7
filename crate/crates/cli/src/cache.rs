//! On-disk Gröbner basis cache.
//!
//! One JSON file `{version, checksum, entries}`; `checksum` is the SHA-256 of the serialized
//! `entries` object. Entries are keyed by the hash of ring fingerprint, generators and order.
//! A file that fails to parse or to match its checksum is ignored with a warning.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use shriek_core::groebner::GroebnerBasis;
use shriek_core::{ModuleOrder, Poly, Ring, TermOrder};

use crate::sha256_hex;

pub const VERSION: u64 = 1;

#[derive(Debug, Default)]
pub struct Cache {
    path: Option<PathBuf>,
    entries: Map<String, Value>,
    dirty: bool,
    pub hits: usize,
    pub misses: usize,
    pub warnings: Vec<String>,
}

pub fn key(ring: &Ring, generators: &[Poly], order: TermOrder) -> String {
    let gens: Vec<String> = generators.iter().map(|g| ring.format(g)).collect();
    sha256_hex(format!("{}\n{}\n{}", ring.fingerprint(), gens.join(","), order.name()).as_bytes())
}

fn entries_checksum(entries: &Map<String, Value>) -> String {
    sha256_hex(Value::Object(entries.clone()).to_string().as_bytes())
}

impl Cache {
    /// An in-memory cache that is never written.
    pub fn disabled() -> Cache {
        Cache::default()
    }

    pub fn load(path: &Path) -> Cache {
        let mut cache = Cache { path: Some(path.to_path_buf()), ..Cache::default() };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return cache,
            Err(e) => {
                cache.warnings.push(format!("CorruptCache: cannot read {}: {e}", path.display()));
                return cache;
            }
        };
        match Self::decode(&text) {
            Ok(entries) => cache.entries = entries,
            Err(why) => {
                cache.warnings.push(format!("CorruptCache: {} ({why}); recomputing", path.display()));
                cache.dirty = true;
            }
        }
        cache
    }

    fn decode(text: &str) -> Result<Map<String, Value>, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if v.get("version").and_then(Value::as_u64) != Some(VERSION) {
            return Err("unsupported version".into());
        }
        let entries = v.get("entries").and_then(Value::as_object).ok_or("missing entries")?.clone();
        let sum = v.get("checksum").and_then(Value::as_str).ok_or("missing checksum")?;
        if sum != entries_checksum(&entries) {
            return Err("checksum mismatch".into());
        }
        Ok(entries)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A cached basis, validated as a reduced Gröbner basis of the requested order.
    pub fn lookup(&mut self, ring: &Ring, generators: &[Poly], order: TermOrder) -> Option<GroebnerBasis> {
        let k = key(ring, generators, order);
        let found = self.entries.get(&k).and_then(|e| decode_entry(ring, order, e));
        if found.is_some() {
            self.hits += 1;
        } else {
            if self.entries.remove(&k).is_some() {
                self.warnings.push(format!("CorruptCache: entry {} is invalid; recomputing", &k[..12]));
                self.dirty = true;
            }
            self.misses += 1;
        }
        found
    }

    pub fn store(&mut self, ring: &Ring, generators: &[Poly], order: TermOrder, gb: &GroebnerBasis) {
        let k = key(ring, generators, order);
        let entry = json!({
            "ring": ring.fingerprint(),
            "order": order.name(),
            "generators": generators.iter().map(|g| ring.format(g)).collect::<Vec<_>>(),
            "basis": gb.polys().iter().map(|g| ring.format(g)).collect::<Vec<_>>(),
        });
        if self.entries.get(&k) != Some(&entry) {
            self.entries.insert(k, entry);
            self.dirty = true;
        }
    }

    /// Lookup, falling back to computing and storing.
    pub fn basis(&mut self, ring: &Ring, generators: &[Poly], order: TermOrder) -> (GroebnerBasis, bool) {
        if let Some(gb) = self.lookup(ring, generators, order) {
            return (gb, true);
        }
        let gb = GroebnerBasis::ideal(ring.nvars(), order, generators);
        self.store(ring, generators, order, &gb);
        (gb, false)
    }

    /// Installs the ideal basis of `ring`, from the cache when possible.
    pub fn seed_ring(&mut self, ring: &Ring) -> bool {
        if ring.has_ideal_basis() {
            return false;
        }
        let order = ring.term_order();
        let (gb, hit) = self.basis(ring, ring.relations(), order);
        ring.seed_ideal_basis(gb);
        hit
    }

    /// Recomputes every entry and reports the keys whose stored basis differs.
    pub fn audit(&self, rings: &[Ring]) -> Vec<String> {
        let mut bad = Vec::new();
        for (k, e) in &self.entries {
            let Some(ring) = rings.iter().find(|r| Some(r.fingerprint().as_str()) == e["ring"].as_str()) else {
                continue;
            };
            let order = match e["order"].as_str() {
                Some("lex") => TermOrder::Lex,
                Some("degrevlex") => TermOrder::DegRevLex,
                _ => {
                    bad.push(k.clone());
                    continue;
                }
            };
            let gens: Option<Vec<Poly>> = e["generators"]
                .as_array()
                .map(|a| a.iter().filter_map(|s| s.as_str().and_then(|s| ring.ambient.parse(s).ok())).collect());
            let stored = decode_entry(ring, order, e);
            match (gens, stored) {
                (Some(g), Some(s)) => {
                    let fresh = GroebnerBasis::ideal(ring.nvars(), order, &g);
                    if fresh.generators() != s.generators() || !s.is_groebner() || key(ring, &g, order) != *k {
                        bad.push(k.clone());
                    }
                }
                _ => bad.push(k.clone()),
            }
        }
        bad
    }

    /// Writes the file atomically if anything changed.
    pub fn save(&mut self) -> std::io::Result<()> {
        let Some(path) = self.path.clone() else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        let doc = json!({
            "version": VERSION,
            "checksum": entries_checksum(&self.entries),
            "entries": Value::Object(self.entries.clone()),
        });
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{}.tmp", path.file_name().and_then(|n| n.to_str()).unwrap_or("cache")));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string_pretty(&doc).unwrap().as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        self.dirty = false;
        Ok(())
    }
}

fn decode_entry(ring: &Ring, order: TermOrder, e: &Value) -> Option<GroebnerBasis> {
    if e.get("ring")?.as_str()? != ring.fingerprint() || e.get("order")?.as_str()? != order.name() {
        return None;
    }
    let basis = e
        .get("basis")?
        .as_array()?
        .iter()
        .map(|s| ring.ambient.parse(s.as_str()?).ok().map(|p| vec![p]))
        .collect::<Option<Vec<_>>>()?;
    GroebnerBasis::from_reduced(ring.nvars(), 1, ModuleOrder::pot(order), &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use shriek_core::{Field, RingPresentation};

    fn cusp() -> Ring {
        RingPresentation::parse("C", Field::Rational, &["x", "y"], &["y^2 - x^3"]).unwrap()
    }

    #[test]
    fn store_then_load_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gb.json");
        let a = cusp();
        let gens = vec![&a.var(0) * &a.var(1), a.ambient.parse("y^2 - x^3").unwrap()];
        let mut c = Cache::load(&path);
        let (fresh, hit) = c.basis(&a, &gens, TermOrder::DegRevLex);
        assert!(!hit);
        c.save().unwrap();
        let mut c = Cache::load(&path);
        assert!(c.warnings.is_empty());
        let cached = c.lookup(&a, &gens, TermOrder::DegRevLex).unwrap();
        assert_eq!(cached.generators(), fresh.generators());
        assert!(c.lookup(&a, &gens, TermOrder::Lex).is_none());
        assert!(c.audit(&[a]).is_empty());
    }

    #[test]
    fn truncated_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gb.json");
        let a = cusp();
        let mut c = Cache::load(&path);
        c.seed_ring(&a);
        c.save().unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        let mut c = Cache::load(&path);
        assert!(c.warnings[0].starts_with("CorruptCache"));
        let (gb, hit) = c.basis(&a, a.relations(), TermOrder::DegRevLex);
        assert!(!hit && gb.is_groebner());
        c.save().unwrap();
        assert!(Cache::load(&path).warnings.is_empty());
    }

    #[test]
    fn tampered_basis_fails_the_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gb.json");
        let a = cusp();
        let mut c = Cache::load(&path);
        c.basis(&a, &[a.var(0)], TermOrder::DegRevLex);
        c.save().unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("\"x\"", "\"y\"");
        fs::write(&path, text).unwrap();
        assert!(Cache::load(&path).warnings[0].contains("checksum"));
    }
}
