//! Canonical JSON reports.
//!
//! Keys are sorted (serde_json's default map), rationals print as `num/den` inside polynomial
//! strings, and the only run-dependent fields are `timing_ms` and `cache`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use shriek_core::duality::verify::describe;
use shriek_core::invariants::{generic_rank, vector_space_dimension, ComparisonVerdict};
use shriek_core::{FPModule, Window};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fields that differ between otherwise identical runs.
pub const VOLATILE: [&str; 2] = ["cache", "timing_ms"];

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: Value,
    pub parameters: Value,
    pub results: Value,
    pub status: String,
    pub exit_code: i32,
    pub error: Option<String>,
    pub input_hash: String,
    pub timing_ms: Option<u128>,
    pub cache: Option<Value>,
    pub seed_check: Option<Value>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone());
        m.insert("parameters".into(), self.parameters.clone());
        m.insert("results".into(), self.results.clone());
        m.insert("status".into(), json!(self.status));
        m.insert("exit_code".into(), json!(self.exit_code));
        m.insert("engine_version".into(), json!(ENGINE_VERSION));
        m.insert("input_hash".into(), json!(self.input_hash));
        if let Some(e) = &self.error {
            m.insert("error".into(), json!(e));
        }
        if let Some(t) = self.timing_ms {
            m.insert("timing_ms".into(), json!(t as u64));
        }
        if let Some(c) = &self.cache {
            m.insert("cache".into(), c.clone());
        }
        if let Some(s) = &self.seed_check {
            m.insert("seed_check".into(), s.clone());
        }
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        render(&self.to_value())
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// The report with run-dependent fields removed.
pub fn stable(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(m) = v.as_object_mut() {
        for k in VOLATILE {
            m.remove(k);
        }
    }
    v
}

pub fn window(w: Window) -> Value {
    json!(format!("{}:{}", w.lo, w.hi))
}

/// Invariants of a module, computed on a pruned presentation.
pub fn module(m: &FPModule) -> Value {
    let p = m.prune().module;
    let ring = p.ring().clone();
    let rows: Vec<Value> = (0..p.rank())
        .map(|i| Value::Array(p.relations().iter().map(|c| json!(ring.format(&c[i]))).collect()))
        .collect();
    let zero = p.is_zero();
    json!({
        "summary": describe(m),
        "zero": zero,
        "generators": p.rank(),
        "relations": p.relations().len(),
        "free_rank": p.free_rank(),
        "generic_rank": if zero { Some(0) } else { generic_rank(&p) },
        "dimension": vector_space_dimension(&p),
        "presentation": rows,
    })
}

pub fn modules<'a>(degrees: impl IntoIterator<Item = (&'a i64, &'a FPModule)>) -> Value {
    let m: BTreeMap<String, Value> = degrees.into_iter().map(|(d, m)| (d.to_string(), module(m))).collect();
    json!(m)
}

pub fn verdict(v: &ComparisonVerdict) -> Value {
    json!({ "status": v.status.name(), "evidence": v.evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use shriek_core::{Field, RingPresentation};

    #[test]
    fn keys_are_sorted_and_volatile_fields_strip() {
        let r = Report { status: "success".into(), timing_ms: Some(3), ..Report::default() };
        let text = r.render();
        let keys: Vec<usize> = ["command", "engine_version", "exit_code", "input_hash", "parameters", "results", "status", "timing_ms"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(stable(&r.to_value()).get("timing_ms").is_none());
    }

    #[test]
    fn module_invariants() {
        let a = RingPresentation::parse("A", Field::Rational, &["x"], &[]).unwrap();
        let m = FPModule::cyclic(&a, &[a.ambient.parse("3/2*x^2").unwrap()]);
        let v = module(&m);
        assert_eq!(v["dimension"], json!(2));
        assert_eq!(v["presentation"], json!([["3/2*x^2"]]));
        assert_eq!(v["generic_rank"], json!(0));
    }
}
