//! Machine-readable command reports. The verdict section is deterministic
//! (stable field order, sorted parameter maps, no timings), so repeated and
//! parallel/serial runs can be compared byte for byte.

use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA: &str = "tautring-report/1";

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub schema: &'static str,
    pub engine_version: &'static str,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub certificates: serde_json::Value,
    pub seeds: Vec<String>,
    pub cache: CacheStats,
    pub timings_ms: BTreeMap<String, u128>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA,
            engine_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            params: BTreeMap::new(),
            verdicts: Vec::new(),
            certificates: serde_json::Value::Null,
            seeds: Vec::new(),
            cache: CacheStats::default(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn verdict(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            id: id.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// The deterministic section: command, params and verdicts only.
    pub fn verdict_bytes(&self) -> Vec<u8> {
        #[derive(Serialize)]
        struct Det<'a> {
            command: &'a str,
            params: &'a BTreeMap<String, String>,
            verdicts: &'a [Verdict],
        }
        serde_json::to_vec(&Det {
            command: &self.command,
            params: &self.params,
            verdicts: &self.verdicts,
        })
        .expect("report serialization")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.params {
            out.push_str(&format!("  {} = {}\n", k, v));
        }
        for v in &self.verdicts {
            out.push_str(&format!(
                "{} {}: {}\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.id,
                v.detail
            ));
        }
        out.push_str(&format!(
            "{}: {} of {} checks passed\n",
            if self.pass() { "OK" } else { "FAILED" },
            self.verdicts.iter().filter(|v| v.pass).count(),
            self.verdicts.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bytes_exclude_timings() {
        let mut a = Report::new("verify");
        a.param("n", 2);
        a.verdict("x", true, "ok");
        a.timings_ms.insert("total".into(), 12);
        let mut b = a.clone();
        b.timings_ms.insert("total".into(), 99);
        b.cache.hits = 1000;
        assert_eq!(a.verdict_bytes(), b.verdict_bytes());
        assert!(a.pass());
        a.verdict("y", false, "bad");
        assert!(!a.pass());
    }
}
