//! Deterministic reports: the same inputs give byte-identical output.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Text(String),
    List(Vec<String>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: String,
    pub results: Vec<(String, Entry)>,
    pub warnings: Vec<String>,
}

/// SHA-256 over the labelled input files, in the order given.
pub fn digest(inputs: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    for (label, bytes) in inputs {
        h.update(label.as_bytes());
        h.update([0]);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    format!("sha256:{:x}", h.finalize())
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.results.push((key.into(), Entry::Text(value.into())));
    }

    pub fn push_list(&mut self, key: impl Into<String>, value: Vec<String>) {
        self.results.push((key.into(), Entry::List(value)));
    }

    pub fn push_matrix(&mut self, key: impl Into<String>, rows: Vec<Vec<String>>) {
        self.results.push((key.into(), Entry::Matrix(rows)));
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub fn text(&self) -> String {
        let mut out = format!("fpcoh {}\n", self.command.join(" "));
        if !self.inputs.is_empty() {
            out.push_str(&format!("inputs {}\n", self.inputs));
        }
        for (k, e) in &self.results {
            match e {
                Entry::Text(s) => out.push_str(&format!("{k} {s}\n")),
                Entry::List(v) => out.push_str(&format!("{k} [{}]\n", v.join(", "))),
                Entry::Matrix(rows) => {
                    out.push_str(&format!("{k}\n"));
                    for r in rows {
                        out.push_str(&format!("  [{}]\n", r.join(", ")));
                    }
                }
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning {w}\n"));
        }
        out
    }

    pub fn json(&self) -> String {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|(k, e)| {
                let v = match e {
                    Entry::Text(s) => json!(s),
                    Entry::List(v) => json!(v),
                    Entry::Matrix(m) => json!(m),
                };
                json!({ "name": k, "value": v })
            })
            .collect();
        let v = json!({
            "format_version": crate::doc::FORMAT_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": results,
            "warnings": self.warnings,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}
