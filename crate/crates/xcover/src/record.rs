//! One JSON object per output line.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use xcover_core::{Answer, Certificate, SolveResult};

pub const TOOL_VERSION: &str = concat!("xcover ", env!("CARGO_PKG_VERSION"));

/// Every field is always present, `null` when it does not apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub kind: Option<String>,
    /// `sha256:` digest over the input files' bytes, in argument order.
    pub input_digest: Option<String>,
    pub parameters: BTreeMap<String, Value>,
    pub answer: Option<String>,
    pub optimum: Option<usize>,
    pub certificate: Option<Value>,
    pub values: BTreeMap<String, Value>,
    pub stats: BTreeMap<String, Value>,
    pub version: &'static str,
}

impl RunRecord {
    pub fn new(command: &str, kind: Option<&str>) -> Self {
        RunRecord {
            command: command.to_string(),
            kind: kind.map(str::to_string),
            input_digest: None,
            parameters: BTreeMap::new(),
            answer: None,
            optimum: None,
            certificate: None,
            values: BTreeMap::new(),
            stats: BTreeMap::new(),
            version: TOOL_VERSION,
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    pub fn stat(&mut self, key: &str, v: impl Into<Value>) {
        self.stats.insert(key.to_string(), v.into());
    }

    /// Copies answer, optimum, certificate and work counter from a solver result.
    pub fn with_result(mut self, r: &SolveResult) -> Self {
        self.answer = Some(answer_name(r.answer).to_string());
        self.optimum = r.answer.optimum();
        self.certificate = r.certificate.as_ref().map(certificate_json);
        self.stat("explored", r.stats.explored);
        self
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn emit<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", self.to_line())
    }
}

pub fn answer_name(a: Answer) -> &'static str {
    match a {
        Answer::Optimum(_) => "optimum",
        Answer::Infeasible => "infeasible",
        Answer::Yes => "yes",
        Answer::No => "no",
    }
}

pub fn certificate_json(c: &Certificate) -> Value {
    let (kind, items) = match c {
        Certificate::Sets(s) => ("sets", s),
        Certificate::Cycle(s) => ("cycle", s),
        Certificate::Embedding(s) => ("embedding", s),
    };
    serde_json::json!({ "type": kind, "items": items })
}

pub fn digest(chunks: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for c in chunks {
        h.update(c);
    }
    let bytes = h.finalize();
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_is_stable() {
        let r = RunRecord::new("bounds", None).param("delta", 8);
        assert_eq!(
            r.to_line(),
            format!(
                "{{\"command\":\"bounds\",\"kind\":null,\"input_digest\":null,\"parameters\":{{\"delta\":8}},\
                 \"answer\":null,\"optimum\":null,\"certificate\":null,\"values\":{{}},\"stats\":{{}},\
                 \"version\":\"{TOOL_VERSION}\"}}"
            )
        );
    }

    #[test]
    fn empty_digest() {
        assert_eq!(
            digest(&[]),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
