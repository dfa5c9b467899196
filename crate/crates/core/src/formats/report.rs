use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::oracles::TriVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Unknown => 2,
            Verdict::Error => 3,
        }
    }
}

impl<Y, N> From<&TriVerdict<Y, N>> for Verdict {
    fn from(v: &TriVerdict<Y, N>) -> Self {
        match v {
            TriVerdict::Yes(_) => Verdict::Yes,
            TriVerdict::No(_) => Verdict::No,
            TriVerdict::Unknown => Verdict::Unknown,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    /// Command-specific payload, e.g. a utility vector.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub stats: Stats,
    pub provenance: Vec<InputDigest>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdict: Verdict) -> Self {
        Report {
            command: command.into(),
            verdict,
            result: Value::Null,
            witness: None,
            error: None,
            stats: Stats::default(),
            provenance: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_verdict() {
        let cases = [
            (Verdict::Yes, 0),
            (Verdict::No, 1),
            (Verdict::Unknown, 2),
            (Verdict::Error, 3),
        ];
        for (v, code) in cases {
            let mut r = Report::new("x", v);
            r.witness = Some(Value::from(1));
            r.stats.nodes = Some(17);
            assert_eq!(r.exit_code(), code);
            let back: Report = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn verdict_from_search() {
        assert_eq!(
            Verdict::from(&TriVerdict::<(), ()>::Unknown),
            Verdict::Unknown
        );
        assert_eq!(Verdict::from(&TriVerdict::<u8, ()>::Yes(1)), Verdict::Yes);
    }
}
