//! The machine-readable report shared by all modes.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::numerics::C64;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub mode: &'static str,
    pub tool_version: &'static str,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Value>,
    pub reasons: Vec<String>,
    pub residuals: Vec<Check>,
    pub details: Value,
}

impl Report {
    pub fn new(mode: &'static str, inputs_digest: String) -> Self {
        Report {
            mode,
            tool_version: env!("CARGO_PKG_VERSION"),
            inputs_digest,
            outcome: None,
            values: None,
            reasons: Vec::new(),
            residuals: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// Pass when `value < tolerance`.
    Below,
    /// Pass when `value > tolerance`.
    Above,
}

/// One residual against its tolerance. `value` is `None` when the check could
/// not be run (window or pole); `error` then says why and the check fails.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub comparator: Comparator,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub fn from_result(name: &'static str, comparator: Comparator, tolerance: f64, r: crate::Result<f64>) -> Self {
        match r {
            Ok(v) => Check {
                name,
                value: Some(v),
                tolerance,
                comparator,
                // NaN never passes
                pass: match comparator {
                    Comparator::Below => v < tolerance,
                    Comparator::Above => v > tolerance,
                },
                error: None,
            },
            Err(e) => Check {
                name,
                value: None,
                tolerance,
                comparator,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }
}

/// SHA-256 over length-prefixed parts, so different splits never collide.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

pub fn cjson(z: C64) -> Value {
    serde_json::json!([z.re, z.im])
}
