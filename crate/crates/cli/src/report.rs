use std::str::FromStr;

use serde::Serialize;
use serde_json::{Number, Value};
use sl2rep::grid::fmt17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "CAVEAT")]
    Caveat,
    #[serde(rename = "DISCREPANCY")]
    Discrepancy,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub metric: Option<f64>,
    pub tolerance: Option<f64>,
    /// The inputs that produced the metric (always present for FAIL and DISCREPANCY).
    pub inputs: Value,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, status: Status, metric: Option<f64>, tolerance: Option<f64>) -> Self {
        CheckRecord { name: name.into(), status, metric, tolerance, inputs: Value::Null, detail: String::new() }
    }

    /// PASS iff metric <= tol, FAIL otherwise (including NaN).
    pub fn threshold(name: impl Into<String>, metric: f64, tol: f64) -> Self {
        let status = if metric <= tol { Status::Pass } else { Status::Fail };
        CheckRecord::new(name, status, Some(metric), Some(tol))
    }

    pub fn with_inputs(mut self, inputs: Value) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: Value,
    pub results: Vec<CheckRecord>,
    pub ledger: Vec<String>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl ReportDocument {
    pub fn has_failure(&self) -> bool {
        self.results.iter().any(|r| r.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.has_failure())
    }
}

/// Rewrites every non-integer JSON number with 17 significant digits.
pub fn with_fixed_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(f) if f.is_finite() => Number::from_str(&fmt17(f)).map(Value::Number).unwrap_or(Value::Number(n)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(with_fixed_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, with_fixed_floats(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with 17-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let v = with_fixed_floats(serde_json::to_value(value)?);
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_get_seventeen_digits() {
        let s = to_json(&serde_json::json!({"a": 0.1, "n": 3, "v": [1.5e-9]})).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
        assert!(s.contains("1.5000000000000000e-9"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn threshold_status() {
        assert_eq!(CheckRecord::threshold("x", 1e-12, 1e-10).status, Status::Pass);
        assert_eq!(CheckRecord::threshold("x", f64::NAN, 1e-10).status, Status::Fail);
    }
}
