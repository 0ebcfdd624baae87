//! Structured check records shared by the verification suites.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: Value,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes iff `expected` and `got` serialize to the same JSON value.
    pub fn compare(check: impl Into<String>, params: Value, expected: impl Serialize, got: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).unwrap_or(Value::Null);
        let got = serde_json::to_value(got).unwrap_or(Value::Null);
        let pass = expected == got;
        CheckRecord { check: check.into(), params, expected, got, pass }
    }

    pub fn with_verdict(
        check: impl Into<String>,
        params: Value,
        expected: impl Serialize,
        got: impl Serialize,
        pass: bool,
    ) -> Self {
        CheckRecord {
            check: check.into(),
            params,
            expected: serde_json::to_value(expected).unwrap_or(Value::Null),
            got: serde_json::to_value(got).unwrap_or(Value::Null),
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub suite: String,
    pub params: Value,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, params: Value) -> Self {
        Report { version: REPORT_SCHEMA_VERSION, suite: suite.into(), params, passed: true, checks: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.passed &= record.pass;
        self.checks.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        for r in records {
            self.push(r);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdicts_accumulate() {
        let mut r = Report::new("demo", json!({"n": 2}));
        r.push(CheckRecord::compare("a", json!({}), 3, 3));
        assert!(r.passed);
        r.push(CheckRecord::compare("b", json!({}), vec![1, 2], vec![1, 3]));
        assert!(!r.passed);
        assert_eq!(r.failures().count(), 1);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.version, REPORT_SCHEMA_VERSION);
    }
}
