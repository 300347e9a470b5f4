//! Report assembly: one JSON document per scenario run, with a pass/fail
//! entry per check and optional timing.

use serde_json::{json, Value};

pub const SCHEMA: &str = "fam-kernel/1";

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Serialized counterexample for failed checks.
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: true,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(name: &str, detail: impl Into<String>, witness: Option<Value>) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: false,
            detail: detail.into(),
            witness,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub trace: Option<Value>,
    pub h_conditions: Option<Value>,
    pub invariant: Option<Value>,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "pass": c.pass,
                    "detail": c.detail,
                    "witness": c.witness.clone().unwrap_or(Value::Null),
                })
            })
            .collect();
        let mut value = json!({
            "schema": SCHEMA,
            "scenario": self.scenario,
            "seed": self.seed,
            "pass": self.all_pass(),
            "checks": checks,
            "trace": self.trace.clone().unwrap_or(Value::Null),
            "h_conditions": self.h_conditions.clone().unwrap_or(Value::Null),
            "invariant": self.invariant.clone().unwrap_or(Value::Null),
        });
        if let Some(ms) = self.timing_ms {
            value["timing_ms"] = json!(ms);
        }
        value
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("valid json");
        text.push('\n');
        text
    }
}
