use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const PASS: i32 = 0;
pub const PROPERTY_FAILURE: i32 = 1;
pub const INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub details: Value,
    /// Human-readable lines; not part of the JSON report.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        CheckResult {
            name: name.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            witnesses: Vec::new(),
            details: Value::Null,
            lines: Vec::new(),
        }
    }

    pub fn details(mut self, details: impl Serialize) -> Self {
        self.details = to_value(details);
        self
    }

    pub fn witness(mut self, w: impl Serialize) -> Self {
        self.witnesses.push(to_value(w));
        self
    }

    pub fn line(mut self, line: impl Into<String>) -> Self {
        self.lines.push(line.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn from_checks(command: Vec<String>, mut checks: Vec<CheckResult>) -> Self {
        for c in &mut checks {
            c.witnesses.sort_by_cached_key(|w| w.to_string());
        }
        let exit_code = if checks.iter().all(CheckResult::passed) { PASS } else { PROPERTY_FAILURE };
        RunReport { command, checks, exit_code, error: None, timing_ms: None }
    }

    pub fn input_error(command: Vec<String>, message: String) -> Self {
        RunReport { command, checks: Vec::new(), exit_code: INPUT_ERROR, error: Some(message), timing_ms: None }
    }

    /// Serialized through `Value` so object keys come out sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&to_value(self)).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{}: {tag}\n", c.name));
            for l in &c.lines {
                out.push_str(&format!("  {l}\n"));
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("time: {ms:.1} ms\n"));
        }
        out
    }
}
