use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub evidence: Value,
}

impl Check {
    pub fn verdict(name: &'static str, anchor: &'static str, ok: bool, evidence: Value) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name, anchor, status, reason: None, evidence }
    }

    pub fn skipped(name: &'static str, anchor: &'static str, reason: impl Into<String>) -> Self {
        Self { name, anchor, status: Status::Skipped, reason: Some(reason.into()), evidence: Value::Null }
    }

    pub fn errored(name: &'static str, anchor: &'static str, err: anyhow::Error) -> Self {
        Self { name, anchor, status: Status::Fail, reason: Some(format!("{err:#}")), evidence: Value::Null }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub system: Value,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, system: Value, seed: u64) -> Self {
        Self { command: command.into(), system, seed, checks: Vec::new(), result: None, summary: None, passed: true }
    }

    pub fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.passed = checks.iter().all(|c| c.status != Status::Fail);
        self.checks = checks;
        self
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.summary {
            out.push_str(s);
            out.push('\n');
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("{tag} {} [{}]", c.name, c.anchor));
            if let Some(r) = &c.reason {
                out.push_str(&format!(": {r}"));
            }
            if !c.evidence.is_null() {
                out.push_str(&format!(" {}", c.evidence));
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str(&format!(
                "{} passed, {} failed, {} skipped\n",
                self.count(Status::Pass),
                self.count(Status::Fail),
                self.count(Status::Skipped)
            ));
        }
        if let Some(r) = &self.result {
            out.push_str(&serde_json::to_string_pretty(r).expect("value serializes"));
            out.push('\n');
        }
        out
    }
}
