//! Verification reports emitted as JSON lines:
//! `{"check":…, "instance":…, "pass":bool, "witness":…}`.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub instance: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckLine {
    pub fn pass(check: impl Into<String>, instance: impl Into<String>) -> CheckLine {
        CheckLine { check: check.into(), instance: instance.into(), pass: true, witness: None }
    }

    pub fn fail(
        check: impl Into<String>,
        instance: impl Into<String>,
        witness: impl Into<String>,
    ) -> CheckLine {
        CheckLine {
            check: check.into(),
            instance: instance.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    /// A check that had nothing to do (e.g. no unfrozen index to mutate).
    pub fn vacuous(check: impl Into<String>, instance: impl Into<String>) -> CheckLine {
        CheckLine {
            check: check.into(),
            instance: instance.into(),
            pass: true,
            witness: Some("vacuous".into()),
        }
    }
}

/// An ordered list of check outcomes.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, line: CheckLine) {
        self.lines.push(line);
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.pass)
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&serde_json::to_string(l).expect("report serialization"));
            out.push('\n');
        }
        out
    }
}
