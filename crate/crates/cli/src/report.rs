//! Deterministic text and JSON reports.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// A titled table of `label = value` rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    pub rows: Vec<(String, String)>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.rows.push((label.into(), value.into()));
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.rows
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub sections: Vec<Section>,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            status: Status::Pass,
            sections: Vec::new(),
            violations: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn fail(&mut self, violation: impl Into<String>) {
        self.violations.push(violation.into());
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
    }

    pub fn error(command: impl Into<String>, msg: impl Into<String>) -> Self {
        let mut r = Report::new(command);
        r.status = Status::Error;
        r.violations.push(msg.into());
        r
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "command: {}\nstatus: {}\n",
            self.command,
            self.status.label()
        );
        for s in &self.sections {
            out.push_str(&format!("\n[{}]\n", s.title));
            if s.rows.is_empty() {
                out.push_str("(empty)\n");
            }
            for (l, v) in &s.rows {
                out.push_str(&format!("{l} = {v}\n"));
            }
        }
        if !self.violations.is_empty() {
            out.push_str("\n[violations]\n");
            for v in &self.violations {
                out.push_str(&format!("{v}\n"));
            }
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("\ntiming_ms: {t}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
