//! The report every command produces, its text rendering and the exit-code
//! contract. The JSON form omits timing so identical inputs give identical
//! bytes.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Reject,
    Inconsistent,
    Failed,
    InputError,
}

impl Status {
    /// 0 success, 1 mathematical failure, 2 input error.
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Reject | Status::Inconsistent | Status::Failed => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub subject: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Entry {
    pub fn new(subject: impl Into<String>, value: impl ToString) -> Self {
        Entry {
            subject: subject.into(),
            value: value.to_string(),
            notes: Vec::new(),
        }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub cap: usize,
    pub status: Status,
    pub results: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    /// A `secat-facts v1` block ready to feed to `bounds`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facts: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: Vec<String>, cap: usize) -> Self {
        Report {
            command,
            cap,
            status: Status::Ok,
            results: Vec::new(),
            trace: Vec::new(),
            facts: None,
            error: None,
            elapsed: None,
        }
    }

    pub fn fail(&mut self, status: Status, error: impl ToString) {
        self.status = status;
        self.error = Some(error.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Human-readable form; input errors go to stderr as their bare message.
    pub fn to_text(&self, trace: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command.join(" "));
        let _ = writeln!(out, "cap {}", self.cap);
        for e in &self.results {
            let _ = writeln!(out, "{} = {}", e.subject, e.value);
            for n in &e.notes {
                let _ = writeln!(out, "  {n}");
            }
        }
        if trace {
            for t in &self.trace {
                let _ = writeln!(out, "| {t}");
            }
        }
        if let Some(f) = &self.facts {
            out.push_str(f);
        }
        if let Some(e) = &self.error {
            if self.status != Status::InputError {
                let _ = writeln!(out, "{e}");
            }
        }
        let status = serde_json::to_value(self.status).expect("status serializes");
        let _ = write!(out, "status {}", status.as_str().unwrap_or("?"));
        if let Some(d) = self.elapsed {
            let _ = write!(out, " ({:.3} s)", d.as_secs_f64());
        }
        out.push('\n');
        out
    }
}
