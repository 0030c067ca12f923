//! Machine-readable run reports.
//!
//! Reports serialize with a stable top-level key order (`spec`, `command`,
//! `results`, `trace`, `budgets`, `version`); identical configurations
//! produce byte-identical documents.

use cifslab_core::TraceEntry;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Report {
    pub spec: Value,
    pub command: String,
    pub results: Value,
    pub trace: Vec<TraceEntry>,
    pub budgets: Value,
    pub version: String,
}

impl Report {
    pub fn new(spec: Value, command: &str, results: Value, budgets: Value) -> Report {
        Report {
            spec,
            command: command.to_string(),
            results,
            trace: Vec::new(),
            budgets,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn with_trace(mut self, trace: Vec<TraceEntry>) -> Report {
        self.trace = trace;
        self
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let mut text = if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        };
        text.push('\n');
        text
    }
}

/// Exit status contract: determinate results, undetermined/inconclusive,
/// hard errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Determinate,
    Undetermined,
}

impl RunStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Determinate => 0,
            RunStatus::Undetermined => 2,
        }
    }
}
