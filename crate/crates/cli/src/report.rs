use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: &str = "kdsp.run-report/1";

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

/// A failed command: exit code, message and, for `validate`, the findings.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: u8,
    pub results: Option<Value>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { kind: "usage", message: message.into(), exit_code: EXIT_USAGE, results: None }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure { kind: "input", message: message.into(), exit_code: EXIT_INPUT, results: None }
    }
}

impl From<kdsp::Error> for Failure {
    fn from(e: kdsp::Error) -> Self {
        use kdsp::Error::*;
        let (kind, exit_code) = match &e {
            Syntax { .. } => ("parse", EXIT_INPUT),
            Invalid(_) | DimensionMismatch { .. } | NodeOutOfRange(_) | MissingArc { .. } | RepeatedNode(_)
            | EndpointMismatch | NotInDag(_) | NonConserving(_) => ("validation", EXIT_INPUT),
            Unreachable { .. } | TooFewPaths { .. } | Infeasible { .. } => ("infeasible", EXIT_INFEASIBLE),
            Argument(_) => ("usage", EXIT_USAGE),
            BudgetExceeded(_) => ("budget", EXIT_BUDGET),
        };
        let results = match e {
            Infeasible { requested, achievable } => Some(json!({ "requested": requested, "achievable": achievable })),
            _ => None,
        };
        Failure { kind, message: e.to_string(), exit_code, results }
    }
}

/// Collects the command echo and input digests while a command runs.
pub struct Report {
    command: Vec<String>,
    inputs: Vec<Value>,
    elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { command, inputs: Vec::new(), elapsed: None }
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        self.inputs.push(json!({ "path": path.display().to_string(), "sha256": sha256_hex(&bytes) }));
        String::from_utf8(bytes).map_err(|_| Failure::input(format!("{}: not UTF-8", path.display())))
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed = Some(d);
    }

    fn envelope(&self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("schema".into(), json!(REPORT_SCHEMA));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), json!(self.inputs));
        if let Some(d) = self.elapsed {
            m.insert("timing".into(), json!({ "elapsed_ms": d.as_secs_f64() * 1e3 }));
        }
        m
    }

    pub fn success(&self, results: Value) -> String {
        let mut m = self.envelope();
        m.insert("status".into(), json!("ok"));
        m.insert("results".into(), results);
        serde_json::to_string_pretty(&Value::Object(m)).expect("json")
    }

    pub fn failure(&self, f: &Failure) -> String {
        let mut m = self.envelope();
        m.insert("status".into(), json!("error"));
        m.insert("error".into(), json!({ "kind": f.kind, "message": f.message, "exit_code": f.exit_code }));
        if let Some(r) = &f.results {
            m.insert("results".into(), r.clone());
        }
        serde_json::to_string_pretty(&Value::Object(m)).expect("json")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
