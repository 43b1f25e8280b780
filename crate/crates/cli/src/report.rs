use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A proper submodule was exhibited.
    Witness,
}

impl Status {
    pub fn from_pass(passed: bool) -> Self {
        if passed {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Witness => "WITNESS",
        }
    }
}

/// One verification record. Every number inside is an exact string. Fields
/// are in alphabetical order so that the serialized form is canonical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    pub payload: Value,
    pub sector: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<String>,
}

impl Report {
    pub fn new(check: impl Into<String>, sector: impl Into<String>, status: Status, payload: Value) -> Self {
        Report {
            check: check.into(),
            sector: sector.into(),
            parameters: BTreeMap::new(),
            status,
            payload,
            timing: None,
        }
    }

    pub fn with_parameters(mut self, parameters: BTreeMap<String, String>) -> Self {
        self.parameters = parameters;
        self
    }

    pub fn with_timing(mut self, elapsed: Option<Duration>) -> Self {
        self.timing = elapsed.map(|d| format!("{:.3}s", d.as_secs_f64()));
        self
    }
}

pub fn to_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Human-readable rendering: one header line per report, then the payload
/// fields indented.
pub fn to_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = write!(out, "{:<8}{} [{}]", r.status.label(), r.check, r.sector);
        if !params.is_empty() {
            let _ = write!(out, " {}", params.join(" "));
        }
        if let Some(t) = &r.timing {
            let _ = write!(out, " ({t})");
        }
        out.push('\n');
        if let Value::Object(fields) = &r.payload {
            for (k, v) in fields {
                match v {
                    Value::Array(items) if !items.is_empty() => {
                        let _ = writeln!(out, "        {k}:");
                        for item in items.iter().take(12) {
                            let _ = writeln!(out, "          {}", compact(item));
                        }
                        if items.len() > 12 {
                            let _ = writeln!(out, "          ... {} more", items.len() - 12);
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "        {k}: {}", compact(v));
                    }
                }
            }
        }
    }
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
    out
}
