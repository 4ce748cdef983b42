//! Traces, trace fragments and event logs.

mod csv_log;
mod jsonl;
mod sampling;
mod simulate;
mod xes;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

pub use csv_log::{load_csv, parse_csv, CsvColumns};
pub use jsonl::{load_jsonl, parse_jsonl, write_jsonl};
pub use sampling::{sample_infixes, sample_postfixes};
pub use simulate::{simulate_log, SimulationConfig};
pub use xes::{load_xes, parse_xes, write_xes};

use crate::error::{Error, Result};
use crate::label::ActivityLabel;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TraceKind {
    Complete,
    Infix,
    Postfix,
}

/// A sequence of executed activities; fragments carry their kind.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Trace {
    pub activities: Vec<ActivityLabel>,
    pub kind: TraceKind,
}

impl Trace {
    pub fn new(activities: Vec<ActivityLabel>, kind: TraceKind) -> Self {
        Trace { activities, kind }
    }

    pub fn complete(activities: Vec<ActivityLabel>) -> Self {
        Trace::new(activities, TraceKind::Complete)
    }

    /// Builds a trace from activity names, rejecting reserved names.
    pub fn from_names<S: AsRef<str>>(names: &[S], kind: TraceKind) -> Result<Self> {
        let activities = names
            .iter()
            .map(|n| ActivityLabel::new(n.as_ref()))
            .collect::<Result<_>>()?;
        Ok(Trace::new(activities, kind))
    }

    /// Parses the inline form `a,b,c`. Blank input is the empty trace.
    pub fn parse_inline(text: &str, kind: TraceKind) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Trace::new(Vec::new(), kind));
        }
        let names: Vec<&str> = text.split(',').map(str::trim).collect();
        Trace::from_names(&names, kind)
    }

    /// Reads a trace from JSON: either `["a", "b"]` or `{"activities": [...]}`.
    pub fn from_json(text: &str, kind: TraceKind) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            List(Vec<String>),
            Object { activities: Vec<String> },
        }
        let names = match serde_json::from_str::<Form>(text)? {
            Form::List(names) | Form::Object { activities: names } => names,
        };
        Trace::from_names(&names, kind)
    }

    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }

    pub fn with_kind(mut self, kind: TraceKind) -> Self {
        self.kind = kind;
        self
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, a) in self.activities.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("⟩")
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub id: String,
    pub trace: Trace,
}

/// A list of complete traces. Repeated traces are kept as separate cases, so
/// the multiplicity of a trace is the number of cases carrying it.
#[derive(Clone, Debug, Default)]
pub struct EventLog {
    pub cases: Vec<Case>,
    pub attributes: BTreeMap<String, String>,
    /// Events dropped during import (missing or unusable activity name).
    pub skipped_events: usize,
}

impl EventLog {
    pub fn from_traces(traces: impl IntoIterator<Item = Vec<ActivityLabel>>) -> Self {
        let cases = traces
            .into_iter()
            .enumerate()
            .map(|(i, activities)| Case {
                id: format!("case{}", i + 1),
                trace: Trace::complete(activities),
            })
            .collect();
        EventLog {
            cases,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> + '_ {
        self.cases.iter().map(|c| &c.trace)
    }
}

/// Loads a log, choosing the reader by file extension (`.xes`, `.csv`,
/// `.jsonl`/`.json`). CSV files use the default column names.
pub fn load_log(path: impl AsRef<Path>) -> Result<EventLog> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default()
        .to_ascii_lowercase();
    match ext.as_str() {
        "xes" => load_xes(path),
        "csv" => load_csv(path, &CsvColumns::default()),
        "jsonl" | "json" | "ndjson" => load_jsonl(path),
        _ => Err(Error::InvalidArgument(format!(
            "cannot tell log format of {} (expected .xes, .csv or .jsonl)",
            path.display()
        ))),
    }
}
