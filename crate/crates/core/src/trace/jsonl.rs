//! JSON-lines logs: one `{"case": "...", "activities": ["a", ...]}` per line.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Case, EventLog, Trace};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Line {
    case: String,
    activities: Vec<String>,
}

pub fn load_jsonl(path: impl AsRef<Path>) -> Result<EventLog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&text)
}

pub fn parse_jsonl(text: &str) -> Result<EventLog> {
    let mut log = EventLog::default();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let parsed: Line = serde_json::from_str(line)?;
        log.cases.push(Case {
            id: parsed.case,
            trace: Trace::from_names(&parsed.activities, super::TraceKind::Complete)?,
        });
    }
    Ok(log)
}

pub fn write_jsonl(log: &EventLog, mut out: impl Write) -> Result<()> {
    for case in &log.cases {
        let line = Line {
            case: case.id.clone(),
            activities: case.trace.activities.iter().map(|a| a.to_string()).collect(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    Ok(())
}
