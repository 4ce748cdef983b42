use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use super::{Case, EventLog, Trace};
use crate::error::{Error, Result};
use crate::label::ActivityLabel;

/// Column names of a CSV event table. Without an order column rows keep
/// their file order within each case.
#[derive(Clone, Debug)]
pub struct CsvColumns {
    pub case: String,
    pub activity: String,
    pub order: Option<String>,
}

impl Default for CsvColumns {
    fn default() -> Self {
        CsvColumns {
            case: "case".to_string(),
            activity: "activity".to_string(),
            order: None,
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, columns: &CsvColumns) -> Result<EventLog> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(file, columns)
}

/// Groups rows by case (cases in order of first appearance) and sorts each
/// case stably by the order column: numerically when every value parses as a
/// number, lexicographically otherwise.
pub fn parse_csv(input: impl Read, columns: &CsvColumns) -> Result<EventLog> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let case_col = find(&columns.case)?;
    let activity_col = find(&columns.activity)?;
    let order_col = columns.order.as_deref().map(find).transpose()?;

    let mut case_index: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let case = record.get(case_col).unwrap_or_default().to_string();
        let activity = record.get(activity_col).unwrap_or_default().to_string();
        let order = order_col.and_then(|c| record.get(c)).unwrap_or_default().to_string();
        let i = *case_index.entry(case.clone()).or_insert_with(|| {
            rows.push((case, Vec::new()));
            rows.len() - 1
        });
        rows[i].1.push((order, activity));
    }

    if order_col.is_some() {
        let numeric = rows
            .iter()
            .flat_map(|(_, events)| events)
            .all(|(o, _)| o.trim().parse::<f64>().is_ok());
        for (_, events) in &mut rows {
            if numeric {
                events.sort_by(|a, b| {
                    let x: f64 = a.0.trim().parse().expect("checked numeric");
                    let y: f64 = b.0.trim().parse().expect("checked numeric");
                    x.total_cmp(&y)
                });
            } else {
                events.sort_by(|a, b| a.0.cmp(&b.0));
            }
        }
    }

    let mut log = EventLog::default();
    for (id, events) in rows {
        let mut activities = Vec::with_capacity(events.len());
        for (_, name) in events {
            match ActivityLabel::new(name.trim()) {
                Ok(a) => activities.push(a),
                Err(_) => log.skipped_events += 1,
            }
        }
        log.cases.push(Case {
            id,
            trace: Trace::complete(activities),
        });
    }
    Ok(log)
}
