//! Minimal XES support: `concept:name` of traces and events, plain log-level
//! attributes. Extensions, globals and classifiers are ignored.

use std::io::Write;
use std::path::Path;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{Case, EventLog, Trace};
use crate::error::{Error, Result};
use crate::label::ActivityLabel;

const ATTRIBUTE_TAGS: [&str; 6] = ["string", "date", "int", "float", "boolean", "id"];

pub fn load_xes(path: impl AsRef<Path>) -> Result<EventLog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_xes(&text)
}

/// Events without a usable `concept:name` are dropped and counted in
/// [`EventLog::skipped_events`].
pub fn parse_xes(text: &str) -> Result<EventLog> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut log = EventLog::default();
    let mut stack: Vec<String> = Vec::new();
    let mut case: Option<(Option<String>, Vec<ActivityLabel>)> = None;
    let mut event_name: Option<String> = None;
    loop {
        let position = reader.buffer_position();
        let event = reader
            .read_event()
            .map_err(|e| Error::xml(format!("XES at byte {position}"), e))?;
        let (e, empty) = match &event {
            Event::Start(e) => (Some(e.clone()), false),
            Event::Empty(e) => (Some(e.clone()), true),
            Event::End(_) => {
                let name = stack.pop().unwrap_or_default();
                finish(&name, &mut log, &mut case, &mut event_name);
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let e = e.expect("start or empty element");
        let name = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
        let parent = stack.last().map(String::as_str);
        match name.as_str() {
            "trace" if parent == Some("log") => case = Some((None, Vec::new())),
            "event" if parent == Some("trace") => event_name = None,
            tag if ATTRIBUTE_TAGS.contains(&tag) => {
                let key = attr(&e, "key")?.unwrap_or_default();
                let value = attr(&e, "value")?.unwrap_or_default();
                match parent {
                    Some("log") => {
                        log.attributes.insert(key, value);
                    }
                    Some("trace") if key == "concept:name" => {
                        if let Some(c) = case.as_mut() {
                            c.0 = Some(value);
                        }
                    }
                    Some("event") if key == "concept:name" => event_name = Some(value),
                    _ => {}
                }
            }
            _ => {}
        }
        if empty {
            finish(&name, &mut log, &mut case, &mut event_name);
        } else {
            stack.push(name);
        }
    }
    Ok(log)
}

fn finish(
    name: &str,
    log: &mut EventLog,
    case: &mut Option<(Option<String>, Vec<ActivityLabel>)>,
    event_name: &mut Option<String>,
) {
    match name {
        "event" => {
            let label = event_name.take().and_then(|n| ActivityLabel::new(&n).ok());
            match (label, case.as_mut()) {
                (Some(label), Some(c)) => c.1.push(label),
                _ => log.skipped_events += 1,
            }
        }
        "trace" => {
            if let Some((id, activities)) = case.take() {
                let id = id.unwrap_or_else(|| format!("case{}", log.cases.len() + 1));
                log.cases.push(Case {
                    id,
                    trace: Trace::complete(activities),
                });
            }
        }
        _ => {}
    }
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>> {
    match e
        .try_get_attribute(key)
        .map_err(|err| Error::xml("XES attribute", err))?
    {
        Some(a) => Ok(Some(
            a.unescape_value()
                .map_err(|err| Error::xml("XES attribute", err))?
                .into_owned(),
        )),
        None => Ok(None),
    }
}

fn escape(s: &str) -> String {
    quick_xml::escape::escape(s).into_owned()
}

pub fn write_xes(log: &EventLog, mut out: impl Write) -> Result<()> {
    let mut text = String::new();
    text.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    text.push_str("<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n");
    text.push_str(
        "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n",
    );
    for (k, v) in &log.attributes {
        text.push_str(&format!("  <string key=\"{}\" value=\"{}\"/>\n", escape(k), escape(v)));
    }
    for case in &log.cases {
        text.push_str("  <trace>\n");
        text.push_str(&format!(
            "    <string key=\"concept:name\" value=\"{}\"/>\n",
            escape(&case.id)
        ));
        for a in &case.trace.activities {
            text.push_str(&format!(
                "    <event><string key=\"concept:name\" value=\"{}\"/></event>\n",
                escape(a.as_str())
            ));
        }
        text.push_str("  </trace>\n");
    }
    text.push_str("</log>\n");
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<output>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_trace() {
        let text = r#"<log><trace><string key="concept:name" value="c1"/>
            <event><string key="concept:name" value="a"/><date key="time:timestamp" value="2020-01-01"/></event>
            <event><string key="concept:name" value="b"/></event></trace></log>"#;
        let log = parse_xes(text).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log.cases[0].id, "c1");
        assert_eq!(log.cases[0].trace.len(), 2);
    }

    #[test]
    fn empty_log() {
        assert!(parse_xes("<log/>").unwrap().is_empty());
        assert!(parse_xes("<log></log>").unwrap().is_empty());
    }

    #[test]
    fn events_without_name_are_skipped_and_counted() {
        let text = r#"<log>
            <global scope="event"><string key="concept:name" value="UNKNOWN"/></global>
            <trace>
            <event><string key="concept:name" value="a"/></event>
            <event><string key="org:resource" value="r"/></event>
            <event/>
            <event><string key="concept:name" value="b"/></event>
            </trace></log>"#;
        let log = parse_xes(text).unwrap();
        let names: Vec<&str> = log.cases[0].trace.activities.iter().map(|a| a.as_str()).collect();
        assert_eq!(names, ["a", "b"]);
        assert_eq!(log.skipped_events, 2);
    }

    #[test]
    fn write_then_read() {
        let mut log = EventLog::from_traces(vec![
            vec![ActivityLabel::new("a & b").unwrap(), ActivityLabel::new("c").unwrap()],
            vec![],
        ]);
        log.attributes.insert("concept:name".into(), "synthetic".into());
        let mut out = Vec::new();
        write_xes(&log, &mut out).unwrap();
        let back = parse_xes(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.cases[0].trace, log.cases[0].trace);
        assert_eq!(back.attributes["concept:name"], "synthetic");
    }

    #[test]
    fn malformed() {
        assert!(matches!(parse_xes("<log><trace></log>"), Err(Error::Xml { .. })));
    }
}
