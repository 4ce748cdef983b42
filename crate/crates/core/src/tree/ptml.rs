//! PTML import (ProM process tree XML).
//!
//! `manualTask` leaves become activities and `automaticTask` leaves become τ.
//! `sequence`, `xor`, `and` map to `->`, `X`, `+`. A three-child
//! `xorLoop(do, redo, exit)` becomes `*(do, redo)` when `exit` is τ and
//! `->(*(do, redo), exit)` otherwise. Operators with a single child are
//! replaced by that child. Other node types are rejected.

use std::collections::HashMap;
use std::path::Path;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{NodeLabel, Operator, ProcessTree, Shape};
use crate::error::{Error, Result};
use crate::label::ActivityLabel;

pub fn load_ptml(path: impl AsRef<Path>) -> Result<ProcessTree> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ptml(&text)
}

#[derive(Clone, Debug)]
enum Kind {
    Activity(String),
    Tau,
    Op(Operator),
    XorLoop,
}

pub fn parse_ptml(text: &str) -> Result<ProcessTree> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut root: Option<String> = None;
    let mut kinds: HashMap<String, Kind> = HashMap::new();
    let mut children: HashMap<String, Vec<String>> = HashMap::new();
    loop {
        let position = reader.buffer_position();
        let event = reader
            .read_event()
            .map_err(|e| Error::xml(format!("PTML at byte {position}"), e))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let tag = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
                let kind = match tag.as_str() {
                    "processTree" => {
                        root = attr(e, "root")?;
                        continue;
                    }
                    "parentsNode" => {
                        let source = required(e, "sourceId")?;
                        let target = required(e, "targetId")?;
                        children.entry(source).or_default().push(target);
                        continue;
                    }
                    "manualTask" => Kind::Activity(attr(e, "name")?.unwrap_or_default()),
                    "automaticTask" => Kind::Tau,
                    "sequence" => Kind::Op(Operator::Sequence),
                    "xor" => Kind::Op(Operator::Xor),
                    "and" => Kind::Op(Operator::Parallel),
                    "xorLoop" => Kind::XorLoop,
                    "ptml" => continue,
                    other => {
                        if attr(e, "id")?.is_some() {
                            return Err(Error::xml("PTML", format!("unsupported node type `{other}`")));
                        }
                        continue;
                    }
                };
                kinds.insert(required(e, "id")?, kind);
            }
            Event::Eof => break,
            _ => {}
        }
    }
    let root = root.ok_or_else(|| Error::xml("PTML", "processTree lacks a root attribute"))?;
    let shape = build(&root, &kinds, &children, 0)?;
    ProcessTree::from_shape(shape)
}

fn build(
    id: &str,
    kinds: &HashMap<String, Kind>,
    children: &HashMap<String, Vec<String>>,
    depth: usize,
) -> Result<Shape> {
    if depth > kinds.len() {
        return Err(Error::xml("PTML", "cyclic parent relation"));
    }
    let kind = kinds
        .get(id)
        .ok_or_else(|| Error::xml("PTML", format!("unknown node id `{id}`")))?;
    let kids = children.get(id).map(Vec::as_slice).unwrap_or_default();
    let mut built = kids
        .iter()
        .map(|c| build(c, kinds, children, depth + 1))
        .collect::<Result<Vec<_>>>()?;
    match kind {
        Kind::Activity(name) => {
            let label = ActivityLabel::new(name)
                .map_err(|_| Error::InvalidLabel(format!("PTML task `{id}` has label `{name}`")))?;
            Ok(Shape::Leaf(NodeLabel::Activity(label)))
        }
        Kind::Tau => Ok(Shape::Leaf(NodeLabel::Tau)),
        Kind::Op(op) => match built.len() {
            0 => Err(Error::Arity {
                position: 0,
                message: format!("PTML node `{id}` has no children"),
            }),
            1 => Ok(built.pop().expect("one child")),
            _ => Ok(Shape::Op(*op, built)),
        },
        Kind::XorLoop => {
            if built.len() != 3 {
                return Err(Error::Arity {
                    position: 0,
                    message: format!("PTML xorLoop `{id}` needs 3 children, got {}", built.len()),
                });
            }
            let exit = built.pop().expect("three children");
            let looped = Shape::Op(Operator::Loop, built);
            Ok(match exit {
                Shape::Leaf(NodeLabel::Tau) => looped,
                other => Shape::Op(Operator::Sequence, vec![looped, other]),
            })
        }
    }
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>> {
    match e
        .try_get_attribute(key)
        .map_err(|err| Error::xml("PTML attribute", err))?
    {
        Some(a) => Ok(Some(
            a.unescape_value()
                .map_err(|err| Error::xml("PTML attribute", err))?
                .into_owned(),
        )),
        None => Ok(None),
    }
}

fn required(e: &BytesStart<'_>, key: &str) -> Result<String> {
    attr(e, key)?.ok_or_else(|| {
        Error::xml(
            "PTML",
            format!(
                "<{}> lacks attribute `{key}`",
                String::from_utf8_lossy(e.local_name().as_ref())
            ),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<ptml><processTree id="pt" name="t" root="r">
<sequence id="r" name=""/>
<manualTask id="a" name="a"/>
<xorLoop id="l" name=""/>
<manualTask id="b" name="b"/>
<manualTask id="c" name="c"/>
<automaticTask id="t" name="tau"/>
<and id="p" name=""/>
<manualTask id="d" name="d"/>
<parentsNode id="e1" sourceId="r" targetId="a"/>
<parentsNode id="e2" sourceId="r" targetId="l"/>
<parentsNode id="e3" sourceId="l" targetId="b"/>
<parentsNode id="e4" sourceId="l" targetId="c"/>
<parentsNode id="e5" sourceId="l" targetId="t"/>
<parentsNode id="e6" sourceId="r" targetId="p"/>
<parentsNode id="e7" sourceId="p" targetId="d"/>
</processTree></ptml>"#;

    #[test]
    fn converts_loops_and_collapses_unary_operators() {
        let tree = parse_ptml(DOC).unwrap();
        assert_eq!(tree.to_string(), "->(a, *(b, c), d)");
    }

    #[test]
    fn visible_loop_exit_becomes_sequence() {
        let doc = DOC.replace(
            r#"<automaticTask id="t" name="tau"/>"#,
            r#"<manualTask id="t" name="x"/>"#,
        );
        assert_eq!(parse_ptml(&doc).unwrap().to_string(), "->(a, ->(*(b, c), x), d)");
    }

    #[test]
    fn unsupported_nodes_rejected() {
        let doc = DOC.replace(r#"<and id="p" name=""/>"#, r#"<or id="p" name=""/>"#);
        assert!(matches!(parse_ptml(&doc), Err(Error::Xml { .. })));
    }

    #[test]
    fn missing_root_rejected() {
        let doc = DOC.replace(r#"root="r""#, "");
        assert!(parse_ptml(&doc).is_err());
    }
}
