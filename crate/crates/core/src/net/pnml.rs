//! PNML import for place/transition nets (the subset ProM writes).
//!
//! Supported: places with `initialMarking`, transitions whose `name/text` is
//! the activity label, arcs, and the `finalmarkings` tool extension. A
//! transition is silent if it has no name, is named `tau`/`τ`, or carries a
//! `toolspecific` element with `activity="$invisible$"`. When no final
//! marking is given the unique sink place is used. [`write_pnml`] produces
//! the same subset.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{AcceptingPetriNet, Marking, NetBuilder, PlaceId, TransitionId};
use crate::error::{Error, Result};
use crate::label::Label;

pub fn load_pnml(path: impl AsRef<Path>) -> Result<AcceptingPetriNet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pnml(&text)
}

/// Writes `net` as PNML. Place and transition names become element ids;
/// silent transitions carry the ProM invisibility marker.
pub fn write_pnml(net: &AcceptingPetriNet, mut out: impl Write) -> Result<()> {
    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pnml>\n");
    s.push_str("  <net id=\"net\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n");
    s.push_str("    <page id=\"page\">\n");
    for p in net.places() {
        let id = escape(net.place_name(p));
        let tokens = net.initial_marking().count(&p);
        if tokens > 0 {
            s.push_str(&format!(
                "      <place id=\"{id}\"><name><text>{id}</text></name><initialMarking><text>{tokens}</text></initialMarking></place>\n"
            ));
        } else {
            s.push_str(&format!(
                "      <place id=\"{id}\"><name><text>{id}</text></name></place>\n"
            ));
        }
    }
    for t in net.transition_ids() {
        let id = escape(net.transition(t).name.as_str());
        match net.label(t) {
            Label::Tau => s.push_str(&format!(
                "      <transition id=\"{id}\"><name><text>tau</text></name><toolspecific tool=\"ProM\" version=\"6.4\" activity=\"$invisible$\"/></transition>\n"
            )),
            Label::Activity(a) => s.push_str(&format!(
                "      <transition id=\"{id}\"><name><text>{}</text></name></transition>\n",
                escape(a.as_str())
            )),
        }
    }
    let mut arc = 0;
    for t in net.transition_ids() {
        let tid = escape(net.transition(t).name.as_str());
        for p in net.preset_marking(t).iter().map(|(p, _)| *p) {
            arc += 1;
            s.push_str(&format!(
                "      <arc id=\"a{arc}\" source=\"{}\" target=\"{tid}\"/>\n",
                escape(net.place_name(p))
            ));
        }
        for p in net.postset_marking(t).iter().map(|(p, _)| *p) {
            arc += 1;
            s.push_str(&format!(
                "      <arc id=\"a{arc}\" source=\"{tid}\" target=\"{}\"/>\n",
                escape(net.place_name(p))
            ));
        }
    }
    s.push_str("    </page>\n    <finalmarkings>\n      <marking>\n");
    for (p, count) in net.final_marking().iter() {
        s.push_str(&format!(
            "        <place idref=\"{}\"><text>{count}</text></place>\n",
            escape(net.place_name(*p))
        ));
    }
    s.push_str("      </marking>\n    </finalmarkings>\n  </net>\n</pnml>\n");
    out.write_all(s.as_bytes()).map_err(|e| Error::io("<pnml output>", e))
}

#[derive(Default)]
struct TransitionDraft {
    id: String,
    name: Option<String>,
    invisible: bool,
}

#[derive(Default)]
struct ArcDraft {
    source: String,
    target: String,
    weight: u32,
}

pub fn parse_pnml(text: &str) -> Result<AcceptingPetriNet> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut stack: Vec<String> = Vec::new();
    let mut places: Vec<(String, u32)> = Vec::new();
    let mut transitions: Vec<TransitionDraft> = Vec::new();
    let mut arcs: Vec<ArcDraft> = Vec::new();
    let mut final_places: Vec<(String, u32)> = Vec::new();
    let mut saw_final = false;

    let mut place: Option<(String, u32)> = None;
    let mut transition: Option<TransitionDraft> = None;
    let mut arc: Option<ArcDraft> = None;
    let mut final_place: Option<(String, u32)> = None;

    loop {
        let position = reader.buffer_position();
        let event = reader
            .read_event()
            .map_err(|e| Error::xml(format!("PNML at byte {position}"), e))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let empty = matches!(event, Event::Empty(_));
                let name = local_name(e);
                let in_final = stack.iter().any(|s| s == "finalmarkings");
                match name.as_str() {
                    "place" if in_final => {
                        final_place = Some((attr(e, "idref")?.unwrap_or_default(), 1));
                    }
                    "place" => place = Some((required(e, "id")?, 0)),
                    "transition" => {
                        transition = Some(TransitionDraft {
                            id: required(e, "id")?,
                            ..Default::default()
                        })
                    }
                    "arc" => {
                        arc = Some(ArcDraft {
                            source: required(e, "source")?,
                            target: required(e, "target")?,
                            weight: 1,
                        })
                    }
                    "finalmarkings" => saw_final = true,
                    "toolspecific" => {
                        if let Some(t) = transition.as_mut() {
                            if attr(e, "activity")?.as_deref() == Some("$invisible$") {
                                t.invisible = true;
                            }
                        }
                    }
                    _ => {}
                }
                if empty {
                    close(
                        &name,
                        in_final,
                        &mut place,
                        &mut transition,
                        &mut arc,
                        &mut final_place,
                        &mut places,
                        &mut transitions,
                        &mut arcs,
                        &mut final_places,
                    );
                } else {
                    stack.push(name);
                }
            }
            Event::Text(t) => {
                let value = t.unescape().map_err(|e| Error::xml("PNML text", e))?.trim().to_string();
                let n = stack.len();
                if n < 2 || stack[n - 1] != "text" {
                    continue;
                }
                let parent = stack[n - 2].as_str();
                let in_final = stack.iter().any(|s| s == "finalmarkings");
                match parent {
                    "name" if n >= 3 && stack[n - 3] == "transition" => {
                        if let Some(t) = transition.as_mut() {
                            t.name = Some(value);
                        }
                    }
                    "initialMarking" => {
                        if let Some(p) = place.as_mut() {
                            p.1 = parse_count(&value)?;
                        }
                    }
                    "inscription" => {
                        if let Some(a) = arc.as_mut() {
                            a.weight = parse_count(&value)?;
                        }
                    }
                    "place" if in_final => {
                        if let Some(fp) = final_place.as_mut() {
                            fp.1 = parse_count(&value)?;
                        }
                    }
                    _ => {}
                }
            }
            Event::End(_) => {
                let name = stack.pop().unwrap_or_default();
                let in_final = stack.iter().any(|s| s == "finalmarkings");
                close(
                    &name,
                    in_final || name == "finalmarkings",
                    &mut place,
                    &mut transition,
                    &mut arc,
                    &mut final_place,
                    &mut places,
                    &mut transitions,
                    &mut arcs,
                    &mut final_places,
                );
            }
            Event::Eof => break,
            _ => {}
        }
    }

    let mut b = NetBuilder::new();
    let mut place_ids: HashMap<String, PlaceId> = HashMap::new();
    let mut initial = Marking::new();
    for (id, tokens) in &places {
        let p = b.add_place(id.clone());
        place_ids.insert(id.clone(), p);
        initial.insert_n(p, *tokens);
    }
    let mut transition_ids: HashMap<String, TransitionId> = HashMap::new();
    for t in &transitions {
        let label = if t.invisible {
            Label::Tau
        } else {
            Label::from_model_text(t.name.as_deref().unwrap_or(""))?
        };
        transition_ids.insert(t.id.clone(), b.add_transition(t.id.clone(), label));
    }
    let mut has_output = vec![false; places.len()];
    for a in &arcs {
        if a.weight != 1 {
            return Err(Error::InvalidNet(format!(
                "arc {} -> {} has weight {}; only unweighted arcs are supported",
                a.source, a.target, a.weight
            )));
        }
        match (
            place_ids.get(&a.source),
            transition_ids.get(&a.target),
            transition_ids.get(&a.source),
            place_ids.get(&a.target),
        ) {
            (Some(&p), Some(&t), _, _) => {
                has_output[p.index()] = true;
                b.arc_in(p, t);
            }
            (_, _, Some(&t), Some(&p)) => {
                b.arc_out(t, p);
            }
            _ => {
                return Err(Error::InvalidNet(format!(
                    "arc {} -> {} does not connect a place and a transition",
                    a.source, a.target
                )))
            }
        }
    }
    let final_marking = if saw_final {
        let mut m = Marking::new();
        for (id, count) in &final_places {
            let p = place_ids
                .get(id)
                .ok_or_else(|| Error::InvalidNet(format!("final marking names unknown place `{id}`")))?;
            m.insert_n(*p, *count);
        }
        m
    } else {
        let sinks: Vec<usize> = (0..places.len()).filter(|i| !has_output[*i]).collect();
        match sinks.as_slice() {
            [only] => Marking::singleton(PlaceId(*only as u32)),
            _ => Marking::new(),
        }
    };
    b.initial_marking(initial).final_marking(final_marking);
    b.build()
}

#[allow(clippy::too_many_arguments)]
fn close(
    name: &str,
    in_final: bool,
    place: &mut Option<(String, u32)>,
    transition: &mut Option<TransitionDraft>,
    arc: &mut Option<ArcDraft>,
    final_place: &mut Option<(String, u32)>,
    places: &mut Vec<(String, u32)>,
    transitions: &mut Vec<TransitionDraft>,
    arcs: &mut Vec<ArcDraft>,
    final_places: &mut Vec<(String, u32)>,
) {
    match name {
        "place" if in_final => final_places.extend(final_place.take()),
        "place" => places.extend(place.take()),
        "transition" => transitions.extend(transition.take()),
        "arc" => arcs.extend(arc.take()),
        _ => {}
    }
}

fn local_name(e: &BytesStart<'_>) -> String {
    String::from_utf8_lossy(e.local_name().as_ref()).into_owned()
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>> {
    match e
        .try_get_attribute(key)
        .map_err(|err| Error::xml("PNML attribute", err))?
    {
        Some(a) => Ok(Some(
            a.unescape_value()
                .map_err(|err| Error::xml("PNML attribute", err))?
                .into_owned(),
        )),
        None => Ok(None),
    }
}

fn required(e: &BytesStart<'_>, key: &str) -> Result<String> {
    attr(e, key)?.ok_or_else(|| Error::xml("PNML", format!("<{}> lacks attribute `{key}`", local_name(e))))
}

fn parse_count(text: &str) -> Result<u32> {
    text.parse()
        .map_err(|_| Error::xml("PNML", format!("`{text}` is not a token count")))
}
