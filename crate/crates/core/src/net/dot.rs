use std::fmt::Write;

use super::{AcceptingPetriNet, PlaceId, TransitionId};
use crate::label::Label;

/// Graphviz rendering of a net. `transition_style` may override the node
/// attributes of individual transitions (used to colour jump transitions).
pub fn net_to_dot(net: &AcceptingPetriNet, mut transition_style: impl FnMut(TransitionId) -> Option<String>) -> String {
    let mut out = String::new();
    out.push_str("digraph net {\n  rankdir=LR;\n");
    for p in net.places() {
        let tokens = net.initial_marking().count(&p);
        let extra = if net.final_marking().contains(&p) {
            ", peripheries=2"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {} [shape=circle, label=\"{}\", xlabel=\"{}\"{}];",
            place_node(p),
            if tokens > 0 {
                "●".repeat(tokens as usize)
            } else {
                String::new()
            },
            escape(net.place_name(p)),
            extra
        );
    }
    for t in net.transition_ids() {
        let tr = net.transition(t);
        let style = match transition_style(t) {
            Some(s) => s,
            None if tr.label.is_tau() => "style=filled, fillcolor=black, fontcolor=white".to_string(),
            None => String::new(),
        };
        let text = match &tr.label {
            Label::Tau => "τ".to_string(),
            Label::Activity(a) => a.to_string(),
        };
        let _ = writeln!(
            out,
            "  {} [shape=box, label=\"{}\", xlabel=\"{}\"{}{}];",
            transition_node(t),
            escape(&text),
            escape(&tr.name),
            if style.is_empty() { "" } else { ", " },
            style
        );
    }
    for t in net.transition_ids() {
        let tr = net.transition(t);
        for p in &tr.preset {
            let _ = writeln!(out, "  {} -> {};", place_node(*p), transition_node(t));
        }
        for p in &tr.postset {
            let _ = writeln!(out, "  {} -> {};", transition_node(t), place_node(*p));
        }
    }
    out.push_str("}\n");
    out
}

fn place_node(p: PlaceId) -> String {
    format!("p_{}", p.0)
}

fn transition_node(t: TransitionId) -> String {
    format!("t_{}", t.0)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
