use serde::Serialize;

use super::Alignment;
use crate::label::SKIP;
use crate::net::AcceptingPetriNet;

#[derive(Serialize)]
struct AlignmentJson<'a> {
    kind: &'a str,
    cost: u32,
    moves: Vec<MoveJson<'a>>,
    start_marking: Vec<String>,
    end_marking: Vec<String>,
    stats: StatsJson,
}

/// Skips are `null`.
#[derive(Serialize)]
struct MoveJson<'a> {
    log: Option<&'a str>,
    model_transition: Option<&'a str>,
    move_type: &'a str,
}

#[derive(Serialize)]
struct StatsJson {
    expanded: usize,
    queued: usize,
    ms: f64,
}

impl Alignment {
    /// JSON document with markings given as place names (with repetition)
    /// of `net`, the net the alignment refers to.
    pub fn to_json(&self, net: &AcceptingPetriNet) -> serde_json::Value {
        let doc = AlignmentJson {
            kind: self.kind.as_str(),
            cost: self.cost,
            moves: self
                .moves
                .iter()
                .map(|m| MoveJson {
                    log: m.log.as_ref().map(|a| a.as_str()),
                    model_transition: m.model.as_ref().map(|s| s.name.as_str()),
                    move_type: m.move_type.as_str(),
                })
                .collect(),
            start_marking: net.marking_names(&self.start_marking),
            end_marking: net.marking_names(&self.end_marking),
            stats: StatsJson {
                expanded: self.stats.expanded,
                queued: self.stats.queued,
                ms: self.stats.ms,
            },
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }

    /// Two-row move table (log row above model row) with the transition names
    /// underneath, followed by cost and markings.
    pub fn render_pretty(&self, net: &AcceptingPetriNet) -> String {
        let mut rows: [Vec<String>; 3] = [vec!["log".into()], vec!["model".into()], vec!["".into()]];
        for m in &self.moves {
            rows[0].push(m.log.as_ref().map_or(SKIP.to_string(), |a| a.to_string()));
            match &m.model {
                Some(step) => {
                    rows[1].push(step.label.to_string());
                    rows[2].push(step.name.clone());
                }
                None => {
                    rows[1].push(SKIP.to_string());
                    rows[2].push(String::new());
                }
            }
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (r, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}", w = *w))
                .collect();
            let line = if r == 2 { cells.join("   ") } else { cells.join(" | ") };
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str(&format!(
            "kind: {}  cost: {}  start: {}  end: {}\n",
            self.kind,
            self.cost,
            net.display_marking(&self.start_marking),
            net.display_marking(&self.end_marking)
        ));
        out
    }
}
