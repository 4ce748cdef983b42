//! Alignments between traces (or fragments) and nets.
//!
//! The search runs over the synchronous product of a trace net and a model
//! net. Infix and postfix alignments use an [`AuxiliaryNet`] as model so that
//! the start marking is chosen by the search itself; the jump taken is
//! removed afterwards and becomes the alignment's start marking.
//!
//! [`AuxiliaryNet`]: crate::auxiliary::AuxiliaryNet

mod pipeline;
mod postprocess;
mod render;
mod search;
mod spn;
mod trace_net;
mod validate;

use std::fmt;
use std::str::FromStr;

pub use pipeline::{align, AlignConfig, Model};
pub use postprocess::postprocess;
pub use search::{search, Goal, Heuristic, SearchOutcome, ZeroHeuristic};
pub use spn::{build_spn, SpnMove, SynchronousProductNet};
pub use trace_net::build_trace_net;
pub use validate::{validate_alignment, AlignmentViolation, ValidationReport};

use crate::error::{Error, Result};
use crate::label::{ActivityLabel, Label};
use crate::net::{Marking, TransitionId};
use crate::trace::TraceKind;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AlignmentKind {
    Complete,
    Prefix,
    Infix,
    Postfix,
}

impl AlignmentKind {
    pub const ALL: [AlignmentKind; 4] = [
        AlignmentKind::Complete,
        AlignmentKind::Prefix,
        AlignmentKind::Infix,
        AlignmentKind::Postfix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlignmentKind::Complete => "complete",
            AlignmentKind::Prefix => "prefix",
            AlignmentKind::Infix => "infix",
            AlignmentKind::Postfix => "postfix",
        }
    }

    /// Whether the model part may start in any reachable marking.
    pub fn free_start(self) -> bool {
        matches!(self, AlignmentKind::Infix | AlignmentKind::Postfix)
    }

    /// Whether the model part must end in the final marking.
    pub fn anchored_end(self) -> bool {
        matches!(self, AlignmentKind::Complete | AlignmentKind::Postfix)
    }
}

impl fmt::Display for AlignmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlignmentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(AlignmentKind::Complete),
            "prefix" => Ok(AlignmentKind::Prefix),
            "infix" => Ok(AlignmentKind::Infix),
            "postfix" => Ok(AlignmentKind::Postfix),
            other => Err(Error::InvalidArgument(format!("unknown alignment kind `{other}`"))),
        }
    }
}

impl From<TraceKind> for AlignmentKind {
    fn from(kind: TraceKind) -> Self {
        match kind {
            TraceKind::Complete => AlignmentKind::Complete,
            TraceKind::Infix => AlignmentKind::Infix,
            TraceKind::Postfix => AlignmentKind::Postfix,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MoveType {
    Synchronous,
    Log,
    VisibleModel,
    InvisibleModel,
}

impl MoveType {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveType::Synchronous => "synchronous",
            MoveType::Log => "log",
            MoveType::VisibleModel => "visible_model",
            MoveType::InvisibleModel => "invisible_model",
        }
    }
}

/// Unit costs: deviations cost 1, matches and silent steps cost 0.
pub fn move_cost(move_type: MoveType) -> u32 {
    match move_type {
        MoveType::Synchronous | MoveType::InvisibleModel => 0,
        MoveType::Log | MoveType::VisibleModel => 1,
    }
}

/// The model side of a move.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelStep {
    pub transition: TransitionId,
    pub name: String,
    pub label: Label,
}

/// One column of an alignment; `None` stands for the skip symbol.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Move {
    pub log: Option<ActivityLabel>,
    pub model: Option<ModelStep>,
    pub move_type: MoveType,
}

impl Move {
    pub fn cost(&self) -> u32 {
        move_cost(self.move_type)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AlignmentStats {
    /// States settled by the search.
    pub expanded: usize,
    /// States pushed onto the frontier.
    pub queued: usize,
    /// Wall time of the whole pipeline in milliseconds.
    pub ms: f64,
    /// Wall time spent computing relevant markings.
    pub marking_ms: f64,
    /// Number of relevant markings offered to the search, if any.
    pub relevant_markings: Option<usize>,
}

/// An alignment against a model net. Markings and transition ids refer to
/// that net.
#[derive(Clone, Debug)]
pub struct Alignment {
    pub kind: AlignmentKind,
    pub moves: Vec<Move>,
    pub cost: u32,
    pub start_marking: Marking,
    pub end_marking: Marking,
    pub stats: AlignmentStats,
}

impl Alignment {
    pub fn count(&self, move_type: MoveType) -> usize {
        self.moves.iter().filter(|m| m.move_type == move_type).count()
    }

    /// Labels of the log side, skips removed.
    pub fn log_projection(&self) -> Vec<ActivityLabel> {
        self.moves.iter().filter_map(|m| m.log.clone()).collect()
    }

    /// Transitions of the model side, skips removed.
    pub fn model_projection(&self) -> Vec<TransitionId> {
        self.moves
            .iter()
            .filter_map(|m| m.model.as_ref().map(|s| s.transition))
            .collect()
    }
}
