use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Text reserved for the skip symbol in rendered alignments.
pub const SKIP: &str = ">>";

/// An observable activity name.
///
/// Never empty and never one of the reserved spellings of τ (`tau`, `τ`) or
/// of the skip symbol (`>>`, `≫`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivityLabel(Arc<str>);

impl ActivityLabel {
    pub fn new(name: &str) -> Result<Self> {
        if is_reserved(name) || name.trim().is_empty() {
            return Err(Error::InvalidLabel(name.to_string()));
        }
        Ok(ActivityLabel(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_reserved(name: &str) -> bool {
    matches!(name, "" | "tau" | "τ" | ">>" | "≫")
}

pub(crate) fn is_tau_spelling(name: &str) -> bool {
    matches!(name, "tau" | "τ")
}

impl fmt::Display for ActivityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ActivityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl std::str::FromStr for ActivityLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ActivityLabel::new(s)
    }
}

/// Transition label: an activity or the silent label τ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Activity(ActivityLabel),
    Tau,
}

impl Label {
    pub fn activity(name: &str) -> Result<Self> {
        ActivityLabel::new(name).map(Label::Activity)
    }

    /// Parses a label the way model files spell it: `tau`/`τ`/empty become τ.
    pub fn from_model_text(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.is_empty() || is_tau_spelling(name) {
            Ok(Label::Tau)
        } else {
            Label::activity(name)
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn as_activity(&self) -> Option<&ActivityLabel> {
        match self {
            Label::Activity(a) => Some(a),
            Label::Tau => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Activity(a) => a.fmt(f),
            Label::Tau => f.write_str("τ"),
        }
    }
}
