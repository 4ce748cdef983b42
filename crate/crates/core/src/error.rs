use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state space exceeds the cap of {cap} markings")]
    StateSpaceCapExceeded { cap: usize },

    #[error("transition `{transition}` is not enabled in marking {marking}")]
    NotEnabled { transition: String, marking: String },

    #[error("invalid net: {0}")]
    InvalidNet(String),

    #[error("invalid activity label `{0}`")]
    InvalidLabel(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("arity error at position {position}: {message}")]
    Arity { position: usize, message: String },

    #[error("unknown tree node `{0}`")]
    UnknownNode(String),

    #[error("no leaf of the tree carries one of the given labels")]
    NoMatchingLeaf,

    #[error("relevant marking {0} puts more than one token on a place")]
    UnsupportedMarking(String),

    #[error("no relevant markings given")]
    EmptyRelevantMarkings,

    #[error("no goal state reachable in the synchronous product net")]
    NoGoalReachable,

    #[error("malformed search path: {0}")]
    MalformedPath(String),

    #[error("the advanced method requires a process tree model")]
    MethodRequiresTree,

    #[error("event log contains no usable traces")]
    EmptyLog,

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("XML error in {context}: {message}")]
    Xml { context: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn xml(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Xml {
            context: context.into(),
            message: message.to_string(),
        }
    }
}
