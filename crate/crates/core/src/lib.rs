pub mod alignment;
pub mod auxiliary;
pub mod bench;
pub mod error;
pub mod label;
pub mod multiset;
pub mod net;
pub mod oracle;
pub mod running_example;
pub mod trace;
pub mod tree;

pub use alignment::{align, AlignConfig, Alignment, AlignmentKind, Model, Move, MoveType};
pub use auxiliary::Method;
pub use error::{Error, Result};
pub use label::{ActivityLabel, Label};
pub use multiset::Multiset;
pub use net::{AcceptingPetriNet, Marking, NetBuilder, PlaceId, TransitionId};
pub use trace::{EventLog, Trace, TraceKind};
pub use tree::{NodeId, Operator, ProcessTree};
