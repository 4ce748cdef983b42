use super::MoveType;
use crate::label::Label;
use crate::net::{AcceptingPetriNet, Marking, NetBuilder, PlaceId, TransitionId};

/// What an SPN transition stands for. Positions are 0-based trace indices;
/// transitions are ids in the model net.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpnMove {
    Log { position: usize },
    Model { transition: TransitionId },
    Sync { position: usize, transition: TransitionId },
}

/// Product of a model net and a trace net.
///
/// Model places and transitions keep their ids; trace places follow the
/// model places. Transition ids are laid out as model moves, then log moves,
/// then synchronous moves.
#[derive(Clone, Debug)]
pub struct SynchronousProductNet {
    pub net: AcceptingPetriNet,
    pub moves: Vec<SpnMove>,
    pub move_types: Vec<MoveType>,
    pub trace_final_place: PlaceId,
    pub model_final_marking: Marking,
    pub model_place_count: usize,
}

impl SynchronousProductNet {
    pub fn spn_move(&self, t: TransitionId) -> SpnMove {
        self.moves[t.index()]
    }

    pub fn move_type(&self, t: TransitionId) -> MoveType {
        self.move_types[t.index()]
    }

    /// The model part of an SPN marking.
    pub fn model_marking(&self, m: &Marking) -> Marking {
        let mut out = m.clone();
        out.retain(|p| p.index() < self.model_place_count);
        out
    }
}

pub fn build_spn(model: &AcceptingPetriNet, trace_net: &AcceptingPetriNet) -> SynchronousProductNet {
    let mut b = NetBuilder::new();
    for p in model.places() {
        b.add_place(format!("model:{}", model.place_name(p)));
    }
    let offset = model.place_count() as u32;
    let shift = |p: PlaceId| PlaceId(p.0 + offset);
    for p in trace_net.places() {
        b.add_place(format!("trace:{}", trace_net.place_name(p)));
    }
    let mut moves = Vec::new();
    let mut move_types = Vec::new();
    for t in model.transition_ids() {
        let tr = model.transition(t);
        let id = b.add_transition(format!("model:{}", tr.name), tr.label.clone());
        for &p in &tr.preset {
            b.arc_in(p, id);
        }
        for &p in &tr.postset {
            b.arc_out(id, p);
        }
        moves.push(SpnMove::Model { transition: t });
        move_types.push(if tr.label.is_tau() {
            MoveType::InvisibleModel
        } else {
            MoveType::VisibleModel
        });
    }
    for (position, e) in trace_net.transition_ids().enumerate() {
        let tr = trace_net.transition(e);
        let id = b.add_transition(format!("log:{}", tr.name), tr.label.clone());
        for &p in &tr.preset {
            b.arc_in(shift(p), id);
        }
        for &p in &tr.postset {
            b.arc_out(id, shift(p));
        }
        moves.push(SpnMove::Log { position });
        move_types.push(MoveType::Log);
    }
    for (position, e) in trace_net.transition_ids().enumerate() {
        let log_side = trace_net.transition(e);
        let Label::Activity(a) = &log_side.label else {
            continue;
        };
        for t in model.transition_ids() {
            let model_side = model.transition(t);
            if model_side.label.as_activity() != Some(a) {
                continue;
            }
            let id = b.add_transition(
                format!("sync:{}:{}", log_side.name, model_side.name),
                model_side.label.clone(),
            );
            for &p in &model_side.preset {
                b.arc_in(p, id);
            }
            for &p in &log_side.preset {
                b.arc_in(shift(p), id);
            }
            for &p in &model_side.postset {
                b.arc_out(id, p);
            }
            for &p in &log_side.postset {
                b.arc_out(id, shift(p));
            }
            moves.push(SpnMove::Sync {
                position,
                transition: t,
            });
            move_types.push(MoveType::Synchronous);
        }
    }
    let shift_marking = |m: &Marking| Marking::from_counts(m.iter().map(|(p, c)| (shift(*p), c)));
    let trace_final = shift_marking(trace_net.final_marking());
    let trace_final_place = *trace_final.elements().next().expect("trace net has a final place");
    b.initial_marking(
        model
            .initial_marking()
            .union(&shift_marking(trace_net.initial_marking())),
    )
    .final_marking(model.final_marking().union(&trace_final));
    SynchronousProductNet {
        net: b.build().expect("prefixed names are unique"),
        moves,
        move_types,
        trace_final_place,
        model_final_marking: model.final_marking().clone(),
        model_place_count: model.place_count(),
    }
}
