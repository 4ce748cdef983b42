use super::{Alignment, AlignmentKind, AlignmentStats, ModelStep, Move, SearchOutcome, SpnMove, SynchronousProductNet};
use crate::auxiliary::AuxiliaryNet;
use crate::error::{Error, Result};
use crate::net::{AcceptingPetriNet, TransitionId};
use crate::trace::Trace;

/// Turns a search path into an alignment against `model`. With an auxiliary
/// net, its single jump move is dropped and its marking becomes the start
/// marking; a path without a jump (only possible for infixes consisting of
/// log moves) is anchored at the final marking.
pub fn postprocess(
    outcome: &SearchOutcome,
    spn: &SynchronousProductNet,
    model: &AcceptingPetriNet,
    aux: Option<&AuxiliaryNet>,
    trace: &Trace,
    kind: AlignmentKind,
) -> Result<Alignment> {
    let step = |t: TransitionId| {
        let tr = model.transition(t);
        ModelStep {
            transition: t,
            name: tr.name.clone(),
            label: tr.label.clone(),
        }
    };
    let mut moves = Vec::with_capacity(outcome.path.len());
    let mut jump = None;
    for &t in &outcome.path {
        let move_type = spn.move_type(t);
        match spn.spn_move(t) {
            SpnMove::Log { position } => moves.push(Move {
                log: Some(trace.activities[position].clone()),
                model: None,
                move_type,
            }),
            SpnMove::Model { transition } => {
                if let Some(m) = aux.and_then(|a| a.jump_marking(transition)) {
                    if jump.is_some() {
                        return Err(Error::MalformedPath("more than one jump move".to_string()));
                    }
                    if moves.iter().any(|mv: &Move| mv.model.is_some()) {
                        return Err(Error::MalformedPath("jump after a model move".to_string()));
                    }
                    jump = Some(m.clone());
                    continue;
                }
                moves.push(Move {
                    log: None,
                    model: Some(step(transition)),
                    move_type,
                });
            }
            SpnMove::Sync { position, transition } => moves.push(Move {
                log: Some(trace.activities[position].clone()),
                model: Some(step(transition)),
                move_type,
            }),
        }
    }
    let (start_marking, end_marking) = match (aux, jump) {
        (None, _) => (
            model.initial_marking().clone(),
            spn.model_marking(&outcome.final_marking),
        ),
        (Some(_), Some(start)) => (start, spn.model_marking(&outcome.final_marking)),
        (Some(_), None) => (model.final_marking().clone(), model.final_marking().clone()),
    };
    let mut marking = start_marking.clone();
    for mv in &moves {
        if let Some(s) = &mv.model {
            marking = model
                .fire(&marking, s.transition)
                .map_err(|e| Error::MalformedPath(e.to_string()))?;
        }
    }
    if marking != end_marking {
        return Err(Error::MalformedPath(
            "model moves do not reach the end marking".to_string(),
        ));
    }
    let cost = moves.iter().map(Move::cost).sum();
    debug_assert_eq!(cost, outcome.cost);
    Ok(Alignment {
        kind,
        moves,
        cost,
        start_marking,
        end_marking,
        stats: AlignmentStats {
            expanded: outcome.expanded,
            queued: outcome.queued,
            ..Default::default()
        },
    })
}
