//! Brute-force reference costs for small instances.
//!
//! Works directly on pairs (model marking, trace position) with layered
//! breadth-first search: layer `k` holds every pair reachable at cost `k`,
//! closed under the free moves (synchronous and silent). Nothing here is
//! shared with the alignment engine apart from net firing.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::alignment::AlignmentKind;
use crate::error::{Error, Result};
use crate::label::{ActivityLabel, Label};
use crate::net::{AcceptingPetriNet, Marking};
use crate::trace::Trace;

type State = (Marking, usize);

/// Optimal alignment cost of `trace` as a fragment of the given kind.
pub fn brute_force_cost(net: &AcceptingPetriNet, trace: &Trace, kind: AlignmentKind, cap: usize) -> Result<u32> {
    let starts: Vec<Marking> = if kind.free_start() {
        net.reachable_markings(cap)?.into_iter().collect()
    } else {
        vec![net.initial_marking().clone()]
    };
    let sigma = &trace.activities;
    let goal = |(m, i): &State| *i == sigma.len() && (!kind.anchored_end() || m == net.final_marking());

    let mut seen: HashSet<State> = HashSet::new();
    let mut layer: Vec<State> = Vec::new();
    for m in starts {
        let s = (m, 0);
        if seen.insert(s.clone()) {
            layer.push(s);
        }
    }
    let mut cost = 0u32;
    while !layer.is_empty() {
        // close the layer under free moves
        let mut queue: VecDeque<State> = layer.iter().cloned().collect();
        let mut closed = Vec::new();
        while let Some(state) = queue.pop_front() {
            let (m, i) = &state;
            for t in net.enabled_transitions(m) {
                let free = match net.label(t) {
                    Label::Tau => Some(*i),
                    Label::Activity(a) if *i < sigma.len() && &sigma[*i] == a => Some(i + 1),
                    Label::Activity(_) => None,
                };
                if let Some(j) = free {
                    let next = (net.fire(m, t)?, j);
                    if !seen.contains(&next) {
                        if seen.len() >= cap {
                            return Err(Error::StateSpaceCapExceeded { cap });
                        }
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
            closed.push(state);
        }
        if closed.iter().any(goal) {
            return Ok(cost);
        }
        let mut next_layer = Vec::new();
        for (m, i) in &closed {
            let mut successors = Vec::new();
            if *i < sigma.len() {
                successors.push((m.clone(), i + 1));
            }
            for t in net.enabled_transitions(m) {
                if !net.label(t).is_tau() {
                    successors.push((net.fire(m, t)?, *i));
                }
            }
            for s in successors {
                if !seen.contains(&s) {
                    if seen.len() >= cap {
                        return Err(Error::StateSpaceCapExceeded { cap });
                    }
                    seen.insert(s.clone());
                    next_layer.push(s);
                }
            }
        }
        layer = next_layer;
        cost += 1;
    }
    Err(Error::NoGoalReachable)
}

/// Infix or postfix cost, minimised over all reachable start markings.
pub fn brute_force_fragment_cost(
    net: &AcceptingPetriNet,
    trace: &Trace,
    kind: AlignmentKind,
    cap: usize,
) -> Result<u32> {
    if !kind.free_start() {
        return Err(Error::InvalidArgument(format!("{kind} is not a fragment kind")));
    }
    brute_force_cost(net, trace, kind, cap)
}

pub fn brute_force_complete_cost(net: &AcceptingPetriNet, trace: &Trace, cap: usize) -> Result<u32> {
    brute_force_cost(net, trace, AlignmentKind::Complete, cap)
}

/// All visible label sequences of length at most `max_len` that some run of
/// the net produces between two reachable markings.
pub fn enumerate_model_fragments(
    net: &AcceptingPetriNet,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<Vec<ActivityLabel>>> {
    let mut seen: HashSet<(Marking, Vec<ActivityLabel>)> = HashSet::new();
    let mut queue = VecDeque::new();
    for m in net.reachable_markings(cap)? {
        let s = (m, Vec::new());
        seen.insert(s.clone());
        queue.push_back(s);
    }
    while let Some((m, seq)) = queue.pop_front() {
        for t in net.enabled_transitions(&m) {
            let mut next_seq = seq.clone();
            if let Label::Activity(a) = net.label(t) {
                if seq.len() == max_len {
                    continue;
                }
                next_seq.push(a.clone());
            }
            let next = (net.fire(&m, t)?, next_seq);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::StateSpaceCapExceeded { cap });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().map(|(_, seq)| seq).collect())
}
