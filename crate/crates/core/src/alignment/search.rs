use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use super::{move_cost, SynchronousProductNet};
use crate::error::{Error, Result};
use crate::net::{Marking, TransitionId};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Goal {
    /// The SPN's final marking: trace consumed and model in its final marking.
    Final,
    /// Trace consumed, model part arbitrary.
    TraceConsumed,
}

impl Goal {
    fn reached(self, spn: &SynchronousProductNet, m: &Marking) -> bool {
        match self {
            Goal::Final => m == spn.net.final_marking(),
            Goal::TraceConsumed => m.contains(&spn.trace_final_place),
        }
    }
}

/// Lower bound on the remaining cost from an SPN marking. Must be consistent
/// (never decrease by more than a move's cost along a move) for the search to
/// stay optimal with its closed set.
pub trait Heuristic {
    fn estimate(&self, spn: &SynchronousProductNet, marking: &Marking) -> u32;
}

/// Turns the search into plain uniform-cost search.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroHeuristic;

impl Heuristic for ZeroHeuristic {
    fn estimate(&self, _: &SynchronousProductNet, _: &Marking) -> u32 {
        0
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub path: Vec<TransitionId>,
    pub cost: u32,
    pub final_marking: Marking,
    pub expanded: usize,
    pub queued: usize,
}

struct State {
    marking: Marking,
    cost: u32,
    parent: Option<(usize, TransitionId)>,
    closed: bool,
}

/// Best-first search from the SPN's initial marking. Ties on priority are
/// broken by insertion order, so results are deterministic. At most `cap`
/// distinct markings are generated.
pub fn search(spn: &SynchronousProductNet, goal: Goal, heuristic: &dyn Heuristic, cap: usize) -> Result<SearchOutcome> {
    let net = &spn.net;
    let start = net.initial_marking().clone();
    let mut states = vec![State {
        marking: start.clone(),
        cost: 0,
        parent: None,
        closed: false,
    }];
    let mut index: HashMap<Marking, usize> = HashMap::from([(start.clone(), 0)]);
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Reverse((heuristic.estimate(spn, &start), seq, 0usize)));
    let mut queued = 1;
    let mut expanded = 0;
    while let Some(Reverse((_, _, i))) = heap.pop() {
        if states[i].closed {
            continue;
        }
        states[i].closed = true;
        expanded += 1;
        if goal.reached(spn, &states[i].marking) {
            let mut path = Vec::new();
            let mut cursor = i;
            while let Some((parent, t)) = states[cursor].parent {
                path.push(t);
                cursor = parent;
            }
            path.reverse();
            return Ok(SearchOutcome {
                path,
                cost: states[i].cost,
                final_marking: states[i].marking.clone(),
                expanded,
                queued,
            });
        }
        let current = states[i].marking.clone();
        let g = states[i].cost;
        for t in net.enabled_transitions(&current) {
            let next = net.fire_enabled(&current, t);
            let cost = g + move_cost(spn.move_type(t));
            let j = match index.entry(next) {
                Entry::Occupied(e) => {
                    let j = *e.get();
                    if states[j].closed || states[j].cost <= cost {
                        continue;
                    }
                    states[j].cost = cost;
                    states[j].parent = Some((i, t));
                    j
                }
                Entry::Vacant(e) => {
                    if states.len() >= cap {
                        return Err(Error::StateSpaceCapExceeded { cap });
                    }
                    let j = states.len();
                    states.push(State {
                        marking: e.key().clone(),
                        cost,
                        parent: Some((i, t)),
                        closed: false,
                    });
                    e.insert(j);
                    j
                }
            };
            seq += 1;
            queued += 1;
            let h = heuristic.estimate(spn, &states[j].marking);
            heap.push(Reverse((cost + h, seq, j)));
        }
    }
    Err(Error::NoGoalReachable)
}
