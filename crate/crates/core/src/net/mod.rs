//! Accepting Petri nets with unweighted arcs, markings and firing semantics.

mod dot;
mod pnml;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

pub use dot::net_to_dot;
pub use pnml::{load_pnml, parse_pnml, write_pnml};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::multiset::Multiset;

pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PlaceId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TransitionId(pub u32);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TransitionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A marking is a multiset of places; its canonical encoding is the sorted
/// `(place, count)` list of the underlying [`Multiset`].
pub type Marking = Multiset<PlaceId>;

#[derive(Clone, Debug)]
pub struct Transition {
    pub name: String,
    pub label: Label,
    pub preset: Vec<PlaceId>,
    pub postset: Vec<PlaceId>,
}

/// `(P, T, F, m_i, m_f, λ)` with opaque ids and separately kept names.
#[derive(Clone, Debug)]
pub struct AcceptingPetriNet {
    place_names: Vec<String>,
    transitions: Vec<Transition>,
    initial: Marking,
    final_marking: Marking,
    consumers: Vec<Vec<TransitionId>>,
    sourceless: Vec<TransitionId>,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
}

#[derive(Default, Clone, Debug)]
pub struct NetBuilder {
    places: Vec<String>,
    transitions: Vec<(String, Label)>,
    inputs: BTreeSet<(TransitionId, PlaceId)>,
    outputs: BTreeSet<(TransitionId, PlaceId)>,
    initial: Marking,
    final_marking: Marking,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self, name: impl Into<String>) -> PlaceId {
        self.places.push(name.into());
        PlaceId((self.places.len() - 1) as u32)
    }

    pub fn add_transition(&mut self, name: impl Into<String>, label: Label) -> TransitionId {
        self.transitions.push((name.into(), label));
        TransitionId((self.transitions.len() - 1) as u32)
    }

    /// Arc place → transition. Repeated arcs collapse (arcs are unweighted).
    pub fn arc_in(&mut self, place: PlaceId, transition: TransitionId) -> &mut Self {
        self.inputs.insert((transition, place));
        self
    }

    /// Arc transition → place.
    pub fn arc_out(&mut self, transition: TransitionId, place: PlaceId) -> &mut Self {
        self.outputs.insert((transition, place));
        self
    }

    pub fn initial_marking(&mut self, marking: Marking) -> &mut Self {
        self.initial = marking;
        self
    }

    pub fn final_marking(&mut self, marking: Marking) -> &mut Self {
        self.final_marking = marking;
        self
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn build(self) -> Result<AcceptingPetriNet> {
        let mut place_index = HashMap::new();
        for (i, name) in self.places.iter().enumerate() {
            if place_index.insert(name.clone(), PlaceId(i as u32)).is_some() {
                return Err(Error::InvalidNet(format!("duplicate place `{name}`")));
            }
        }
        let mut transition_index = HashMap::new();
        for (i, (name, _)) in self.transitions.iter().enumerate() {
            if transition_index.insert(name.clone(), TransitionId(i as u32)).is_some() {
                return Err(Error::InvalidNet(format!("duplicate transition `{name}`")));
            }
        }
        let n_places = self.places.len();
        let n_transitions = self.transitions.len();
        let check = |t: TransitionId, p: PlaceId| {
            if t.index() >= n_transitions || p.index() >= n_places {
                Err(Error::InvalidNet(format!("arc references unknown node ({t:?}, {p:?})")))
            } else {
                Ok(())
            }
        };
        let mut transitions: Vec<Transition> = self
            .transitions
            .into_iter()
            .map(|(name, label)| Transition {
                name,
                label,
                preset: Vec::new(),
                postset: Vec::new(),
            })
            .collect();
        let mut consumers = vec![Vec::new(); n_places];
        for &(t, p) in &self.inputs {
            check(t, p)?;
            transitions[t.index()].preset.push(p);
            consumers[p.index()].push(t);
        }
        for &(t, p) in &self.outputs {
            check(t, p)?;
            transitions[t.index()].postset.push(p);
        }
        for list in &mut consumers {
            list.sort();
        }
        for m in [&self.initial, &self.final_marking] {
            if let Some((p, _)) = m.iter().find(|(p, _)| p.index() >= n_places) {
                return Err(Error::InvalidNet(format!("marking references unknown place {p:?}")));
            }
        }
        let sourceless = transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| t.preset.is_empty())
            .map(|(i, _)| TransitionId(i as u32))
            .collect();
        Ok(AcceptingPetriNet {
            place_names: self.places,
            transitions,
            initial: self.initial,
            final_marking: self.final_marking,
            consumers,
            sourceless,
            place_index,
            transition_index,
        })
    }
}

impl AcceptingPetriNet {
    pub fn place_count(&self) -> usize {
        self.place_names.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        (0..self.place_names.len() as u32).map(PlaceId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> + '_ {
        (0..self.transitions.len() as u32).map(TransitionId)
    }

    pub fn place_name(&self, place: PlaceId) -> &str {
        &self.place_names[place.index()]
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.index()]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn label(&self, t: TransitionId) -> &Label {
        &self.transitions[t.index()].label
    }

    pub fn place_by_name(&self, name: &str) -> Option<PlaceId> {
        self.place_index.get(name).copied()
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransitionId> {
        self.transition_index.get(name).copied()
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    pub fn final_marking(&self) -> &Marking {
        &self.final_marking
    }

    pub fn preset_marking(&self, t: TransitionId) -> Marking {
        self.transitions[t.index()].preset.iter().copied().collect()
    }

    pub fn postset_marking(&self, t: TransitionId) -> Marking {
        self.transitions[t.index()].postset.iter().copied().collect()
    }

    /// Builds a marking from place names, e.g. `["p2", "p5"]`.
    pub fn marking_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Marking> {
        names
            .iter()
            .map(|n| {
                self.place_by_name(n.as_ref())
                    .ok_or_else(|| Error::InvalidNet(format!("unknown place `{}`", n.as_ref())))
            })
            .collect()
    }

    /// Place names with repetition, in canonical order.
    pub fn marking_names(&self, marking: &Marking) -> Vec<String> {
        marking.elements().map(|p| self.place_name(*p).to_string()).collect()
    }

    /// Renders a marking with place names, e.g. `[p2,p5]`.
    pub fn display_marking(&self, marking: &Marking) -> String {
        marking.map(|p| self.place_name(*p).to_string()).to_string()
    }

    pub fn is_enabled(&self, marking: &Marking, t: TransitionId) -> bool {
        self.transitions[t.index()].preset.iter().all(|p| marking.contains(p))
    }

    /// Transitions enabled in `marking`, in ascending id order.
    pub fn enabled_transitions(&self, marking: &Marking) -> Vec<TransitionId> {
        let mut candidates: Vec<TransitionId> = marking
            .iter()
            .flat_map(|(p, _)| self.consumers[p.index()].iter().copied())
            .chain(self.sourceless.iter().copied())
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        candidates.retain(|t| self.is_enabled(marking, *t));
        candidates
    }

    pub fn fire(&self, marking: &Marking, t: TransitionId) -> Result<Marking> {
        if !self.is_enabled(marking, t) {
            return Err(Error::NotEnabled {
                transition: self.transitions[t.index()].name.clone(),
                marking: self.display_marking(marking),
            });
        }
        Ok(self.fire_enabled(marking, t))
    }

    /// Fires a transition already known to be enabled.
    pub(crate) fn fire_enabled(&self, marking: &Marking, t: TransitionId) -> Marking {
        let transition = &self.transitions[t.index()];
        let mut next = marking.clone();
        for p in &transition.preset {
            next.remove_one(p);
        }
        for p in &transition.postset {
            next.insert(*p);
        }
        next
    }

    /// Breadth-first closure of firing from the initial marking.
    pub fn reachable_markings(&self, cap: usize) -> Result<BTreeSet<Marking>> {
        Ok(self.reachability_graph(cap)?.markings.into_iter().collect())
    }

    fn reachability_graph(&self, cap: usize) -> Result<ReachabilityGraph> {
        let mut index: HashMap<Marking, usize> = HashMap::new();
        let mut markings = vec![self.initial.clone()];
        let mut successors: Vec<Vec<usize>> = vec![Vec::new()];
        index.insert(self.initial.clone(), 0);
        if cap == 0 {
            return Err(Error::StateSpaceCapExceeded { cap });
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let current = markings[i].clone();
            for t in self.enabled_transitions(&current) {
                let next = self.fire_enabled(&current, t);
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if markings.len() >= cap {
                            return Err(Error::StateSpaceCapExceeded { cap });
                        }
                        let j = markings.len();
                        index.insert(next.clone(), j);
                        markings.push(next);
                        successors.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                successors[i].push(j);
            }
        }
        Ok(ReachabilityGraph { markings, successors })
    }

    /// Markings reachable from `from` (inclusive), bounded by `cap`.
    pub fn reachable_from(&self, from: &Marking, cap: usize) -> Result<BTreeSet<Marking>> {
        let mut seen = BTreeSet::from([from.clone()]);
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(m) = queue.pop_front() {
            for t in self.enabled_transitions(&m) {
                let next = self.fire_enabled(&m, t);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return Err(Error::StateSpaceCapExceeded { cap });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// Structural workflow-net checks plus the two soundness consequences the
    /// alignment machinery relies on: boundedness (within `cap`) and that the
    /// final marking stays reachable from every reachable marking.
    pub fn validate_workflow_net(&self, cap: usize) -> WorkflowReport {
        let mut violations = Vec::new();
        let n = self.place_count();
        let mut has_input = vec![false; n];
        let mut has_output = vec![false; n];
        for t in &self.transitions {
            for p in &t.postset {
                has_input[p.index()] = true;
            }
            for p in &t.preset {
                has_output[p.index()] = true;
            }
        }
        let sources: Vec<PlaceId> = self.places().filter(|p| !has_input[p.index()]).collect();
        let sinks: Vec<PlaceId> = self.places().filter(|p| !has_output[p.index()]).collect();
        let names = |ps: &[PlaceId]| ps.iter().map(|p| self.place_name(*p).to_string()).collect();
        match sources.len() {
            0 => violations.push(NetViolation::NoSource),
            1 => {}
            _ => violations.push(NetViolation::MultipleSources(names(&sources))),
        }
        match sinks.len() {
            0 => violations.push(NetViolation::NoSink),
            1 => {}
            _ => violations.push(NetViolation::MultipleSinks(names(&sinks))),
        }
        for t in &self.transitions {
            if t.preset.is_empty() || t.postset.is_empty() {
                violations.push(NetViolation::NotOnPath(t.name.clone()));
            }
        }
        if sources.len() == 1 && sinks.len() == 1 {
            let (source, sink) = (sources[0], sinks[0]);
            let forward = self.structural_closure(source, true);
            let backward = self.structural_closure(sink, false);
            for p in self.places() {
                let node = Node::Place(p);
                if !forward.contains(&node) || !backward.contains(&node) {
                    violations.push(NetViolation::NotOnPath(self.place_name(p).to_string()));
                }
            }
            for t in self.transition_ids() {
                let node = Node::Transition(t);
                let name = &self.transitions[t.index()].name;
                let already = violations
                    .iter()
                    .any(|v| matches!(v, NetViolation::NotOnPath(n) if n == name));
                if !already && (!forward.contains(&node) || !backward.contains(&node)) {
                    violations.push(NetViolation::NotOnPath(name.clone()));
                }
            }
            if self.initial != Marking::singleton(source) {
                violations.push(NetViolation::InitialMarkingNotSource);
            }
            if self.final_marking != Marking::singleton(sink) {
                violations.push(NetViolation::FinalMarkingNotSink);
            }
        }
        if violations.is_empty() {
            match self.reachability_graph(cap) {
                Err(_) => violations.push(NetViolation::StateSpaceCapExceeded(cap)),
                Ok(graph) => {
                    let stuck = graph.cannot_reach(&self.final_marking);
                    if let Some(&first) = stuck.first() {
                        violations.push(NetViolation::FinalMarkingUnreachable(
                            self.display_marking(&graph.markings[first]),
                        ));
                    }
                }
            }
        }
        WorkflowReport { violations }
    }

    fn structural_closure(&self, start: PlaceId, forward: bool) -> BTreeSet<Node> {
        let mut seen = BTreeSet::from([Node::Place(start)]);
        let mut queue = VecDeque::from([Node::Place(start)]);
        while let Some(node) = queue.pop_front() {
            let next: Vec<Node> = match (node, forward) {
                (Node::Place(p), true) => self.consumers[p.index()].iter().map(|t| Node::Transition(*t)).collect(),
                (Node::Place(p), false) => self
                    .transition_ids()
                    .filter(|t| self.transitions[t.index()].postset.contains(&p))
                    .map(Node::Transition)
                    .collect(),
                (Node::Transition(t), true) => self.transitions[t.index()]
                    .postset
                    .iter()
                    .map(|p| Node::Place(*p))
                    .collect(),
                (Node::Transition(t), false) => self.transitions[t.index()]
                    .preset
                    .iter()
                    .map(|p| Node::Place(*p))
                    .collect(),
            };
            for n in next {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Place(PlaceId),
    Transition(TransitionId),
}

struct ReachabilityGraph {
    markings: Vec<Marking>,
    successors: Vec<Vec<usize>>,
}

impl ReachabilityGraph {
    /// Indices of markings from which `target` is unreachable.
    fn cannot_reach(&self, target: &Marking) -> Vec<usize> {
        let mut predecessors = vec![Vec::new(); self.markings.len()];
        for (i, succ) in self.successors.iter().enumerate() {
            for &j in succ {
                predecessors[j].push(i);
            }
        }
        let mut good = vec![false; self.markings.len()];
        let mut queue: VecDeque<usize> = self
            .markings
            .iter()
            .enumerate()
            .filter(|(_, m)| *m == target)
            .map(|(i, _)| i)
            .collect();
        for &i in &queue {
            good[i] = true;
        }
        while let Some(j) = queue.pop_front() {
            for &i in &predecessors[j] {
                if !good[i] {
                    good[i] = true;
                    queue.push_back(i);
                }
            }
        }
        (0..self.markings.len()).filter(|i| !good[*i]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetViolation {
    NoSource,
    MultipleSources(Vec<String>),
    NoSink,
    MultipleSinks(Vec<String>),
    NotOnPath(String),
    InitialMarkingNotSource,
    FinalMarkingNotSink,
    FinalMarkingUnreachable(String),
    StateSpaceCapExceeded(usize),
}

impl fmt::Display for NetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetViolation::NoSource => f.write_str("no source place"),
            NetViolation::MultipleSources(ps) => write!(f, "multiple sources: {}", ps.join(", ")),
            NetViolation::NoSink => f.write_str("no sink place"),
            NetViolation::MultipleSinks(ps) => write!(f, "multiple sinks: {}", ps.join(", ")),
            NetViolation::NotOnPath(n) => write!(f, "not on source-sink path: {n}"),
            NetViolation::InitialMarkingNotSource => f.write_str("initial marking is not exactly the source place"),
            NetViolation::FinalMarkingNotSink => f.write_str("final marking is not exactly the sink place"),
            NetViolation::FinalMarkingUnreachable(m) => {
                write!(f, "final marking unreachable from reachable marking {m}")
            }
            NetViolation::StateSpaceCapExceeded(cap) => {
                write!(f, "state space exceeds the cap of {cap} markings")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct WorkflowReport {
    pub violations: Vec<NetViolation>,
}

impl WorkflowReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for WorkflowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::running_example::net as running_example_net;

    fn m(net: &AcceptingPetriNet, names: &[&str]) -> Marking {
        net.marking_from_names(names).unwrap()
    }

    #[test]
    fn enabledness_on_running_example() {
        let net = running_example_net();
        let t = |n: &str| net.transition_by_name(n).unwrap();
        assert_eq!(net.enabled_transitions(&m(&net, &["p1"])), vec![t("t1")]);
        assert_eq!(net.enabled_transitions(&m(&net, &["p4", "p5"])), vec![t("t4")]);
        assert!(net.enabled_transitions(&Marking::new()).is_empty());
    }

    #[test]
    fn firing_on_running_example() {
        let net = running_example_net();
        let t = |n: &str| net.transition_by_name(n).unwrap();
        assert_eq!(net.fire(&m(&net, &["p1"]), t("t1")).unwrap(), m(&net, &["p2", "p3"]));
        assert_eq!(net.fire(&m(&net, &["p4", "p5"]), t("t4")).unwrap(), m(&net, &["p6"]));
        assert!(matches!(
            net.fire(&m(&net, &["p1"]), t("t4")),
            Err(Error::NotEnabled { .. })
        ));
    }

    #[test]
    fn running_example_has_twelve_reachable_markings() {
        let net = running_example_net();
        let reach = net.reachable_markings(DEFAULT_STATE_CAP).unwrap();
        let expected: BTreeSet<Marking> = [
            vec!["p1"],
            vec!["p2", "p3"],
            vec!["p2", "p5"],
            vec!["p4", "p3"],
            vec!["p4", "p5"],
            vec!["p6"],
            vec!["p7", "p8"],
            vec!["p9", "p8"],
            vec!["p7", "p10"],
            vec!["p9", "p10"],
            vec!["p11"],
            vec!["p12"],
        ]
        .iter()
        .map(|names| m(&net, names))
        .collect();
        assert_eq!(reach, expected);
        assert!(matches!(
            net.reachable_markings(3),
            Err(Error::StateSpaceCapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn single_place_net() {
        let mut b = NetBuilder::new();
        let p = b.add_place("p");
        b.initial_marking(Marking::singleton(p))
            .final_marking(Marking::singleton(p));
        let net = b.build().unwrap();
        assert_eq!(net.reachable_markings(10).unwrap().len(), 1);
        assert!(net.validate_workflow_net(10).is_valid());
    }

    #[test]
    fn running_example_is_a_valid_workflow_net() {
        let report = running_example_net().validate_workflow_net(DEFAULT_STATE_CAP);
        assert!(report.is_valid(), "{report}");
        assert_eq!(report.to_string(), "valid");
    }

    #[test]
    fn two_sinks_reported() {
        let mut b = NetBuilder::new();
        let i = b.add_place("i");
        let o1 = b.add_place("o1");
        let o2 = b.add_place("o2");
        let t = b.add_transition("t", Label::activity("a").unwrap());
        b.arc_in(i, t).arc_out(t, o1).arc_out(t, o2);
        b.initial_marking(Marking::singleton(i))
            .final_marking(Marking::singleton(o1));
        let report = b.build().unwrap().validate_workflow_net(100);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, NetViolation::MultipleSinks(_))));
        assert!(report.to_string().contains("multiple sinks"));
    }

    #[test]
    fn dead_transition_not_on_path() {
        // i -a-> o plus a transition d consuming from an island place x
        // feeding o: x is a second source, d is unreachable from i.
        let mut b = NetBuilder::new();
        let i = b.add_place("i");
        let o = b.add_place("o");
        let x = b.add_place("x");
        let a = b.add_transition("a", Label::activity("a").unwrap());
        let d = b.add_transition("d", Label::activity("d").unwrap());
        b.arc_in(i, a).arc_out(a, o).arc_in(x, d).arc_out(d, x);
        b.initial_marking(Marking::singleton(i))
            .final_marking(Marking::singleton(o));
        let report = b.build().unwrap().validate_workflow_net(100);
        assert!(report.violations.contains(&NetViolation::NotOnPath("d".to_string())));
    }

    #[test]
    fn unsound_net_detected() {
        // a forks into p and q, x and y each put a token on o: every run
        // ends in [o^2], so [o] is never reached.
        let mut b = NetBuilder::new();
        let i = b.add_place("i");
        let p = b.add_place("p");
        let q = b.add_place("q");
        let o = b.add_place("o");
        let a = b.add_transition("a", Label::activity("a").unwrap());
        let x = b.add_transition("x", Label::activity("x").unwrap());
        let y = b.add_transition("y", Label::activity("y").unwrap());
        b.arc_in(i, a).arc_out(a, p).arc_out(a, q);
        b.arc_in(p, x).arc_out(x, o);
        b.arc_in(q, y).arc_out(y, o);
        b.initial_marking(Marking::singleton(i))
            .final_marking(Marking::singleton(o));
        let report = b.build().unwrap().validate_workflow_net(100);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, NetViolation::FinalMarkingUnreachable(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut b = NetBuilder::new();
        b.add_place("p");
        b.add_place("p");
        assert!(b.build().is_err());
    }
}
