//! Relevant markings and auxiliary nets.
//!
//! An infix or postfix may start in any reachable marking of the model. The
//! auxiliary net adds a fresh start place `p0'` and one silent *jump*
//! transition per candidate start marking, so that an ordinary alignment
//! search over it covers all candidates at once. The three methods differ
//! only in which markings they offer as candidates:
//!
//! * [`Method::Baseline`]: every reachable marking;
//! * [`Method::Filtered`]: reachable markings enabling a transition whose
//!   label occurs in the fragment, plus the final marking;
//! * [`Method::Advanced`]: markings derived from the process tree by walking
//!   up from every leaf whose label occurs in the fragment (see [`bumg`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::label::{ActivityLabel, Label};
use crate::multiset::marking_set_product;
use crate::net::{net_to_dot, AcceptingPetriNet, Marking, NetBuilder, PlaceId, TransitionId};
use crate::trace::Trace;
use crate::tree::{NodeId, NodeLabel, Operator, ProcessTree, TreeNetBinding};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Method {
    Baseline,
    Filtered,
    Advanced,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Baseline, Method::Filtered, Method::Advanced];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::Filtered => "filtered",
            Method::Advanced => "advanced",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Method::Baseline),
            "filtered" => Ok(Method::Filtered),
            "advanced" => Ok(Method::Advanced),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelevantMarkings {
    pub markings: BTreeSet<Marking>,
    pub method: Method,
}

impl RelevantMarkings {
    pub fn len(&self) -> usize {
        self.markings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markings.is_empty()
    }
}

pub fn baseline_markings(net: &AcceptingPetriNet, cap: usize) -> Result<RelevantMarkings> {
    Ok(RelevantMarkings {
        markings: net.reachable_markings(cap)?,
        method: Method::Baseline,
    })
}

pub fn filtered_markings(net: &AcceptingPetriNet, trace: &Trace, cap: usize) -> Result<RelevantMarkings> {
    let labels: BTreeSet<&ActivityLabel> = trace.activities.iter().collect();
    let mut markings: BTreeSet<Marking> = net
        .reachable_markings(cap)?
        .into_iter()
        .filter(|m| {
            net.enabled_transitions(m)
                .into_iter()
                .any(|t| net.label(t).as_activity().is_some_and(|a| labels.contains(a)))
        })
        .collect();
    markings.insert(net.final_marking().clone());
    Ok(RelevantMarkings {
        markings,
        method: Method::Filtered,
    })
}

pub fn advanced_markings(binding: &TreeNetBinding, trace: &Trace) -> RelevantMarkings {
    let labels: BTreeSet<ActivityLabel> = trace.activities.iter().cloned().collect();
    let tree = binding.tree();
    let mut markings = BTreeSet::new();
    for leaf in tree.leaves_labelled_in(&labels) {
        markings.extend(bumg(binding, leaf, None, BTreeSet::new(), &labels));
    }
    markings.insert(binding.net().final_marking().clone());
    RelevantMarkings {
        markings,
        method: Method::Advanced,
    }
}

/// Bottom-up marking generation. Starting at a leaf with the marking that
/// enables its transition, every parallel ancestor combines the current
/// markings with the [`tdmg`] markings of the siblings of the branch just
/// left.
pub fn bumg(
    binding: &TreeNetBinding,
    n: NodeId,
    prev: Option<NodeId>,
    markings: BTreeSet<Marking>,
    labels: &BTreeSet<ActivityLabel>,
) -> BTreeSet<Marking> {
    let tree = binding.tree();
    let mut markings = markings;
    match tree.label(n) {
        NodeLabel::Activity(_) | NodeLabel::Tau => {
            let t = binding.leaf_transition(n).expect("every leaf has a transition");
            markings = BTreeSet::from([binding.net().preset_marking(t)]);
        }
        NodeLabel::Operator(Operator::Parallel) => {
            let prev = prev.expect("parallel nodes are only reached from a child");
            for &sibling in tree.children(n).expect("node exists") {
                if sibling != prev {
                    markings = marking_set_product(&markings, &tdmg(binding, sibling, labels, true));
                }
            }
        }
        NodeLabel::Operator(_) => {}
    }
    match tree.parent(n).expect("node exists") {
        None => markings,
        Some(parent) => bumg(binding, parent, Some(n), markings, labels),
    }
}

/// Top-down marking generation for the subtree rooted at `n`: markings
/// enabling leaves labelled in `labels`, and with `add_final` also the
/// markings in which the subtree has completed.
pub fn tdmg(
    binding: &TreeNetBinding,
    n: NodeId,
    labels: &BTreeSet<ActivityLabel>,
    add_final: bool,
) -> BTreeSet<Marking> {
    let tree = binding.tree();
    let children = tree.children(n).expect("node exists");
    match tree.label(n) {
        NodeLabel::Activity(_) | NodeLabel::Tau => {
            let t = binding.leaf_transition(n).expect("every leaf has a transition");
            let mut markings = BTreeSet::new();
            if matches!(tree.label(n), NodeLabel::Activity(a) if labels.contains(a)) {
                markings.insert(binding.net().preset_marking(t));
            }
            if add_final {
                markings.insert(binding.net().postset_marking(t));
            }
            markings
        }
        NodeLabel::Operator(Operator::Sequence) => {
            let last = children.len() - 1;
            children
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| tdmg(binding, c, labels, add_final && i == last))
                .collect()
        }
        NodeLabel::Operator(Operator::Parallel) => children
            .iter()
            .map(|&c| tdmg(binding, c, labels, true))
            .reduce(|acc, m| marking_set_product(&acc, &m))
            .unwrap_or_default(),
        NodeLabel::Operator(Operator::Xor | Operator::Loop) => children
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| tdmg(binding, c, labels, add_final && i == 0))
            .collect(),
    }
}

/// The node whose subtree suffices for aligning `trace` as an infix: the
/// minimal enclosing subtree of the trace's labels, or the root when no leaf
/// carries one of them.
pub fn submodel_root(tree: &ProcessTree, trace: &Trace) -> NodeId {
    let labels: BTreeSet<ActivityLabel> = trace.activities.iter().cloned().collect();
    tree.minimal_enclosing_subtree(&labels).unwrap_or(tree.root())
}

pub fn restrict_to_submodel(tree: &ProcessTree, trace: &Trace) -> ProcessTree {
    tree.subtree(submodel_root(tree, trace))
        .expect("node comes from this tree")
}

/// A net extended with a start place and one silent jump per relevant marking.
#[derive(Clone, Debug)]
pub struct AuxiliaryNet {
    pub net: AcceptingPetriNet,
    /// The marking each jump transition produces.
    pub jump_transitions: BTreeMap<TransitionId, Marking>,
    pub start_place: PlaceId,
}

impl AuxiliaryNet {
    pub fn jump_marking(&self, t: TransitionId) -> Option<&Marking> {
        self.jump_transitions.get(&t)
    }
}

/// Places and transitions of `net` keep their ids in the auxiliary net, so
/// markings of either net can be used in the other unchanged.
pub fn build_auxiliary_net(net: &AcceptingPetriNet, relevant: &RelevantMarkings) -> Result<AuxiliaryNet> {
    if relevant.markings.is_empty() {
        return Err(Error::EmptyRelevantMarkings);
    }
    let mut b = NetBuilder::new();
    for p in net.places() {
        b.add_place(net.place_name(p));
    }
    for t in net.transition_ids() {
        let tr = net.transition(t);
        let id = b.add_transition(tr.name.clone(), tr.label.clone());
        for &p in &tr.preset {
            b.arc_in(p, id);
        }
        for &p in &tr.postset {
            b.arc_out(id, p);
        }
    }
    let mut start_name = "p0'".to_string();
    while net.place_by_name(&start_name).is_some() {
        start_name.push('\'');
    }
    let start_place = b.add_place(start_name);
    let mut jump_transitions = BTreeMap::new();
    for m in &relevant.markings {
        if m.max_count() > 1 {
            return Err(Error::UnsupportedMarking(net.display_marking(m)));
        }
        let t = b.add_transition(format!("jump::{}", net.display_marking(m)), Label::Tau);
        b.arc_in(start_place, t);
        for p in m.elements() {
            b.arc_out(t, *p);
        }
        jump_transitions.insert(t, m.clone());
    }
    b.initial_marking(Marking::singleton(start_place))
        .final_marking(net.final_marking().clone());
    Ok(AuxiliaryNet {
        net: b.build()?,
        jump_transitions,
        start_place,
    })
}

/// DOT rendering of an auxiliary net. With `kept`, jumps into kept markings
/// are drawn blue and all others red.
pub fn auxiliary_to_dot(aux: &AuxiliaryNet, kept: Option<&BTreeSet<Marking>>) -> String {
    net_to_dot(&aux.net, |t| {
        let m = aux.jump_transitions.get(&t)?;
        Some(match kept {
            Some(kept) if kept.contains(m) => "style=filled, fillcolor=blue, fontcolor=white".to_string(),
            Some(_) => "style=filled, fillcolor=red, fontcolor=white".to_string(),
            None => "style=filled, fillcolor=gray30, fontcolor=white".to_string(),
        })
    })
}
