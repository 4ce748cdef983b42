//! Translation of process trees into sound workflow nets.
//!
//! Rules, per node with entry place `src` and exit place `snk`:
//!
//! * leaf: one transition `src -> snk` (silent for τ leaves);
//! * `->`: children chained, child k's exit place is child k+1's entry place;
//! * `X`: all children share `src` and `snk`;
//! * `+`: silent split `src -> {child entries}`, silent join `{child exits} -> snk`;
//! * `*(body, redo)`: silent enter `src -> body entry`; the body's exit place
//!   is the decision place; silent redo `decision -> redo entry`; silent back
//!   `redo exit -> body entry`; silent exit `decision -> snk`.
//!
//! Every node's places and transitions are recorded as a [`Fragment`], which is
//! itself the translation of the subtree rooted there.

use std::collections::BTreeMap;

use super::{NodeId, NodeLabel, Operator, ProcessTree};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::net::{AcceptingPetriNet, Marking, NetBuilder, PlaceId, TransitionId};

/// Places and transitions contributed by one subtree.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub source: PlaceId,
    pub sink: PlaceId,
    pub places: Vec<PlaceId>,
    pub transitions: Vec<TransitionId>,
}

/// A process tree together with its workflow net and the leaf ↔ transition
/// correspondence.
#[derive(Clone, Debug)]
pub struct TreeNetBinding {
    tree: ProcessTree,
    net: AcceptingPetriNet,
    leaf_to_transition: BTreeMap<NodeId, TransitionId>,
    transition_to_leaf: BTreeMap<TransitionId, NodeId>,
    fragments: Vec<Fragment>,
}

pub fn to_wfnet(tree: &ProcessTree) -> TreeNetBinding {
    let mut tr = Translator {
        tree,
        builder: NetBuilder::new(),
        leaf_to_transition: BTreeMap::new(),
        fragments: vec![None; tree.len()],
    };
    let (source, sink) = tr.translate(tree.root(), None, None);
    tr.builder
        .initial_marking(Marking::singleton(source))
        .final_marking(Marking::singleton(sink));
    let net = tr.builder.build().expect("generated names are unique");
    let transition_to_leaf = tr.leaf_to_transition.iter().map(|(n, t)| (*t, *n)).collect();
    TreeNetBinding {
        tree: tree.clone(),
        net,
        leaf_to_transition: tr.leaf_to_transition,
        transition_to_leaf,
        fragments: tr
            .fragments
            .into_iter()
            .map(|f| f.expect("every node translated"))
            .collect(),
    }
}

struct Translator<'a> {
    tree: &'a ProcessTree,
    builder: NetBuilder,
    leaf_to_transition: BTreeMap<NodeId, TransitionId>,
    fragments: Vec<Option<Fragment>>,
}

impl Translator<'_> {
    fn place(&mut self, given: Option<PlaceId>) -> PlaceId {
        given.unwrap_or_else(|| {
            let k = self.builder.place_count() + 1;
            self.builder.add_place(format!("p{k}"))
        })
    }

    fn silent(&mut self, n: NodeId, role: &str, from: &[PlaceId], to: &[PlaceId]) -> TransitionId {
        let name = format!("{}:{role}", self.tree.name(n));
        let t = self.builder.add_transition(name, Label::Tau);
        for &p in from {
            self.builder.arc_in(p, t);
        }
        for &p in to {
            self.builder.arc_out(t, p);
        }
        t
    }

    fn translate(&mut self, n: NodeId, src: Option<PlaceId>, snk: Option<PlaceId>) -> (PlaceId, PlaceId) {
        let children = self.tree.children(n).expect("node exists").to_vec();
        let mut places = Vec::new();
        let mut transitions = Vec::new();
        let (source, sink) = match self.tree.label(n).clone() {
            leaf @ (NodeLabel::Activity(_) | NodeLabel::Tau) => {
                let source = self.place(src);
                let sink = self.place(snk);
                let label = match leaf {
                    NodeLabel::Activity(a) => Label::Activity(a),
                    _ => Label::Tau,
                };
                let t = self.builder.add_transition(self.tree.name(n).to_string(), label);
                self.builder.arc_in(source, t).arc_out(t, sink);
                self.leaf_to_transition.insert(n, t);
                transitions.push(t);
                (source, sink)
            }
            NodeLabel::Operator(Operator::Sequence) => {
                let last = children.len() - 1;
                let mut entry = src;
                let mut first_source = None;
                for (k, &c) in children.iter().enumerate() {
                    let exit = if k == last { snk } else { None };
                    let (s, e) = self.translate(c, entry, exit);
                    first_source.get_or_insert(s);
                    entry = Some(e);
                }
                (
                    first_source.expect("operator has children"),
                    entry.expect("operator has children"),
                )
            }
            NodeLabel::Operator(Operator::Xor) => {
                let source = self.place(src);
                let sink = self.place(snk);
                for &c in &children {
                    self.translate(c, Some(source), Some(sink));
                }
                (source, sink)
            }
            NodeLabel::Operator(Operator::Parallel) => {
                let source = self.place(src);
                let mut entries = Vec::new();
                let mut exits = Vec::new();
                for &c in &children {
                    let (s, e) = self.translate(c, None, None);
                    entries.push(s);
                    exits.push(e);
                }
                let sink = self.place(snk);
                transitions.push(self.silent(n, "split", &[source], &entries));
                transitions.push(self.silent(n, "join", &exits, &[sink]));
                (source, sink)
            }
            NodeLabel::Operator(Operator::Loop) => {
                let source = self.place(src);
                let body_entry = self.place(None);
                let (_, decision) = self.translate(children[0], Some(body_entry), None);
                let (redo_entry, redo_exit) = self.translate(children[1], None, None);
                let sink = self.place(snk);
                transitions.push(self.silent(n, "enter", &[source], &[body_entry]));
                transitions.push(self.silent(n, "redo", &[decision], &[redo_entry]));
                transitions.push(self.silent(n, "back", &[redo_exit], &[body_entry]));
                transitions.push(self.silent(n, "exit", &[decision], &[sink]));
                places.push(body_entry);
                (source, sink)
            }
        };
        places.push(source);
        places.push(sink);
        for &c in &children {
            let f = self.fragments[c.index()].as_ref().expect("child translated first");
            places.extend_from_slice(&f.places);
            transitions.extend_from_slice(&f.transitions);
        }
        places.sort();
        places.dedup();
        transitions.sort();
        self.fragments[n.index()] = Some(Fragment {
            source,
            sink,
            places,
            transitions,
        });
        (source, sink)
    }
}

impl TreeNetBinding {
    pub fn tree(&self) -> &ProcessTree {
        &self.tree
    }

    pub fn net(&self) -> &AcceptingPetriNet {
        &self.net
    }

    /// The transition representing leaf `n` (silent for τ leaves).
    pub fn leaf_transition(&self, n: NodeId) -> Option<TransitionId> {
        self.leaf_to_transition.get(&n).copied()
    }

    /// The leaf represented by `t`; `None` for operator plumbing.
    pub fn leaf_of(&self, t: TransitionId) -> Option<NodeId> {
        self.transition_to_leaf.get(&t).copied()
    }

    pub fn leaf_to_transition(&self) -> &BTreeMap<NodeId, TransitionId> {
        &self.leaf_to_transition
    }

    pub fn fragment(&self, n: NodeId) -> &Fragment {
        &self.fragments[n.index()]
    }

    /// The binding of the subtree rooted at `n`: the fragment's places and
    /// transitions under their original names, entry place as initial and
    /// exit place as final marking.
    pub fn restrict(&self, n: NodeId) -> Result<TreeNetBinding> {
        let (tree, origin) = self.tree.subtree_with_origin(n)?;
        let fragment = self.fragment(n);
        let mut builder = NetBuilder::new();
        let mut place_map = BTreeMap::new();
        for &p in &fragment.places {
            place_map.insert(p, builder.add_place(self.net.place_name(p)));
        }
        let mut transition_map = BTreeMap::new();
        for &t in &fragment.transitions {
            let tr = self.net.transition(t);
            let new_t = builder.add_transition(tr.name.clone(), tr.label.clone());
            for p in &tr.preset {
                builder.arc_in(place_map[p], new_t);
            }
            for p in &tr.postset {
                builder.arc_out(new_t, place_map[p]);
            }
            transition_map.insert(t, new_t);
        }
        builder
            .initial_marking(Marking::singleton(place_map[&fragment.source]))
            .final_marking(Marking::singleton(place_map[&fragment.sink]));
        let net = builder.build()?;
        let mut leaf_to_transition = BTreeMap::new();
        let mut fragments = Vec::with_capacity(origin.len());
        for (new_idx, old) in origin.iter().enumerate() {
            let new_n = NodeId(new_idx as u32);
            if let Some(t) = self.leaf_to_transition.get(old) {
                leaf_to_transition.insert(new_n, transition_map[t]);
            }
            let f = self.fragment(*old);
            let mut places: Vec<PlaceId> = f.places.iter().map(|p| place_map[p]).collect();
            places.sort();
            let mut transitions: Vec<TransitionId> = f.transitions.iter().map(|t| transition_map[t]).collect();
            transitions.sort();
            fragments.push(Fragment {
                source: place_map[&f.source],
                sink: place_map[&f.sink],
                places,
                transitions,
            });
        }
        let transition_to_leaf = leaf_to_transition.iter().map(|(n, t)| (*t, *n)).collect();
        Ok(TreeNetBinding {
            tree,
            net,
            leaf_to_transition,
            transition_to_leaf,
            fragments,
        })
    }

    /// Tokens the rest of the model holds while only the subtree at `n` is
    /// active: for every parallel ancestor, the entry places of the branches
    /// not leading to `n`. Loops above `n` are not considered.
    pub fn context_marking(&self, n: NodeId) -> Marking {
        let mut context = Marking::new();
        let path = self.tree.path_to_root(n);
        for pair in path.windows(2) {
            let (child, parent) = (pair[0], pair[1]);
            if matches!(self.tree.label(parent), NodeLabel::Operator(Operator::Parallel)) {
                for &sibling in self.tree.children(parent).expect("node exists") {
                    if sibling != child {
                        context.insert(self.fragment(sibling).source);
                    }
                }
            }
        }
        context
    }

    /// Maps a marking of `sub` (a restriction of this binding) to this net.
    pub fn embed_marking(&self, sub: &TreeNetBinding, marking: &Marking) -> Result<Marking> {
        marking
            .iter()
            .map(|(p, count)| {
                let name = sub.net.place_name(*p);
                self.net
                    .place_by_name(name)
                    .map(|q| (q, count))
                    .ok_or_else(|| Error::InvalidNet(format!("place `{name}` not in model")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Marking::from_counts)
    }

    /// Maps a transition of `sub` (a restriction of this binding) to this net.
    pub fn embed_transition(&self, sub: &TreeNetBinding, t: TransitionId) -> Result<TransitionId> {
        let name = &sub.net.transition(t).name;
        self.net
            .transition_by_name(name)
            .ok_or_else(|| Error::InvalidNet(format!("transition `{name}` not in model")))
    }
}
