//! Block-structured process models (process trees).
//!
//! Nodes live in an arena in depth-first pre-order; [`NodeId`]s index that
//! arena and are only meaningful for the tree they came from. Every node also
//! carries a stable display name in the style `n0`, `n1.2`, `n3.1` (depth,
//! then 1-based position among all nodes of that depth, left to right). Names
//! survive [`ProcessTree::subtree`], so a subtree can be related back to the
//! tree it was cut from.

mod parse;
mod ptml;
pub mod random;
mod wfnet;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

pub use ptml::{load_ptml, parse_ptml};
pub use wfnet::{to_wfnet, Fragment, TreeNetBinding};

use crate::error::{Error, Result};
use crate::label::ActivityLabel;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Operator {
    Sequence,
    Xor,
    Parallel,
    Loop,
}

impl Operator {
    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Sequence => "->",
            Operator::Xor => "X",
            Operator::Parallel => "+",
            Operator::Loop => "*",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "->" => Some(Operator::Sequence),
            "X" => Some(Operator::Xor),
            "+" => Some(Operator::Parallel),
            "*" => Some(Operator::Loop),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NodeLabel {
    Operator(Operator),
    Activity(ActivityLabel),
    Tau,
}

#[derive(Clone, Debug)]
struct Node {
    name: String,
    label: NodeLabel,
    children: Vec<NodeId>,
    parent: Option<NodeId>,
}

/// Nested description of a tree, used while building arenas.
#[derive(Clone, Debug)]
pub(crate) enum Shape {
    Leaf(NodeLabel),
    Op(Operator, Vec<Shape>),
}

#[derive(Clone, Debug)]
pub struct ProcessTree {
    nodes: Vec<Node>,
}

impl ProcessTree {
    pub fn activity(label: ActivityLabel) -> Self {
        Self::from_shape(Shape::Leaf(NodeLabel::Activity(label))).expect("leaf is valid")
    }

    pub fn tau() -> Self {
        Self::from_shape(Shape::Leaf(NodeLabel::Tau)).expect("leaf is valid")
    }

    /// Combines `children` under a new operator root. Node names are
    /// recomputed for the combined tree.
    pub fn operator(op: Operator, children: Vec<ProcessTree>) -> Result<Self> {
        let shapes = children.iter().map(|c| c.shape(c.root())).collect();
        Self::from_shape(Shape::Op(op, shapes))
    }

    pub(crate) fn from_shape(shape: Shape) -> Result<Self> {
        check_arity(&shape, 0)?;
        let mut nodes = Vec::new();
        push_shape(&mut nodes, shape, None);
        let mut tree = ProcessTree { nodes };
        tree.assign_level_names();
        Ok(tree)
    }

    fn shape(&self, n: NodeId) -> Shape {
        let node = &self.nodes[n.index()];
        match &node.label {
            NodeLabel::Operator(op) => Shape::Op(*op, node.children.iter().map(|c| self.shape(*c)).collect()),
            leaf => Shape::Leaf(leaf.clone()),
        }
    }

    fn assign_level_names(&mut self) {
        let mut queue = VecDeque::from([(NodeId(0), 0usize)]);
        let mut per_depth: Vec<usize> = Vec::new();
        while let Some((n, depth)) = queue.pop_front() {
            if per_depth.len() <= depth {
                per_depth.push(0);
            }
            per_depth[depth] += 1;
            self.nodes[n.index()].name = if depth == 0 {
                "n0".to_string()
            } else {
                format!("n{}.{}", depth, per_depth[depth])
            };
            for &c in &self.nodes[n.index()].children {
                queue.push_back((c, depth + 1));
            }
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All node ids in pre-order (the tree's total order on nodes).
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    fn node(&self, n: NodeId) -> Result<&Node> {
        self.nodes
            .get(n.index())
            .ok_or_else(|| Error::UnknownNode(format!("{n:?}")))
    }

    pub fn label(&self, n: NodeId) -> &NodeLabel {
        &self.nodes[n.index()].label
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.nodes[n.index()].name
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.node_ids().find(|n| self.name(*n) == name)
    }

    pub fn is_leaf(&self, n: NodeId) -> bool {
        self.nodes[n.index()].children.is_empty()
    }

    pub fn children(&self, n: NodeId) -> Result<&[NodeId]> {
        Ok(&self.node(n)?.children)
    }

    pub fn parent(&self, n: NodeId) -> Result<Option<NodeId>> {
        Ok(self.node(n)?.parent)
    }

    /// `n` followed by its ancestors up to the root.
    pub fn path_to_root(&self, n: NodeId) -> Vec<NodeId> {
        let mut path = vec![n];
        let mut current = n;
        while let Some(p) = self.nodes[current.index()].parent {
            path.push(p);
            current = p;
        }
        path
    }

    pub fn is_ancestor_or_self(&self, ancestor: NodeId, n: NodeId) -> bool {
        self.path_to_root(n).contains(&ancestor)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|n| self.is_leaf(*n))
    }

    /// Leaves carrying an activity from `labels`.
    pub fn leaves_labelled_in<'a>(&'a self, labels: &'a BTreeSet<ActivityLabel>) -> impl Iterator<Item = NodeId> + 'a {
        self.leaves().filter(move |n| match self.label(*n) {
            NodeLabel::Activity(a) => labels.contains(a),
            _ => false,
        })
    }

    /// The subtree rooted at `n`; node names are preserved.
    pub fn subtree(&self, n: NodeId) -> Result<ProcessTree> {
        Ok(self.subtree_with_origin(n)?.0)
    }

    /// Like [`subtree`](Self::subtree), also returning for every node of the
    /// new tree its id in `self`.
    pub(crate) fn subtree_with_origin(&self, n: NodeId) -> Result<(ProcessTree, Vec<NodeId>)> {
        self.node(n)?;
        let mut nodes = Vec::new();
        let mut origin = Vec::new();
        self.copy_into(n, None, &mut nodes, &mut origin);
        Ok((ProcessTree { nodes }, origin))
    }

    fn copy_into(&self, n: NodeId, parent: Option<NodeId>, nodes: &mut Vec<Node>, origin: &mut Vec<NodeId>) {
        let id = NodeId(nodes.len() as u32);
        let src = &self.nodes[n.index()];
        nodes.push(Node {
            name: src.name.clone(),
            label: src.label.clone(),
            children: Vec::new(),
            parent,
        });
        origin.push(n);
        for &c in &src.children {
            let child_id = NodeId(nodes.len() as u32);
            nodes[id.index()].children.push(child_id);
            self.copy_into(c, Some(id), nodes, origin);
        }
    }

    /// Lowest common ancestor of all leaves labelled with one of `labels`,
    /// lifted to the highest loop among its proper ancestors if there is one.
    pub fn minimal_enclosing_subtree(&self, labels: &BTreeSet<ActivityLabel>) -> Result<NodeId> {
        let matching: Vec<NodeId> = self.leaves_labelled_in(labels).collect();
        let first = *matching.first().ok_or(Error::NoMatchingLeaf)?;
        // root-first path of the first leaf, shortened to the common prefix
        let mut common: Vec<NodeId> = self.path_to_root(first).into_iter().rev().collect();
        for &leaf in &matching[1..] {
            let path: Vec<NodeId> = self.path_to_root(leaf).into_iter().rev().collect();
            let shared = common.iter().zip(&path).take_while(|(a, b)| a == b).count();
            common.truncate(shared);
        }
        let lca = *common.last().expect("root is shared by every path");
        let highest_loop = common[..common.len() - 1]
            .iter()
            .find(|n| matches!(self.label(**n), NodeLabel::Operator(Operator::Loop)));
        Ok(highest_loop.copied().unwrap_or(lca))
    }

    /// Activities of all non-silent leaves.
    pub fn alphabet(&self) -> BTreeSet<ActivityLabel> {
        self.leaves()
            .filter_map(|n| match self.label(n) {
                NodeLabel::Activity(a) => Some(a.clone()),
                _ => None,
            })
            .collect()
    }

    fn write_node(&self, n: NodeId, out: &mut String) {
        let node = &self.nodes[n.index()];
        match &node.label {
            NodeLabel::Tau => out.push_str("tau"),
            NodeLabel::Activity(a) => out.push_str(&parse::quote_label(a.as_str())),
            NodeLabel::Operator(op) => {
                out.push_str(op.symbol());
                out.push('(');
                for (i, c) in node.children.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write_node(*c, out);
                }
                out.push(')');
            }
        }
    }
}

fn check_arity(shape: &Shape, position: usize) -> Result<()> {
    if let Shape::Op(op, children) = shape {
        if *op == Operator::Loop && children.len() != 2 {
            return Err(Error::Arity {
                position,
                message: format!("loop needs exactly 2 children, got {}", children.len()),
            });
        }
        if children.len() < 2 {
            return Err(Error::Arity {
                position,
                message: format!("operator `{}` needs at least 2 children", op.symbol()),
            });
        }
        for c in children {
            check_arity(c, position)?;
        }
    }
    Ok(())
}

fn push_shape(nodes: &mut Vec<Node>, shape: Shape, parent: Option<NodeId>) -> NodeId {
    let id = NodeId(nodes.len() as u32);
    let (label, children) = match shape {
        Shape::Leaf(label) => (label, Vec::new()),
        Shape::Op(op, children) => (NodeLabel::Operator(op), children),
    };
    nodes.push(Node {
        name: String::new(),
        label,
        children: Vec::new(),
        parent,
    });
    for c in children {
        let child = push_shape(nodes, c, Some(id));
        nodes[id.index()].children.push(child);
    }
    id
}

impl fmt::Display for ProcessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_node(self.root(), &mut out);
        f.write_str(&out)
    }
}

impl std::str::FromStr for ProcessTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_tree_text(s)
    }
}

pub fn parse_tree_text(text: &str) -> Result<ProcessTree> {
    parse::parse_tree_text(text)
}
