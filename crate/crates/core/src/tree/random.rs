//! Random process trees for testing and benchmarking.

use rand::Rng;

use super::{NodeLabel, Operator, ProcessTree, Shape};
use crate::label::ActivityLabel;

#[derive(Clone, Debug)]
pub struct RandomTreeConfig {
    /// Upper bound on the number of nodes.
    pub max_nodes: usize,
    pub tau_probability: f64,
    /// Probability that a visible leaf reuses an existing label.
    pub duplicate_probability: f64,
    pub loop_weight: u32,
}

impl Default for RandomTreeConfig {
    fn default() -> Self {
        RandomTreeConfig {
            max_nodes: 15,
            tau_probability: 0.08,
            duplicate_probability: 0.08,
            loop_weight: 1,
        }
    }
}

pub fn random_tree<R: Rng>(rng: &mut R, config: &RandomTreeConfig) -> ProcessTree {
    let budget = rng.gen_range(3.min(config.max_nodes).max(1)..=config.max_nodes.max(1));
    let mut labels = Vec::new();
    let shape = shape(rng, config, budget, &mut labels);
    ProcessTree::from_shape(shape).expect("generator respects arities")
}

fn shape<R: Rng>(rng: &mut R, config: &RandomTreeConfig, budget: usize, labels: &mut Vec<ActivityLabel>) -> Shape {
    if budget < 3 {
        return leaf(rng, config, labels);
    }
    let weights = [3u32, 2, 2, config.loop_weight];
    let total: u32 = weights.iter().sum();
    let mut pick = rng.gen_range(0..total);
    let mut op = Operator::Sequence;
    for (w, candidate) in weights
        .iter()
        .zip([Operator::Sequence, Operator::Xor, Operator::Parallel, Operator::Loop])
    {
        if pick < *w {
            op = candidate;
            break;
        }
        pick -= w;
    }
    let remaining = budget - 1;
    let arity = if op == Operator::Loop {
        2
    } else {
        rng.gen_range(2..=remaining.min(4))
    };
    // every child gets at least one node, the rest is spread at random
    let mut sizes = vec![1usize; arity];
    for _ in 0..rng.gen_range(0..=remaining - arity) {
        let k = rng.gen_range(0..arity);
        sizes[k] += 1;
    }
    let children = sizes.into_iter().map(|s| shape(rng, config, s, labels)).collect();
    Shape::Op(op, children)
}

fn leaf<R: Rng>(rng: &mut R, config: &RandomTreeConfig, labels: &mut Vec<ActivityLabel>) -> Shape {
    if rng.gen_bool(config.tau_probability) {
        return Shape::Leaf(NodeLabel::Tau);
    }
    if !labels.is_empty() && rng.gen_bool(config.duplicate_probability) {
        let k = rng.gen_range(0..labels.len());
        return Shape::Leaf(NodeLabel::Activity(labels[k].clone()));
    }
    let label = ActivityLabel::new(&fresh_name(labels.len())).expect("generated names are valid");
    labels.push(label.clone());
    Shape::Leaf(NodeLabel::Activity(label))
}

/// `a`, `b`, ..., `z`, `a1`, `b1`, ...
fn fresh_name(k: usize) -> String {
    let letter = (b'a' + (k % 26) as u8) as char;
    match k / 26 {
        0 => letter.to_string(),
        round => format!("{letter}{round}"),
    }
}
