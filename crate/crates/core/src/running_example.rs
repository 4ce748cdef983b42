//! The running example used throughout the test-suite: a sound workflow net
//! over activities `a`..`h` and the process tree describing the same
//! behaviour.
//!
//! Net structure (places `p1`..`p12`, transitions `t1`..`t10`):
//!
//! ```text
//! p1 -a(t1)-> p2,p3   p2 -b(t2)-> p4   p3 -c(t3)-> p5   p4,p5 -d(t4)-> p6
//! p6 -τ(t5)-> p7,p8   p7 -e(t6)-> p9   p8 -f(t7)-> p10  p6 -g(t8)-> p11
//! p9,p10 -τ(t9)-> p11 p11 -h(t10)-> p12
//! ```

use crate::label::Label;
use crate::net::{AcceptingPetriNet, Marking, NetBuilder};
use crate::tree::ProcessTree;

/// Textual form of the running-example process tree.
pub const TREE_TEXT: &str = "->(a, +(b, c), d, X(+(e, f), g), h)";

pub fn net() -> AcceptingPetriNet {
    let mut b = NetBuilder::new();
    let p: Vec<_> = (1..=12).map(|i| b.add_place(format!("p{i}"))).collect();
    let p = |i: usize| p[i - 1];
    let arcs: [(&str, &str, &[usize], &[usize]); 10] = [
        ("t1", "a", &[1], &[2, 3]),
        ("t2", "b", &[2], &[4]),
        ("t3", "c", &[3], &[5]),
        ("t4", "d", &[4, 5], &[6]),
        ("t5", "tau", &[6], &[7, 8]),
        ("t6", "e", &[7], &[9]),
        ("t7", "f", &[8], &[10]),
        ("t8", "g", &[6], &[11]),
        ("t9", "tau", &[9, 10], &[11]),
        ("t10", "h", &[11], &[12]),
    ];
    for (name, label, inputs, outputs) in arcs {
        let t = b.add_transition(name, Label::from_model_text(label).expect("static label"));
        for &i in inputs {
            b.arc_in(p(i), t);
        }
        for &o in outputs {
            b.arc_out(t, p(o));
        }
    }
    b.initial_marking(Marking::singleton(p(1)))
        .final_marking(Marking::singleton(p(12)));
    b.build().expect("running example net is well-formed")
}

pub fn tree() -> ProcessTree {
    TREE_TEXT.parse().expect("running example tree parses")
}
