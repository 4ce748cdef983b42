use crate::label::Label;
use crate::net::{AcceptingPetriNet, Marking, NetBuilder};
use crate::trace::Trace;

/// The linear net `q0 -σ(1)-> q1 -σ(2)-> ... q|σ|`.
pub fn build_trace_net(trace: &Trace) -> AcceptingPetriNet {
    let mut b = NetBuilder::new();
    let places: Vec<_> = (0..=trace.len()).map(|i| b.add_place(format!("q{i}"))).collect();
    for (i, a) in trace.activities.iter().enumerate() {
        let t = b.add_transition(format!("e{}", i + 1), Label::Activity(a.clone()));
        b.arc_in(places[i], t).arc_out(t, places[i + 1]);
    }
    b.initial_marking(Marking::singleton(places[0]))
        .final_marking(Marking::singleton(places[trace.len()]));
    b.build().expect("trace net names are unique")
}
