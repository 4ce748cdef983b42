use std::time::Instant;

use super::{
    build_spn, build_trace_net, postprocess, search, Alignment, AlignmentKind, Goal, ModelStep, ZeroHeuristic,
};
use crate::auxiliary::{
    advanced_markings, baseline_markings, build_auxiliary_net, filtered_markings, submodel_root, Method,
};
use crate::error::{Error, Result};
use crate::net::{AcceptingPetriNet, DEFAULT_STATE_CAP};
use crate::trace::Trace;
use crate::tree::TreeNetBinding;

#[derive(Clone, Copy, Debug)]
pub enum Model<'a> {
    Net(&'a AcceptingPetriNet),
    Tree(&'a TreeNetBinding),
}

impl<'a> Model<'a> {
    pub fn net(&self) -> &'a AcceptingPetriNet {
        match self {
            Model::Net(net) => net,
            Model::Tree(binding) => binding.net(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlignConfig {
    /// Bound on reachable markings and on search states.
    pub state_cap: usize,
}

impl Default for AlignConfig {
    fn default() -> Self {
        AlignConfig {
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// Computes an optimal alignment of `trace` of the given kind.
///
/// Complete and prefix alignments search the plain product with the model and
/// ignore `method`. Infix and postfix alignments search over the auxiliary
/// net built from the markings `method` selects. For infixes with
/// [`Method::Advanced`] the tree is first cut down to the subtree enclosing
/// the trace's activities; the result is mapped back onto the full net.
pub fn align(
    model: Model<'_>,
    trace: &Trace,
    kind: AlignmentKind,
    method: Method,
    config: &AlignConfig,
) -> Result<Alignment> {
    let started = Instant::now();
    let trace_net = build_trace_net(trace);
    let cap = config.state_cap;
    let mut alignment = if !kind.free_start() {
        let net = model.net();
        let spn = build_spn(net, &trace_net);
        let goal = if kind == AlignmentKind::Complete {
            Goal::Final
        } else {
            Goal::TraceConsumed
        };
        let outcome = search(&spn, goal, &ZeroHeuristic, cap)?;
        postprocess(&outcome, &spn, net, None, trace, kind)?
    } else {
        let restricted = match (model, method) {
            (Model::Tree(binding), Method::Advanced) if kind == AlignmentKind::Infix => {
                let node = submodel_root(binding.tree(), trace);
                (node != binding.tree().root())
                    .then(|| binding.restrict(node).map(|sub| (sub, node)))
                    .transpose()?
            }
            (Model::Net(_), Method::Advanced) => return Err(Error::MethodRequiresTree),
            _ => None,
        };
        let marking_started = Instant::now();
        let work_net = restricted.as_ref().map_or(model.net(), |(sub, _)| sub.net());
        let relevant = match method {
            Method::Baseline => baseline_markings(work_net, cap)?,
            Method::Filtered => filtered_markings(work_net, trace, cap)?,
            Method::Advanced => match (&restricted, model) {
                (Some((sub, _)), _) => advanced_markings(sub, trace),
                (None, Model::Tree(binding)) => advanced_markings(binding, trace),
                (None, Model::Net(_)) => return Err(Error::MethodRequiresTree),
            },
        };
        let marking_ms = marking_started.elapsed().as_secs_f64() * 1000.0;
        let aux = build_auxiliary_net(work_net, &relevant)?;
        let spn = build_spn(&aux.net, &trace_net);
        let goal = if kind == AlignmentKind::Postfix {
            Goal::Final
        } else {
            Goal::TraceConsumed
        };
        let outcome = search(&spn, goal, &ZeroHeuristic, cap)?;
        let mut alignment = postprocess(&outcome, &spn, work_net, Some(&aux), trace, kind)?;
        if let (Some((sub, node)), Model::Tree(binding)) = (&restricted, model) {
            alignment = lift(alignment, binding, sub, *node)?;
        }
        alignment.stats.marking_ms = marking_ms;
        alignment.stats.relevant_markings = Some(relevant.len());
        alignment
    };
    alignment.stats.ms = started.elapsed().as_secs_f64() * 1000.0;
    Ok(alignment)
}

/// Maps an alignment over the restriction of `binding` to `node` onto the
/// full net, adding the tokens parallel branches outside the subtree hold.
fn lift(
    mut alignment: Alignment,
    binding: &TreeNetBinding,
    sub: &TreeNetBinding,
    node: crate::tree::NodeId,
) -> Result<Alignment> {
    let context = binding.context_marking(node);
    alignment.start_marking = binding.embed_marking(sub, &alignment.start_marking)?.union(&context);
    alignment.end_marking = binding.embed_marking(sub, &alignment.end_marking)?.union(&context);
    for mv in &mut alignment.moves {
        if let Some(step) = &mut mv.model {
            let t = binding.embed_transition(sub, step.transition)?;
            *step = ModelStep {
                transition: t,
                name: binding.net().transition(t).name.clone(),
                label: binding.net().label(t).clone(),
            };
        }
    }
    Ok(alignment)
}
