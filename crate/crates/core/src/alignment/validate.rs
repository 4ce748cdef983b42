use std::fmt;

use super::{Alignment, MoveType};
use crate::label::Label;
use crate::net::AcceptingPetriNet;
use crate::trace::Trace;

/// A broken alignment property. Violations are grouped by the three
/// conditions an alignment has to meet: the log side spells the trace (1),
/// the model side is a run between admissible markings (2), and every move
/// is well-formed (3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlignmentViolation {
    LogProjection { expected: String, found: String },
    NotFireable { index: usize, transition: String },
    EndMarkingMismatch,
    StartNotInitial,
    StartNotReachable,
    EndNotFinal,
    FinalUnreachableFromEnd,
    StateSpaceCapExceeded,
    SkipSkip { index: usize },
    LabelMismatch { index: usize },
    MoveTypeMismatch { index: usize },
    CostMismatch { stated: u32, actual: u32 },
}

impl AlignmentViolation {
    pub fn condition(&self) -> u8 {
        match self {
            AlignmentViolation::LogProjection { .. } => 1,
            AlignmentViolation::SkipSkip { .. }
            | AlignmentViolation::LabelMismatch { .. }
            | AlignmentViolation::MoveTypeMismatch { .. }
            | AlignmentViolation::CostMismatch { .. } => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for AlignmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}: ", self.condition())?;
        match self {
            AlignmentViolation::LogProjection { expected, found } => {
                write!(f, "log side is {found}, expected {expected}")
            }
            AlignmentViolation::NotFireable { index, transition } => {
                write!(f, "move {index}: transition {transition} not enabled")
            }
            AlignmentViolation::EndMarkingMismatch => f.write_str("model run does not end in the end marking"),
            AlignmentViolation::StartNotInitial => f.write_str("start marking is not the initial marking"),
            AlignmentViolation::StartNotReachable => f.write_str("start marking is not reachable"),
            AlignmentViolation::EndNotFinal => f.write_str("end marking is not the final marking"),
            AlignmentViolation::FinalUnreachableFromEnd => {
                f.write_str("final marking not reachable from the end marking")
            }
            AlignmentViolation::StateSpaceCapExceeded => f.write_str("state space cap exceeded while checking"),
            AlignmentViolation::SkipSkip { index } => write!(f, "move {index} skips on both sides"),
            AlignmentViolation::LabelMismatch { index } => {
                write!(f, "move {index}: synchronous move with different labels")
            }
            AlignmentViolation::MoveTypeMismatch { index } => {
                write!(f, "move {index}: move type does not fit its parts")
            }
            AlignmentViolation::CostMismatch { stated, actual } => {
                write!(f, "stated cost {stated}, moves cost {actual}")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<AlignmentViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&lines.join("\n"))
    }
}

/// Checks `alignment` against `model` and `trace` for its kind. Reachability
/// questions are answered by exploring at most `cap` markings.
pub fn validate_alignment(
    alignment: &Alignment,
    model: &AcceptingPetriNet,
    trace: &Trace,
    cap: usize,
) -> ValidationReport {
    let mut violations = Vec::new();
    let render = |labels: &[crate::label::ActivityLabel]| Trace::new(labels.to_vec(), trace.kind).to_string();
    let projection = alignment.log_projection();
    if projection != trace.activities {
        violations.push(AlignmentViolation::LogProjection {
            expected: render(&trace.activities),
            found: render(&projection),
        });
    }

    for (index, mv) in alignment.moves.iter().enumerate() {
        if let Some(step) = mv
            .model
            .as_ref()
            .filter(|s| s.transition.index() >= model.transition_count())
        {
            violations.push(AlignmentViolation::NotFireable {
                index,
                transition: step.name.clone(),
            });
            continue;
        }
        let model_label = mv.model.as_ref().map(|s| model.label(s.transition));
        let expected = match (&mv.log, model_label) {
            (None, None) => {
                violations.push(AlignmentViolation::SkipSkip { index });
                continue;
            }
            (Some(a), Some(label)) => {
                if label.as_activity() != Some(a) {
                    violations.push(AlignmentViolation::LabelMismatch { index });
                }
                MoveType::Synchronous
            }
            (Some(_), None) => MoveType::Log,
            (None, Some(Label::Tau)) => MoveType::InvisibleModel,
            (None, Some(_)) => MoveType::VisibleModel,
        };
        if mv.move_type != expected {
            violations.push(AlignmentViolation::MoveTypeMismatch { index });
        }
    }
    let actual: u32 = alignment.moves.iter().map(|m| m.cost()).sum();
    if actual != alignment.cost {
        violations.push(AlignmentViolation::CostMismatch {
            stated: alignment.cost,
            actual,
        });
    }

    let mut marking = alignment.start_marking.clone();
    let mut fireable = true;
    for (index, mv) in alignment.moves.iter().enumerate() {
        if let Some(step) = &mv.model {
            if step.transition.index() >= model.transition_count() || !model.is_enabled(&marking, step.transition) {
                violations.push(AlignmentViolation::NotFireable {
                    index,
                    transition: step.name.clone(),
                });
                fireable = false;
                break;
            }
            marking = model.fire(&marking, step.transition).expect("checked enabled");
        }
    }
    if fireable && marking != alignment.end_marking {
        violations.push(AlignmentViolation::EndMarkingMismatch);
    }

    let kind = alignment.kind;
    if kind.free_start() {
        match model.reachable_markings(cap) {
            Ok(reach) if !reach.contains(&alignment.start_marking) => {
                violations.push(AlignmentViolation::StartNotReachable)
            }
            Ok(_) => {}
            Err(_) => violations.push(AlignmentViolation::StateSpaceCapExceeded),
        }
    } else if &alignment.start_marking != model.initial_marking() {
        violations.push(AlignmentViolation::StartNotInitial);
    }
    if kind.anchored_end() {
        if &alignment.end_marking != model.final_marking() {
            violations.push(AlignmentViolation::EndNotFinal);
        }
    } else {
        match model.reachable_from(&alignment.end_marking, cap) {
            Ok(reach) if !reach.contains(model.final_marking()) => {
                violations.push(AlignmentViolation::FinalUnreachableFromEnd)
            }
            Ok(_) => {}
            Err(_) => violations.push(AlignmentViolation::StateSpaceCapExceeded),
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{align, AlignConfig, AlignmentKind, Model, Move};
    use crate::auxiliary::Method;
    use crate::net::DEFAULT_STATE_CAP;
    use crate::running_example;
    use crate::trace::TraceKind;

    fn aligned(text: &str, kind: AlignmentKind) -> (AcceptingPetriNet, Trace, Alignment) {
        let net = running_example::net();
        let trace = Trace::parse_inline(text, TraceKind::Infix).unwrap();
        let a = align(
            Model::Net(&net),
            &trace,
            kind,
            Method::Filtered,
            &AlignConfig::default(),
        )
        .unwrap();
        (net, trace, a)
    }

    #[test]
    fn produced_infix_is_valid() {
        let (net, trace, a) = aligned("d,g", AlignmentKind::Infix);
        let report = validate_alignment(&a, &net, &trace, DEFAULT_STATE_CAP);
        assert!(report.is_valid(), "{report}");
        assert_eq!(report.to_string(), "valid");
    }

    #[test]
    fn skip_skip_is_condition_three() {
        let (net, trace, mut a) = aligned("d,g", AlignmentKind::Infix);
        a.moves.insert(
            1,
            Move {
                log: None,
                model: None,
                move_type: MoveType::Log,
            },
        );
        let report = validate_alignment(&a, &net, &trace, DEFAULT_STATE_CAP);
        assert!(report.violations.contains(&AlignmentViolation::SkipSkip { index: 1 }));
        assert!(report.violations.iter().all(|v| v.condition() == 3), "{report}");
    }

    #[test]
    fn wrong_end_marking_is_condition_two() {
        let (net, trace, mut a) = aligned("d,g", AlignmentKind::Postfix);
        assert!(validate_alignment(&a, &net, &trace, DEFAULT_STATE_CAP).is_valid());
        a.end_marking = net.marking_from_names(&["p11"]).unwrap();
        let report = validate_alignment(&a, &net, &trace, DEFAULT_STATE_CAP);
        assert!(report.violations.contains(&AlignmentViolation::EndNotFinal));
        assert!(report.violations.iter().all(|v| v.condition() == 2));
    }

    #[test]
    fn wrong_log_side_is_condition_one() {
        let (net, _, a) = aligned("d,g", AlignmentKind::Infix);
        let other = Trace::parse_inline("d", TraceKind::Infix).unwrap();
        let report = validate_alignment(&a, &net, &other, DEFAULT_STATE_CAP);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].condition(), 1);
    }

    #[test]
    fn unreachable_start_detected() {
        let (net, trace, mut a) = aligned("", AlignmentKind::Infix);
        a.start_marking = net.marking_from_names(&["p1", "p12"]).unwrap();
        a.end_marking = a.start_marking.clone();
        let report = validate_alignment(&a, &net, &trace, DEFAULT_STATE_CAP);
        assert!(report.violations.contains(&AlignmentViolation::StartNotReachable));
    }
}
