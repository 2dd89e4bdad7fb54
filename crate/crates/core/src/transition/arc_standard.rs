use super::{Configuration, GoldTree, Transition, TransitionKind, TransitionSystem};
use crate::error::{Error, Result};

/// Nivre's arc-standard system: arcs are built between the two topmost
/// stack nodes. Terminal when the input is empty and only node 0 remains.
#[derive(Clone, Copy, Debug, Default)]
pub struct ArcStandard;

const KINDS: [TransitionKind; 3] = [
    TransitionKind::Shift,
    TransitionKind::LeftArc,
    TransitionKind::RightArc,
];

impl TransitionSystem for ArcStandard {
    fn name(&self) -> &'static str {
        "arc-standard"
    }

    fn kinds(&self) -> &'static [TransitionKind] {
        &KINDS
    }

    fn handles_nonprojective(&self) -> bool {
        false
    }

    fn initial_for(&self, token_count: usize) -> Configuration {
        Configuration::start(token_count, vec![0])
    }

    fn precondition(
        &self,
        c: &Configuration,
        kind: TransitionKind,
    ) -> std::result::Result<(), String> {
        match kind {
            TransitionKind::Shift if c.buffer_front().is_none() => {
                Err("SHIFT precondition: buffer is empty".into())
            }
            TransitionKind::Shift => Ok(()),
            TransitionKind::LeftArc | TransitionKind::RightArc if c.stack().len() < 2 => {
                Err(format!("{} precondition: fewer than two stack nodes", kind))
            }
            TransitionKind::LeftArc if c.stack_nth(1) == Some(0) => {
                Err("LEFT-ARC precondition: second stack node is the root".into())
            }
            TransitionKind::LeftArc | TransitionKind::RightArc => Ok(()),
            other => Err(format!("{} is not an arc-standard transition", other)),
        }
    }

    fn perform(&self, c: &mut Configuration, kind: TransitionKind, label: &str) {
        match kind {
            TransitionKind::Shift => c.shift(),
            TransitionKind::LeftArc => {
                let top = c.stack_top().unwrap();
                let second = c.remove_second().unwrap();
                c.attach(top, label, second);
            }
            TransitionKind::RightArc => {
                let top = c.pop().unwrap();
                let second = c.stack_top().unwrap();
                c.attach(second, label, top);
            }
            _ => unreachable!("rejected by precondition"),
        }
    }

    fn next_gold(&self, c: &Configuration, gold: &GoldTree) -> Result<Transition> {
        if let (Some(top), Some(second)) = (c.stack_nth(0), c.stack_nth(1)) {
            if second != 0 && gold.has_arc(top, second) {
                return Ok(Transition::left_arc(gold.label(second)));
            }
            if gold.has_arc(second, top) && c.dependent_count(top) == gold.dependent_count(top) {
                return Ok(Transition::right_arc(gold.label(top)));
            }
        }
        if c.buffer_front().is_some() {
            Ok(Transition::shift())
        } else {
            Err(Error::Oracle(
                "arc-standard oracle has no move: gold tree is not reachable".into(),
            ))
        }
    }
}
