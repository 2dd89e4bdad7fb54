use super::{Configuration, GoldTree, Transition, TransitionKind, TransitionSystem};
use crate::error::{Error, Result};

/// Covington's non-projective list-based system.
///
/// The stack holds the left context still to be compared with the buffer
/// front `j`; its top `i` is the current candidate. NO-ARC and the arc moves
/// park `i` in the configuration's auxiliary list, and SHIFT restores the
/// parked nodes before pushing `j`. Node 0 starts on the stack so root arcs
/// are built like any other.
#[derive(Clone, Copy, Debug, Default)]
pub struct Covington;

const KINDS: [TransitionKind; 4] = [
    TransitionKind::Shift,
    TransitionKind::NoArc,
    TransitionKind::LeftArc,
    TransitionKind::RightArc,
];

impl TransitionSystem for Covington {
    fn name(&self) -> &'static str {
        "covington-nonprojective"
    }

    fn kinds(&self) -> &'static [TransitionKind] {
        &KINDS
    }

    fn handles_nonprojective(&self) -> bool {
        true
    }

    fn initial_for(&self, token_count: usize) -> Configuration {
        Configuration::start(token_count, vec![0])
    }

    fn precondition(
        &self,
        c: &Configuration,
        kind: TransitionKind,
    ) -> std::result::Result<(), String> {
        let j = c
            .buffer_front()
            .ok_or_else(|| format!("{} precondition: buffer is empty", kind))?;
        if kind == TransitionKind::Shift {
            return Ok(());
        }
        let i = c
            .stack_top()
            .ok_or_else(|| format!("{} precondition: no left candidate", kind))?;
        match kind {
            TransitionKind::NoArc => Ok(()),
            TransitionKind::LeftArc if i == 0 => {
                Err("LEFT-ARC precondition: candidate is the root".into())
            }
            TransitionKind::LeftArc if c.has_head(i) => {
                Err("LEFT-ARC precondition: candidate already has a head".into())
            }
            TransitionKind::LeftArc if c.dominates(i, j) => {
                Err("LEFT-ARC precondition: arc would close a cycle".into())
            }
            TransitionKind::RightArc if c.has_head(j) => {
                Err("RIGHT-ARC precondition: buffer front already has a head".into())
            }
            TransitionKind::RightArc if c.dominates(j, i) => {
                Err("RIGHT-ARC precondition: arc would close a cycle".into())
            }
            TransitionKind::LeftArc | TransitionKind::RightArc => Ok(()),
            other => Err(format!("{} is not a Covington transition", other)),
        }
    }

    fn perform(&self, c: &mut Configuration, kind: TransitionKind, label: &str) {
        let j = c.buffer_front().unwrap();
        match kind {
            TransitionKind::Shift => {
                c.unpark_all();
                c.push_stack(j);
                c.advance_buffer();
            }
            TransitionKind::NoArc | TransitionKind::LeftArc | TransitionKind::RightArc => {
                let i = c.pop().unwrap();
                match kind {
                    TransitionKind::LeftArc => c.attach(j, label, i),
                    TransitionKind::RightArc => c.attach(i, label, j),
                    _ => {}
                }
                c.park(i);
            }
            TransitionKind::Reduce => unreachable!("rejected by precondition"),
        }
    }

    fn next_gold(&self, c: &Configuration, gold: &GoldTree) -> Result<Transition> {
        let j = c.buffer_front().ok_or_else(|| {
            Error::Oracle("Covington oracle called on a terminal configuration".into())
        })?;
        let i = match c.stack_top() {
            Some(i) => i,
            None => return Ok(Transition::shift()),
        };
        if gold.has_arc(j, i) {
            return Ok(Transition::left_arc(gold.label(i)));
        }
        if gold.has_arc(i, j) {
            return Ok(Transition::right_arc(gold.label(j)));
        }
        let stack = c.stack();
        let pending = stack[..stack.len() - 1]
            .iter()
            .any(|&k| gold.has_arc(k, j) || gold.has_arc(j, k));
        if pending {
            Ok(Transition::no_arc())
        } else {
            Ok(Transition::shift())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::tests::tree;
    use crate::transition::{derive_sequence, replay, GoldTree};

    #[test]
    fn shift_restores_parked_nodes_in_order() {
        let mut c = Covington.initial_for(3);
        for t in [
            Transition::shift(),
            Transition::shift(),
            Transition::no_arc(),
            Transition::no_arc(),
            Transition::no_arc(),
        ] {
            Covington.apply_mut(&mut c, &t).unwrap();
        }
        assert_eq!(c.stack(), &[] as &[usize]);
        assert_eq!(c.aux(), &[2, 1, 0][..]);
        Covington
            .apply_mut(&mut c, &Transition::no_arc())
            .unwrap_err();
        Covington.apply_mut(&mut c, &Transition::shift()).unwrap();
        assert_eq!(c.stack(), &[0, 1, 2, 3]);
        assert!(c.aux().is_empty());
        assert!(Covington.is_terminal(&c));
    }

    #[test]
    fn cycles_are_illegal() {
        let mut c = Covington.initial_for(3);
        for t in [
            Transition::shift(),
            Transition::right_arc("a"),
            Transition::shift(),
            Transition::right_arc("b"),
        ] {
            Covington.apply_mut(&mut c, &t).unwrap();
        }
        // 1 -> 2 -> 3; candidate pair is (1, 3).
        assert_eq!(c.stack_top(), Some(1));
        assert_eq!(c.buffer_front(), Some(3));
        assert_eq!(
            Covington.legal(&c),
            vec![TransitionKind::Shift, TransitionKind::NoArc]
        );
        let err = Covington.apply(&c, &Transition::left_arc("x")).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{}", err);
    }

    #[test]
    fn non_projective_tree_is_reproduced() {
        let gold = tree(&[0, 3, 1, 2], &["Root", "Nmod", "Dobj", "P"]);
        let seq = derive_sequence(&gold, &Covington).unwrap();
        let c = replay(4, &seq, &Covington).unwrap();
        assert_eq!(c.arcs(), GoldTree::from_sentence(&gold).unwrap().arcs());
    }
}
