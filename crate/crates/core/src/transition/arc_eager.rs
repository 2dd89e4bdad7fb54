use super::{Configuration, GoldTree, Transition, TransitionKind, TransitionSystem};
use crate::error::{Error, Result};

/// Nivre's arc-eager system. Terminal once the input is exhausted; nodes
/// still on the stack without a head are left for tree extraction.
#[derive(Clone, Copy, Debug, Default)]
pub struct ArcEager;

const KINDS: [TransitionKind; 4] = [
    TransitionKind::Shift,
    TransitionKind::Reduce,
    TransitionKind::LeftArc,
    TransitionKind::RightArc,
];

impl TransitionSystem for ArcEager {
    fn name(&self) -> &'static str {
        "arc-eager"
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
        let front = c.buffer_front();
        let top = c.stack_top();
        match kind {
            TransitionKind::Shift | TransitionKind::RightArc => {
                if front.is_none() {
                    return Err(format!("{} precondition: buffer is empty", kind));
                }
                if top.is_none() && kind == TransitionKind::RightArc {
                    return Err("RIGHT-ARC precondition: stack is empty".into());
                }
                Ok(())
            }
            TransitionKind::LeftArc => match (top, front) {
                (_, None) => Err("LEFT-ARC precondition: buffer is empty".into()),
                (None, _) | (Some(0), _) => {
                    Err("LEFT-ARC precondition: stack top is the root".into())
                }
                (Some(t), _) if c.has_head(t) => {
                    Err("LEFT-ARC precondition: stack top already has a head".into())
                }
                _ => Ok(()),
            },
            TransitionKind::Reduce => match top {
                Some(t) if c.has_head(t) => Ok(()),
                _ => Err("REDUCE precondition: stack top has no head".into()),
            },
            TransitionKind::NoArc => Err("NO-ARC is not an arc-eager transition".into()),
        }
    }

    fn is_terminal(&self, c: &Configuration) -> bool {
        c.buffer_front().is_none()
    }

    fn perform(&self, c: &mut Configuration, kind: TransitionKind, label: &str) {
        match kind {
            TransitionKind::Shift => c.shift(),
            TransitionKind::Reduce => {
                c.pop();
            }
            TransitionKind::LeftArc => {
                let top = c.pop().unwrap();
                let front = c.buffer_front().unwrap();
                c.attach(front, label, top);
            }
            TransitionKind::RightArc => {
                let top = c.stack_top().unwrap();
                let front = c.buffer_front().unwrap();
                c.attach(top, label, front);
                c.shift();
            }
            TransitionKind::NoArc => unreachable!("rejected by precondition"),
        }
    }

    fn next_gold(&self, c: &Configuration, gold: &GoldTree) -> Result<Transition> {
        let (top, front) = match (c.stack_top(), c.buffer_front()) {
            (Some(t), Some(f)) => (t, f),
            _ => {
                return Err(Error::Oracle(
                    "arc-eager oracle called on a terminal configuration".into(),
                ))
            }
        };
        if gold.has_arc(front, top) {
            return Ok(Transition::left_arc(gold.label(top)));
        }
        if gold.has_arc(top, front) {
            return Ok(Transition::right_arc(gold.label(front)));
        }
        // Reduce only once the top is finished: headed, with no dependent left to attach.
        if c.has_head(top) && c.dependent_count(top) == gold.dependent_count(top) {
            return Ok(Transition::reduce());
        }
        Ok(Transition::shift())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::tests::tree;
    use crate::transition::{derive_sequence, replay, DependencyArc};

    #[test]
    fn initial_state() {
        let c = ArcEager.initial_for(2);
        assert_eq!(c.stack(), &[0]);
        assert_eq!(c.buffer(), vec![1, 2]);
        assert!(c.arcs().is_empty());
        assert!(ArcEager.is_terminal(&ArcEager.initial_for(0)));
    }

    #[test]
    fn legal_moves_at_start() {
        let c = ArcEager.initial_for(2);
        assert_eq!(
            ArcEager.legal(&c),
            vec![TransitionKind::Shift, TransitionKind::RightArc]
        );
    }

    #[test]
    fn legal_moves_with_headless_top() {
        let c = ArcEager
            .apply(&ArcEager.initial_for(2), &Transition::shift())
            .unwrap();
        assert_eq!(c.stack(), &[0, 1]);
        assert_eq!(
            ArcEager.legal(&c),
            vec![
                TransitionKind::Shift,
                TransitionKind::LeftArc,
                TransitionKind::RightArc
            ]
        );
    }

    #[test]
    fn reduce_needs_a_headed_top() {
        let c = ArcEager.initial_for(2);
        let err = ArcEager.apply(&c, &Transition::reduce()).unwrap_err();
        assert!(err.to_string().contains("REDUCE precondition"), "{}", err);
        // The input configuration is untouched.
        assert_eq!(c, ArcEager.initial_for(2));
    }

    #[test]
    fn two_token_sequence() {
        let seq = vec![
            Transition::shift(),
            Transition::left_arc("nmod"),
            Transition::right_arc("Root"),
        ];
        let c = replay(2, &seq, &ArcEager).unwrap();
        assert!(ArcEager.is_terminal(&c));
        assert_eq!(
            c.arcs(),
            vec![
                DependencyArc::new(2, "nmod", 1),
                DependencyArc::new(0, "Root", 2)
            ]
        );

        let gold = tree(&[2, 0], &["nmod", "Root"]);
        assert_eq!(derive_sequence(&gold, &ArcEager).unwrap(), seq);
    }

    #[test]
    fn single_token_sequence() {
        let gold = tree(&[0], &["Root"]);
        assert_eq!(
            derive_sequence(&gold, &ArcEager).unwrap(),
            vec![Transition::right_arc("Root")]
        );
    }

    #[test]
    fn top_with_pending_right_dependent_is_not_reduced() {
        // 1 is the root and heads 3; 3 heads 2.
        let gold = tree(&[0, 3, 1], &["Root", "Nmod", "Dobj"]);
        let seq = derive_sequence(&gold, &ArcEager).unwrap();
        let text: Vec<String> = seq.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            text,
            vec!["RIGHT-ARC:Root", "SHIFT", "LEFT-ARC:Nmod", "RIGHT-ARC:Dobj"]
        );
    }
}
