//! Transition systems for greedy dependency parsing, with static oracles.
//!
//! Three systems are provided: arc-eager and arc-standard (projective only)
//! and Covington's non-projective list-based system. All share the
//! [`Configuration`] type and the [`TransitionSystem`] trait.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sentence::Sentence;
use crate::validate::heads_are_projective;

mod arc_eager;
mod arc_standard;
mod config;
mod covington;

pub use self::arc_eager::ArcEager;
pub use self::arc_standard::ArcStandard;
pub use self::config::{Configuration, DependencyArc};
pub use self::covington::Covington;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionKind {
    Shift,
    Reduce,
    NoArc,
    LeftArc,
    RightArc,
}

impl TransitionKind {
    pub fn is_arc(self) -> bool {
        matches!(self, TransitionKind::LeftArc | TransitionKind::RightArc)
    }

    pub fn name(self) -> &'static str {
        match self {
            TransitionKind::Shift => "SHIFT",
            TransitionKind::Reduce => "REDUCE",
            TransitionKind::NoArc => "NO-ARC",
            TransitionKind::LeftArc => "LEFT-ARC",
            TransitionKind::RightArc => "RIGHT-ARC",
        }
    }
}

impl fmt::Display for TransitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_uppercase().as_str() {
            "SHIFT" => TransitionKind::Shift,
            "REDUCE" => TransitionKind::Reduce,
            "NO-ARC" => TransitionKind::NoArc,
            "LEFT-ARC" => TransitionKind::LeftArc,
            "RIGHT-ARC" => TransitionKind::RightArc,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown transition '{}'",
                    s
                )))
            }
        })
    }
}

/// A move, labelled iff it builds an arc. Renders as `KIND` or `KIND:label`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub kind: TransitionKind,
    pub label: Option<String>,
}

impl Transition {
    pub fn shift() -> Self {
        Transition::unlabelled(TransitionKind::Shift)
    }

    pub fn reduce() -> Self {
        Transition::unlabelled(TransitionKind::Reduce)
    }

    pub fn no_arc() -> Self {
        Transition::unlabelled(TransitionKind::NoArc)
    }

    pub fn left_arc(label: impl Into<String>) -> Self {
        Transition {
            kind: TransitionKind::LeftArc,
            label: Some(label.into()),
        }
    }

    pub fn right_arc(label: impl Into<String>) -> Self {
        Transition {
            kind: TransitionKind::RightArc,
            label: Some(label.into()),
        }
    }

    fn unlabelled(kind: TransitionKind) -> Self {
        Transition { kind, label: None }
    }

    pub(crate) fn arc_label(&self) -> Result<&str> {
        match (&self.label, self.kind.is_arc()) {
            (Some(label), true) => Ok(label),
            (None, false) => Ok(""),
            (Some(_), false) => Err(Error::IllegalTransition {
                transition: self.to_string(),
                reason: "only arc transitions carry a label".into(),
            }),
            (None, true) => Err(Error::IllegalTransition {
                transition: self.to_string(),
                reason: "arc transitions need a label".into(),
            }),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(label) => write!(f, "{}:{}", self.kind, label),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl FromStr for Transition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, label) = match s.split_once(':') {
            Some((k, l)) => (k.parse::<TransitionKind>()?, Some(l.to_owned())),
            None => (s.parse::<TransitionKind>()?, None),
        };
        let t = Transition { kind, label };
        t.arc_label()?;
        Ok(t)
    }
}

/// Gold heads and labels, indexed by node (entry 0 unused).
#[derive(Clone, Debug)]
pub struct GoldTree {
    heads: Vec<usize>,
    labels: Vec<String>,
    dependent_counts: Vec<usize>,
}

impl GoldTree {
    pub fn from_sentence(gold: &Sentence) -> Result<Self> {
        let n = gold.len();
        let mut heads = vec![0; n + 1];
        let mut labels = vec![String::new(); n + 1];
        let mut dependent_counts = vec![0; n + 1];
        for (pos, token) in gold.tokens.iter().enumerate() {
            let (head, label) = match (token.head, &token.deprel) {
                (Some(h), Some(l)) => (h, l),
                _ => {
                    return Err(Error::Unannotated(format!(
                        "token {} lacks HEAD or DEPREL",
                        pos + 1
                    )))
                }
            };
            if head > n || head == pos + 1 {
                return Err(Error::InvalidSentence(format!(
                    "token {} has invalid head {}",
                    pos + 1,
                    head
                )));
            }
            heads[pos + 1] = head;
            labels[pos + 1] = label.clone();
            dependent_counts[head] += 1;
        }
        Ok(GoldTree {
            heads,
            labels,
            dependent_counts,
        })
    }

    pub fn token_count(&self) -> usize {
        self.heads.len() - 1
    }

    pub fn head(&self, node: usize) -> usize {
        self.heads[node]
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    /// True when `head -> dependent` is a gold arc.
    pub fn has_arc(&self, head: usize, dependent: usize) -> bool {
        dependent != 0 && self.heads[dependent] == head
    }

    pub fn dependent_count(&self, node: usize) -> usize {
        self.dependent_counts[node]
    }

    pub fn is_projective(&self) -> bool {
        heads_are_projective(&self.heads[1..])
    }

    pub fn arcs(&self) -> Vec<DependencyArc> {
        (1..self.heads.len())
            .map(|d| DependencyArc::new(self.heads[d], self.labels[d].clone(), d))
            .collect()
    }
}

/// A deterministic parser state machine.
pub trait TransitionSystem: Send + Sync {
    /// Canonical system name.
    fn name(&self) -> &'static str;

    /// Transition kinds in declaration order.
    fn kinds(&self) -> &'static [TransitionKind];

    fn handles_nonprojective(&self) -> bool;

    fn initial_for(&self, token_count: usize) -> Configuration;

    /// `Err` carries the violated precondition.
    fn precondition(
        &self,
        c: &Configuration,
        kind: TransitionKind,
    ) -> std::result::Result<(), String>;

    /// Perform a transition whose preconditions were already checked.
    fn perform(&self, c: &mut Configuration, kind: TransitionKind, label: &str);

    /// Next gold transition for a configuration reached by earlier oracle moves.
    fn next_gold(&self, c: &Configuration, gold: &GoldTree) -> Result<Transition>;

    fn initial(&self, s: &Sentence) -> Configuration {
        self.initial_for(s.len())
    }

    /// Legal kinds in declaration order.
    fn legal(&self, c: &Configuration) -> Vec<TransitionKind> {
        self.kinds()
            .iter()
            .copied()
            .filter(|&k| self.precondition(c, k).is_ok())
            .collect()
    }

    fn is_terminal(&self, c: &Configuration) -> bool {
        self.legal(c).is_empty()
    }

    fn apply_mut(&self, c: &mut Configuration, t: &Transition) -> Result<()> {
        let label = t.arc_label()?;
        if !self.kinds().contains(&t.kind) {
            return Err(Error::IllegalTransition {
                transition: t.to_string(),
                reason: format!("not a {} transition", self.name()),
            });
        }
        self.precondition(c, t.kind)
            .map_err(|reason| Error::IllegalTransition {
                transition: t.to_string(),
                reason,
            })?;
        self.perform(c, t.kind, label);
        Ok(())
    }

    /// Apply `t` to a copy of `c`.
    fn apply(&self, c: &Configuration, t: &Transition) -> Result<Configuration> {
        let mut next = c.clone();
        self.apply_mut(&mut next, t)?;
        Ok(next)
    }

    /// Static oracle against an annotated gold sentence.
    fn oracle(&self, c: &Configuration, gold: &Sentence) -> Result<Transition> {
        let tree = GoldTree::from_sentence(gold)?;
        if !self.handles_nonprojective() && !tree.is_projective() {
            return Err(Error::NonProjective);
        }
        self.next_gold(c, &tree)
    }
}

/// The available systems, selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    ArcEager,
    ArcStandard,
    Covington,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::ArcEager,
        Algorithm::ArcStandard,
        Algorithm::Covington,
    ];

    pub fn system(self) -> &'static dyn TransitionSystem {
        match self {
            Algorithm::ArcEager => &ArcEager,
            Algorithm::ArcStandard => &ArcStandard,
            Algorithm::Covington => &Covington,
        }
    }

    pub fn name(self) -> &'static str {
        self.system().name()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts the canonical names plus the MaltParser spellings.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "arc-eager" | "nivreeager" => Ok(Algorithm::ArcEager),
            "arc-standard" | "nivrestandard" => Ok(Algorithm::ArcStandard),
            "covington" | "covington-nonprojective" | "covnonproj" => Ok(Algorithm::Covington),
            _ => Err(Error::UnknownSystem(s.to_owned())),
        }
    }
}

/// Walk the oracle from the initial state to a terminal one, calling `visit`
/// with each configuration and the gold transition taken from it. Returns the
/// terminal configuration after checking it reproduces the gold arcs.
pub fn oracle_walk<F>(
    gold: &Sentence,
    sys: &dyn TransitionSystem,
    mut visit: F,
) -> Result<Configuration>
where
    F: FnMut(&Configuration, &Transition),
{
    let tree = GoldTree::from_sentence(gold)?;
    if !sys.handles_nonprojective() && !tree.is_projective() {
        return Err(Error::NonProjective);
    }
    let mut c = sys.initial(gold);
    while !sys.is_terminal(&c) {
        let t = sys.next_gold(&c, &tree)?;
        visit(&c, &t);
        sys.apply_mut(&mut c, &t)?;
    }
    if c.arcs() != tree.arcs() {
        return Err(Error::Oracle(format!(
            "{} oracle did not reproduce the gold tree",
            sys.name()
        )));
    }
    Ok(c)
}

/// Gold transition sequence for an annotated sentence.
pub fn derive_sequence(gold: &Sentence, sys: &dyn TransitionSystem) -> Result<Vec<Transition>> {
    let mut sequence = Vec::new();
    oracle_walk(gold, sys, |_, t| sequence.push(t.clone()))?;
    Ok(sequence)
}

/// Apply `sequence` from the initial state of an `token_count`-token sentence.
pub fn replay(
    token_count: usize,
    sequence: &[Transition],
    sys: &dyn TransitionSystem,
) -> Result<Configuration> {
    let mut c = sys.initial_for(token_count);
    for t in sequence {
        sys.apply_mut(&mut c, t)?;
    }
    Ok(c)
}

/// Read heads and labels off a final configuration.
///
/// Unattached tokens go to node 0 with `fallback_label`. If that leaves more
/// than one token on node 0, the first token attached to node 0 by an actual
/// arc (or else the first head-0 token) stays the root, and the others are
/// reattached to it with `fallback_label`.
pub fn extract_tree(
    c: &Configuration,
    token_count: usize,
    fallback_label: &str,
) -> (Vec<usize>, Vec<String>) {
    let mut heads = Vec::with_capacity(token_count);
    let mut labels = Vec::with_capacity(token_count);
    for node in 1..=token_count {
        match (c.head(node), c.label(node)) {
            (Some(h), Some(l)) => {
                heads.push(h);
                labels.push(l.to_owned());
            }
            _ => {
                heads.push(0);
                labels.push(fallback_label.to_owned());
            }
        }
    }

    let roots: Vec<usize> = (1..=token_count).filter(|&k| heads[k - 1] == 0).collect();
    if roots.len() > 1 {
        let keep = roots
            .iter()
            .copied()
            .find(|&k| c.head(k) == Some(0))
            .unwrap_or(roots[0]);
        for &k in roots.iter().filter(|&&k| k != keep) {
            heads[k - 1] = keep;
            labels[k - 1] = fallback_label.to_owned();
        }
    }
    (heads, labels)
}
