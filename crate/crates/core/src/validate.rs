//! Structural checks on sentences: id numbering, head ranges, tree shape,
//! label vocabulary, and projectivity.

use std::fmt;

use crate::error::{Error, Result};
use crate::sentence::Sentence;
use crate::tagset::{Lookup, Tagset};

/// Issue kinds in reporting order for a given token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueKind {
    NonContiguousId,
    EmptyForm,
    MissingHead,
    MissingDeprel,
    HeadOutOfRange,
    SelfLoop,
    Cycle,
    NoRoot,
    MultipleRoots,
    UnknownDeprel,
    UnknownPostag,
}

impl IssueKind {
    pub fn name(self) -> &'static str {
        match self {
            IssueKind::NonContiguousId => "non-contiguous id",
            IssueKind::EmptyForm => "empty form",
            IssueKind::MissingHead => "missing head",
            IssueKind::MissingDeprel => "missing deprel",
            IssueKind::HeadOutOfRange => "head out of range",
            IssueKind::SelfLoop => "self-loop",
            IssueKind::Cycle => "cycle",
            IssueKind::NoRoot => "no root",
            IssueKind::MultipleRoots => "multiple roots",
            IssueKind::UnknownDeprel => "unknown deprel",
            IssueKind::UnknownPostag => "unknown postag",
        }
    }
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub sentence: usize,
    /// 0 for sentence-level issues.
    pub token: usize,
    pub kind: IssueKind,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sentence {} token {}: {}: {}",
            self.sentence, self.token, self.kind, self.message
        )
    }
}

/// Non-fatal observation, e.g. a relation spelled through a tagset alias.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Notice {
    pub sentence: usize,
    pub token: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub notices: Vec<Notice>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.issues.extend(other.issues);
        self.notices.extend(other.notices);
    }
}

/// Check one sentence. `require_annotation` makes absent HEAD/DEPREL an issue.
pub fn validate_sentence(
    s: &Sentence,
    tagset: &Tagset,
    require_annotation: bool,
) -> ValidationReport {
    validate_indexed(0, s, tagset, require_annotation)
}

/// Check a treebank; issues carry 0-based sentence indices.
pub fn validate_treebank(
    sentences: &[Sentence],
    tagset: &Tagset,
    require_annotation: bool,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, s) in sentences.iter().enumerate() {
        report.merge(validate_indexed(i, s, tagset, require_annotation));
    }
    report
}

fn validate_indexed(
    index: usize,
    s: &Sentence,
    tagset: &Tagset,
    require_annotation: bool,
) -> ValidationReport {
    let n = s.len();
    let mut issues = Vec::new();
    let mut notices = Vec::new();
    let mut issue = |token: usize, kind: IssueKind, message: String| {
        issues.push(Issue {
            sentence: index,
            token,
            kind,
            message,
        })
    };

    for (pos, token) in s.tokens.iter().enumerate() {
        let expected = pos + 1;
        // Position-based numbering keeps later checks meaningful even when ids are off.
        let id = expected;
        if token.id != expected {
            issue(
                id,
                IssueKind::NonContiguousId,
                format!("expected id {}, found {}", expected, token.id),
            );
        }
        if token.form.is_empty() {
            issue(id, IssueKind::EmptyForm, "empty FORM".into());
        }
        match token.head {
            None if require_annotation => {
                issue(id, IssueKind::MissingHead, "HEAD is absent".into())
            }
            Some(h) if h > n => issue(
                id,
                IssueKind::HeadOutOfRange,
                format!("head {} outside 0..={}", h, n),
            ),
            Some(h) if h == id => issue(id, IssueKind::SelfLoop, "token is its own head".into()),
            _ => {}
        }
        match &token.deprel {
            None if require_annotation => {
                issue(id, IssueKind::MissingDeprel, "DEPREL is absent".into())
            }
            Some(label) => match tagset.lookup_deprel(label) {
                Lookup::Canonical(_) => {}
                Lookup::Alias(canonical) => notices.push(Notice {
                    sentence: index,
                    token: id,
                    message: format!("relation '{}' read as alias of '{}'", label, canonical),
                }),
                Lookup::Unknown => issue(
                    id,
                    IssueKind::UnknownDeprel,
                    format!("relation '{}' is not in the tagset", label),
                ),
            },
            None => {}
        }
        if !tagset.accepts_postag(&token.postag) {
            issue(
                id,
                IssueKind::UnknownPostag,
                format!("POS tag '{}' is not in the tagset", token.postag),
            );
        }
    }

    // Heads usable for structural checks: in range and not self-loops.
    let heads: Vec<Option<usize>> = s
        .tokens
        .iter()
        .enumerate()
        .map(|(pos, t)| t.head.filter(|&h| h <= n && h != pos + 1))
        .collect();

    for cycle_min in find_cycles(&heads) {
        issue(
            cycle_min,
            IssueKind::Cycle,
            format!("head chain from token {} never reaches the root", cycle_min),
        );
    }

    if s.tokens.iter().all(|t| t.head.is_some()) && n > 0 {
        let roots: Vec<usize> = s
            .tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.head == Some(0))
            .map(|(pos, _)| pos + 1)
            .collect();
        match roots.len() {
            0 => issue(
                0,
                IssueKind::NoRoot,
                "no token is attached to node 0".into(),
            ),
            1 => {}
            _ => issue(
                0,
                IssueKind::MultipleRoots,
                format!("tokens {:?} are all attached to node 0", roots),
            ),
        }
    }

    issues.sort_by_key(|a| (a.token, a.kind));
    ValidationReport { issues, notices }
}

/// Smallest token id of every distinct cycle in the head function.
fn find_cycles(heads: &[Option<usize>]) -> Vec<usize> {
    const UNVISITED: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;

    let n = heads.len();
    let mut state = vec![UNVISITED; n + 1];
    let mut cycles = Vec::new();

    for start in 1..=n {
        if state[start] != UNVISITED {
            continue;
        }
        let mut path = Vec::new();
        let mut node = start;
        loop {
            if node == 0 || state[node] == DONE {
                break;
            }
            if state[node] == ACTIVE {
                let begin = path.iter().position(|&p| p == node).unwrap();
                cycles.push(*path[begin..].iter().min().unwrap());
                break;
            }
            state[node] = ACTIVE;
            path.push(node);
            match heads[node - 1] {
                Some(h) => node = h,
                None => break,
            }
        }
        for p in path {
            state[p] = DONE;
        }
    }
    cycles.sort_unstable();
    cycles
}

/// True iff no two arcs cross, node 0 sitting at position 0.
///
/// Arc spans are checked for a laminar (nested-or-disjoint) layout with a
/// sorted sweep; shared endpoints do not count as crossings.
pub fn is_projective(s: &Sentence) -> Result<bool> {
    let heads = s
        .heads()
        .ok_or_else(|| Error::Unannotated("is_projective needs every HEAD".into()))?;
    let n = heads.len();
    if let Some(h) = heads.iter().find(|&&h| h > n) {
        return Err(Error::InvalidSentence(format!("head {} out of range", h)));
    }
    Ok(heads_are_projective(&heads))
}

/// Projectivity over a 1-based head vector (`heads[k-1]` is the head of `k`).
pub fn heads_are_projective(heads: &[usize]) -> bool {
    let mut spans: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .map(|(pos, &h)| {
            let d = pos + 1;
            (h.min(d), h.max(d))
        })
        .collect();
    spans.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));

    let mut open: Vec<(usize, usize)> = Vec::new();
    for (left, right) in spans {
        while open.last().is_some_and(|&(_, r)| r <= left) {
            open.pop();
        }
        if let Some(&(_, r)) = open.last() {
            if right > r {
                return false;
            }
        }
        open.push((left, right));
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentence::Token;

    fn sentence(heads: &[usize], labels: &[&str]) -> Sentence {
        Sentence::new(
            heads
                .iter()
                .zip(labels)
                .enumerate()
                .map(|(i, (&h, &l))| Token::new(i + 1, format!("w{}", i + 1), "NN").with_head(h, l))
                .collect(),
        )
    }

    fn kinds(report: &ValidationReport) -> Vec<IssueKind> {
        report.issues.iter().map(|i| i.kind).collect()
    }

    #[test]
    fn single_token_tree_is_valid() {
        let s = sentence(&[0], &["Root"]);
        let report = validate_sentence(&s, &Tagset::urdu(), true);
        assert!(report.ok(), "{:?}", report);
        assert!(is_projective(&s).unwrap());
    }

    #[test]
    fn two_cycle_reports_cycle_and_no_root() {
        let s = sentence(&[2, 1], &["Nmod", "Nmod"]);
        let report = validate_sentence(&s, &Tagset::urdu(), true);
        assert_eq!(kinds(&report), vec![IssueKind::NoRoot, IssueKind::Cycle]);
        assert_eq!(report.issues[1].token, 1);
    }

    #[test]
    fn issues_are_ordered_by_token_then_kind() {
        let mut s = sentence(&[0, 2, 9, 0], &["Root", "Subj", "Bogus", "Root"]);
        s.tokens[2].id = 7;
        let report = validate_sentence(&s, &Tagset::urdu(), true);
        let got: Vec<(usize, IssueKind)> =
            report.issues.iter().map(|i| (i.token, i.kind)).collect();
        assert_eq!(
            got,
            vec![
                (0, IssueKind::MultipleRoots),
                (2, IssueKind::SelfLoop),
                (3, IssueKind::NonContiguousId),
                (3, IssueKind::HeadOutOfRange),
                (3, IssueKind::UnknownDeprel),
            ]
        );
    }

    #[test]
    fn missing_annotation_only_matters_when_required() {
        let s = Sentence::new(vec![Token::new(1, "a", "NN"), Token::new(2, "b", "NN")]);
        assert!(validate_sentence(&s, &Tagset::urdu(), false).ok());
        let report = validate_sentence(&s, &Tagset::urdu(), true);
        assert_eq!(
            kinds(&report),
            vec![
                IssueKind::MissingHead,
                IssueKind::MissingDeprel,
                IssueKind::MissingHead,
                IssueKind::MissingDeprel
            ]
        );
    }

    #[test]
    fn alias_is_a_notice_not_an_issue() {
        let s = sentence(&[0], &["Reason"]);
        let report = validate_sentence(&s, &Tagset::urdu(), true);
        assert!(report.ok());
        assert_eq!(report.notices.len(), 1);
    }

    #[test]
    fn crossing_tree_is_not_projective() {
        // h(1)=0, h(2)=3, h(3)=1, h(4)=2: arcs (1,3) and (2,4) cross.
        let s = sentence(&[0, 3, 1, 2], &["Root", "Nmod", "Nmod", "Nmod"]);
        assert!(validate_sentence(&s, &Tagset::urdu(), true).ok());
        assert!(!is_projective(&s).unwrap());
    }

    #[test]
    fn root_arc_can_be_crossed() {
        // Arc (0,2) is crossed by (1,3).
        assert!(!heads_are_projective(&[3, 0, 2]));
        assert!(heads_are_projective(&[2, 0, 2]));
    }

    #[test]
    fn projectivity_needs_heads() {
        let s = Sentence::new(vec![Token::new(1, "a", "NN")]);
        assert!(matches!(is_projective(&s), Err(Error::Unannotated(_))));
    }

    #[test]
    fn validation_is_pure() {
        let s = sentence(&[2, 1, 5], &["Nmod", "x", "P"]);
        let t = Tagset::urdu();
        assert_eq!(
            validate_sentence(&s, &t, true),
            validate_sentence(&s, &t, true)
        );
    }
}
