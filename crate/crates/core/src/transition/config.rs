use std::fmt;

use crate::error::{Error, Result};

/// A labelled arc `head -> dependent`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyArc {
    pub head: usize,
    pub label: String,
    pub dependent: usize,
}

impl DependencyArc {
    pub fn new(head: usize, label: impl Into<String>, dependent: usize) -> Self {
        DependencyArc {
            head,
            label: label.into(),
            dependent,
        }
    }
}

impl fmt::Display for DependencyArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.head, self.label, self.dependent)
    }
}

/// Parser state: a stack, the remaining input, and the arcs built so far.
///
/// Tokens are consumed from the input strictly left to right, so the buffer
/// is always the suffix `next..=token_count`. `aux` holds the nodes a
/// Covington parser has stepped over for the current input token (most
/// recent last); the other systems leave it empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    token_count: usize,
    stack: Vec<usize>,
    next: usize,
    aux: Vec<usize>,
    heads: Vec<Option<(usize, String)>>,
}

impl Configuration {
    pub(crate) fn start(token_count: usize, stack: Vec<usize>) -> Self {
        Configuration {
            token_count,
            stack,
            next: 1,
            aux: Vec::new(),
            heads: vec![None; token_count + 1],
        }
    }

    /// Build an arbitrary state, checking the structural invariants.
    pub fn from_parts(
        token_count: usize,
        stack: Vec<usize>,
        buffer_start: usize,
        aux: Vec<usize>,
        arcs: &[DependencyArc],
    ) -> Result<Self> {
        let invalid = |m: String| Error::InvalidArgument(format!("configuration: {}", m));
        if buffer_start == 0 || buffer_start > token_count + 1 {
            return Err(invalid(format!(
                "buffer start {} out of range",
                buffer_start
            )));
        }
        let mut seen = vec![false; token_count + 1];
        for &node in stack.iter().chain(&aux) {
            if node > token_count || node >= buffer_start {
                return Err(invalid(format!("node {} cannot be on the stack", node)));
            }
            if std::mem::replace(&mut seen[node], true) {
                return Err(invalid(format!("node {} appears twice", node)));
            }
        }
        let mut heads = vec![None; token_count + 1];
        for arc in arcs {
            if arc.dependent == 0 || arc.dependent > token_count || arc.head > token_count {
                return Err(invalid(format!("arc {} out of range", arc)));
            }
            if heads[arc.dependent].is_some() {
                return Err(invalid(format!("node {} has two heads", arc.dependent)));
            }
            heads[arc.dependent] = Some((arc.head, arc.label.clone()));
        }
        Ok(Configuration {
            token_count,
            stack,
            next: buffer_start,
            aux,
            heads,
        })
    }

    pub fn token_count(&self) -> usize {
        self.token_count
    }

    /// Bottom to top.
    pub fn stack(&self) -> &[usize] {
        &self.stack
    }

    /// The `k`-th stack node counting from the top (0 = top).
    pub fn stack_nth(&self, k: usize) -> Option<usize> {
        self.stack.len().checked_sub(k + 1).map(|i| self.stack[i])
    }

    pub fn stack_top(&self) -> Option<usize> {
        self.stack.last().copied()
    }

    pub fn buffer(&self) -> Vec<usize> {
        (self.next..=self.token_count).collect()
    }

    pub fn buffer_len(&self) -> usize {
        self.token_count + 1 - self.next
    }

    /// The `k`-th remaining input token (0 = front).
    pub fn buffer_nth(&self, k: usize) -> Option<usize> {
        let node = self.next + k;
        (node <= self.token_count).then_some(node)
    }

    pub fn buffer_front(&self) -> Option<usize> {
        self.buffer_nth(0)
    }

    pub fn aux(&self) -> &[usize] {
        &self.aux
    }

    pub fn head(&self, node: usize) -> Option<usize> {
        self.heads.get(node)?.as_ref().map(|(h, _)| *h)
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.heads.get(node)?.as_ref().map(|(_, l)| l.as_str())
    }

    pub fn has_head(&self, node: usize) -> bool {
        self.head(node).is_some()
    }

    /// Leftmost dependent attached so far.
    pub fn leftmost_dependent(&self, node: usize) -> Option<usize> {
        (1..=self.token_count).find(|&d| self.head(d) == Some(node))
    }

    /// Rightmost dependent attached so far.
    pub fn rightmost_dependent(&self, node: usize) -> Option<usize> {
        (1..=self.token_count)
            .rev()
            .find(|&d| self.head(d) == Some(node))
    }

    pub fn dependent_count(&self, node: usize) -> usize {
        (1..=self.token_count)
            .filter(|&d| self.head(d) == Some(node))
            .count()
    }

    /// True when `ancestor` is reachable from `node` by following heads.
    pub fn dominates(&self, ancestor: usize, node: usize) -> bool {
        let mut current = node;
        // Arcs are acyclic, so the walk is bounded by the token count.
        for _ in 0..=self.token_count {
            if current == ancestor {
                return true;
            }
            match self.head(current) {
                Some(h) => current = h,
                None => return false,
            }
        }
        false
    }

    /// Arcs sorted by dependent.
    pub fn arcs(&self) -> Vec<DependencyArc> {
        self.heads
            .iter()
            .enumerate()
            .filter_map(|(d, entry)| {
                entry
                    .as_ref()
                    .map(|(h, l)| DependencyArc::new(*h, l.clone(), d))
            })
            .collect()
    }

    pub(crate) fn shift(&mut self) {
        let front = self.next;
        self.next += 1;
        self.stack.push(front);
    }

    pub(crate) fn advance_buffer(&mut self) {
        self.next += 1;
    }

    pub(crate) fn pop(&mut self) -> Option<usize> {
        self.stack.pop()
    }

    pub(crate) fn remove_second(&mut self) -> Option<usize> {
        let len = self.stack.len();
        (len >= 2).then(|| self.stack.remove(len - 2))
    }

    pub(crate) fn push_stack(&mut self, node: usize) {
        self.stack.push(node);
    }

    pub(crate) fn park(&mut self, node: usize) {
        self.aux.push(node);
    }

    /// Move parked nodes back onto the stack in their original order.
    pub(crate) fn unpark_all(&mut self) {
        while let Some(node) = self.aux.pop() {
            self.stack.push(node);
        }
    }

    pub(crate) fn attach(&mut self, head: usize, label: &str, dependent: usize) {
        debug_assert!(self.heads[dependent].is_none());
        self.heads[dependent] = Some((head, label.to_owned()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_parts_rejects_two_heads() {
        let arcs = [
            DependencyArc::new(0, "Root", 1),
            DependencyArc::new(2, "P", 1),
        ];
        assert!(Configuration::from_parts(2, vec![0], 1, vec![], &arcs).is_err());
    }

    #[test]
    fn from_parts_rejects_stack_buffer_overlap() {
        assert!(Configuration::from_parts(3, vec![0, 2], 2, vec![], &[]).is_err());
        assert!(Configuration::from_parts(3, vec![0, 1], 2, vec![], &[]).is_ok());
    }

    #[test]
    fn dependents_and_dominance() {
        let arcs = [
            DependencyArc::new(2, "a", 1),
            DependencyArc::new(2, "b", 3),
            DependencyArc::new(0, "Root", 2),
        ];
        let c = Configuration::from_parts(3, vec![0], 4, vec![], &arcs).unwrap();
        assert_eq!(c.leftmost_dependent(2), Some(1));
        assert_eq!(c.rightmost_dependent(2), Some(3));
        assert_eq!(c.leftmost_dependent(1), None);
        assert!(c.dominates(0, 3));
        assert!(!c.dominates(3, 2));
        assert_eq!(c.arcs().len(), 3);
        assert_eq!(c.buffer_len(), 0);
    }
}
