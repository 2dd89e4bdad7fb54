//! Tokens and sentences as read from a treebank.
//!
//! The artificial root is not a token: it is addressed as node `0`, and token
//! `k` (1-based) lives at `tokens[k - 1]`.

use std::fmt;

use crate::error::{Error, Result};

/// Morphological features in column order, with unique attribute names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Features(Vec<(String, String)>);

impl Features {
    pub fn new() -> Self {
        Features(Vec::new())
    }

    /// Append an attribute, rejecting duplicates.
    pub fn insert(&mut self, attribute: impl Into<String>, value: impl Into<String>) -> Result<()> {
        let attribute = attribute.into();
        if self.get(&attribute).is_some() {
            return Err(Error::Feats {
                message: format!("duplicate attribute {}", attribute),
            });
        }
        self.0.push((attribute, value.into()));
        Ok(())
    }

    pub fn get(&self, attribute: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(a, _)| a == attribute)
            .map(|(_, v)| v.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(a, v)| (a.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One treebank row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: Option<String>,
    pub cpostag: String,
    pub postag: String,
    pub feats: Features,
    /// `Some(0)` attaches the token to the artificial root.
    pub head: Option<usize>,
    pub deprel: Option<String>,
}

impl Token {
    /// An unannotated token with identical coarse and fine POS tags.
    pub fn new(id: usize, form: impl Into<String>, postag: impl Into<String>) -> Self {
        let postag = postag.into();
        Token {
            id,
            form: form.into(),
            lemma: None,
            cpostag: postag.clone(),
            postag,
            feats: Features::new(),
            head: None,
            deprel: None,
        }
    }

    pub fn with_head(mut self, head: usize, deprel: impl Into<String>) -> Self {
        self.head = Some(head);
        self.deprel = Some(deprel.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    /// Free text such as the source line range.
    pub metadata: Option<String>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence {
            tokens,
            metadata: None,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token for node `k`; node 0 (the root) and out-of-range nodes give `None`.
    pub fn token(&self, node: usize) -> Option<&Token> {
        node.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// True when every token has both a head and a relation.
    pub fn is_annotated(&self) -> bool {
        self.tokens
            .iter()
            .all(|t| t.head.is_some() && t.deprel.is_some())
    }

    /// Heads indexed by token position, or `None` if any head is missing.
    pub fn heads(&self) -> Option<Vec<usize>> {
        self.tokens.iter().map(|t| t.head).collect()
    }

    /// A copy with HEAD and DEPREL cleared.
    pub fn unannotated(&self) -> Sentence {
        let mut copy = self.clone();
        for token in &mut copy.tokens {
            token.head = None;
            token.deprel = None;
        }
        copy
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<&str> = self.tokens.iter().map(|t| t.form.as_str()).collect();
        f.write_str(&forms.join(" "))
    }
}
