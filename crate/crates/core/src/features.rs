//! Declarative feature templates and their one-hot realisation.
//!
//! A template names a node in the configuration (a stack or buffer position,
//! optionally followed by `head`, `ldep` or `rdep` steps) and an attribute of
//! that node, e.g. `STACK[0].POSTAG`, `BUFFER[0].ldep.DEPREL` or
//! `STACK[0].FEATS[G]`. One template per line in a feature-spec file; `#`
//! starts a comment.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sentence::Sentence;
use crate::transition::Configuration;

pub const MAX_DEPTH: usize = 3;
pub const MAX_STEPS: usize = 2;

/// Value of a template whose node does not exist.
pub const NULL: &str = "NULL";
/// FORM, POSTAG and CPOSTAG of the artificial root.
pub const ROOT: &str = "ROOT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Stack(usize),
    Buffer(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Head,
    LeftmostDependent,
    RightmostDependent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Attribute {
    Form,
    Lemma,
    Postag,
    Cpostag,
    Deprel,
    Feats(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeatureTemplate {
    pub base: Base,
    pub steps: Vec<Step>,
    pub attribute: Attribute,
}

impl FeatureTemplate {
    pub fn new(base: Base, steps: Vec<Step>, attribute: Attribute) -> Self {
        FeatureTemplate {
            base,
            steps,
            attribute,
        }
    }

    /// Node addressed by the template, if it exists in `c`.
    pub fn resolve_node(&self, c: &Configuration) -> Option<usize> {
        let mut node = match self.base {
            Base::Stack(k) => c.stack_nth(k)?,
            Base::Buffer(k) => c.buffer_nth(k)?,
        };
        for step in &self.steps {
            node = match step {
                Step::Head => c.head(node)?,
                Step::LeftmostDependent => c.leftmost_dependent(node)?,
                Step::RightmostDependent => c.rightmost_dependent(node)?,
            };
        }
        Some(node)
    }

    /// Symbolic value of the template in `c`.
    pub fn value<'a>(&self, c: &'a Configuration, s: &'a Sentence) -> &'a str {
        let node = match self.resolve_node(c) {
            Some(node) => node,
            None => return NULL,
        };
        if node == 0 {
            return match self.attribute {
                Attribute::Form | Attribute::Postag | Attribute::Cpostag => ROOT,
                _ => NULL,
            };
        }
        if let Attribute::Deprel = self.attribute {
            return c.label(node).unwrap_or(NULL);
        }
        let token = match s.token(node) {
            Some(t) => t,
            None => return NULL,
        };
        match &self.attribute {
            Attribute::Form => &token.form,
            Attribute::Lemma => token.lemma.as_deref().unwrap_or(NULL),
            Attribute::Postag => &token.postag,
            Attribute::Cpostag => &token.cpostag,
            Attribute::Feats(key) => token.feats.get(key).unwrap_or(NULL),
            Attribute::Deprel => unreachable!(),
        }
    }
}

impl fmt::Display for FeatureTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Base::Stack(k) => write!(f, "STACK[{}]", k)?,
            Base::Buffer(k) => write!(f, "BUFFER[{}]", k)?,
        }
        for step in &self.steps {
            f.write_str(match step {
                Step::Head => ".head",
                Step::LeftmostDependent => ".ldep",
                Step::RightmostDependent => ".rdep",
            })?;
        }
        match &self.attribute {
            Attribute::Form => f.write_str(".FORM"),
            Attribute::Lemma => f.write_str(".LEMMA"),
            Attribute::Postag => f.write_str(".POSTAG"),
            Attribute::Cpostag => f.write_str(".CPOSTAG"),
            Attribute::Deprel => f.write_str(".DEPREL"),
            Attribute::Feats(key) => write!(f, ".FEATS[{}]", key),
        }
    }
}

impl FromStr for FeatureTemplate {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        let (base_text, mut rest) = text
            .split_once('.')
            .ok_or_else(|| format!("'{}' has no attribute", text))?;
        let base = parse_base(base_text)?;

        let mut steps = Vec::new();
        loop {
            let (segment, tail) = match rest.split_once('.') {
                Some((s, t)) => (s, Some(t)),
                None => (rest, None),
            };
            let step = match segment.to_lowercase().as_str() {
                "head" => Step::Head,
                "ldep" => Step::LeftmostDependent,
                "rdep" => Step::RightmostDependent,
                _ => break,
            };
            steps.push(step);
            rest = tail.ok_or_else(|| format!("'{}' has no attribute", text))?;
        }
        if steps.len() > MAX_STEPS {
            return Err(format!("at most {} path steps are allowed", MAX_STEPS));
        }
        let attribute = parse_attribute(rest)?;
        Ok(FeatureTemplate::new(base, steps, attribute))
    }
}

fn parse_base(text: &str) -> std::result::Result<Base, String> {
    let upper = text.to_uppercase();
    let (name, index) = upper
        .strip_suffix(']')
        .and_then(|s| s.split_once('['))
        .ok_or_else(|| format!("unknown address '{}'", text))?;
    let k: usize = index
        .trim()
        .parse()
        .map_err(|_| format!("invalid index in '{}'", text))?;
    if k > MAX_DEPTH {
        return Err(format!("k exceeds {}", MAX_DEPTH));
    }
    match name.trim() {
        "STACK" => Ok(Base::Stack(k)),
        "BUFFER" | "INPUT" => Ok(Base::Buffer(k)),
        _ => Err(format!("unknown address '{}'", text)),
    }
}

fn parse_attribute(text: &str) -> std::result::Result<Attribute, String> {
    let upper = text.to_uppercase();
    match upper.as_str() {
        "FORM" => return Ok(Attribute::Form),
        "LEMMA" => return Ok(Attribute::Lemma),
        "POSTAG" => return Ok(Attribute::Postag),
        "CPOSTAG" => return Ok(Attribute::Cpostag),
        "DEPREL" => return Ok(Attribute::Deprel),
        _ => {}
    }
    if upper.starts_with("FEATS[") && text.ends_with(']') {
        let key = &text["FEATS[".len()..text.len() - 1];
        if !key.is_empty() {
            return Ok(Attribute::Feats(key.to_owned()));
        }
    }
    Err(format!("unknown attribute '{}'", text))
}

/// Parse a feature-spec file: one template per non-empty, non-comment line.
pub fn parse_feature_spec(text: &str) -> Result<Vec<FeatureTemplate>> {
    let mut templates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let template = line.parse().map_err(|message| Error::FeatureSpec {
            line: i + 1,
            message,
        })?;
        templates.push(template);
    }
    Ok(templates)
}

/// One template per line, in order.
pub fn render_feature_spec(templates: &[FeatureTemplate]) -> String {
    templates.iter().map(|t| format!("{}\n", t)).collect()
}

/// The built-in 14-template model: word and POS context around the stack
/// top and buffer front, the relations attached so far, and gender/number
/// morphology.
pub fn default_feature_model() -> Vec<FeatureTemplate> {
    use Attribute::*;
    use Base::*;
    use Step::*;

    let t = FeatureTemplate::new;
    vec![
        t(Stack(0), vec![], Form),
        t(Stack(0), vec![], Postag),
        t(Buffer(0), vec![], Form),
        t(Buffer(0), vec![], Postag),
        t(Buffer(1), vec![], Form),
        t(Buffer(1), vec![], Postag),
        t(Stack(1), vec![], Postag),
        t(Buffer(2), vec![], Postag),
        t(Stack(0), vec![], Deprel),
        t(Stack(0), vec![LeftmostDependent], Deprel),
        t(Stack(0), vec![RightmostDependent], Deprel),
        t(Buffer(0), vec![LeftmostDependent], Deprel),
        t(Stack(0), vec![], Feats("G".into())),
        t(Buffer(0), vec![], Feats("N".into())),
    ]
}

/// Stable hex digest of a template list.
pub fn feature_model_fingerprint(templates: &[FeatureTemplate]) -> String {
    let digest = Sha256::digest(render_feature_spec(templates).as_bytes());
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

/// Active feature indices, sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureVector(Vec<usize>);

impl FeatureVector {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        FeatureVector(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Maps (template ordinal, value) pairs to dense feature indices in
/// first-seen order.
#[derive(Clone, Debug, Default)]
pub struct FeatureVocabulary {
    entries: Vec<(usize, String)>,
    index: HashMap<(usize, String), usize>,
    frozen: bool,
}

impl FeatureVocabulary {
    pub fn new() -> Self {
        FeatureVocabulary::default()
    }

    /// Rebuild from entries listed in index order.
    pub fn from_entries(entries: Vec<(usize, String)>, frozen: bool) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, key) in entries.iter().enumerate() {
            if index.insert(key.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate vocabulary entry ({}, {})",
                    key.0, key.1
                )));
            }
        }
        Ok(FeatureVocabulary {
            entries,
            index,
            frozen,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    /// Entries in index order.
    pub fn entries(&self) -> &[(usize, String)] {
        &self.entries
    }

    pub fn get(&self, ordinal: usize, value: &str) -> Option<usize> {
        self.index.get(&(ordinal, value.to_owned())).copied()
    }

    /// Look up a pair, adding it unless frozen.
    pub fn get_or_insert(&mut self, ordinal: usize, value: &str) -> Option<usize> {
        if let Some(i) = self.get(ordinal, value) {
            return Some(i);
        }
        if self.frozen {
            return None;
        }
        let i = self.entries.len();
        let key = (ordinal, value.to_owned());
        self.entries.push(key.clone());
        self.index.insert(key, i);
        Some(i)
    }
}

impl PartialEq for FeatureVocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.frozen == other.frozen && self.entries == other.entries
    }
}

impl Eq for FeatureVocabulary {}

/// Template values for a configuration, in template order.
pub fn feature_values<'a>(
    c: &'a Configuration,
    s: &'a Sentence,
    templates: &[FeatureTemplate],
) -> Vec<&'a str> {
    templates.iter().map(|t| t.value(c, s)).collect()
}

/// Extract features, growing `vocab` with unseen values unless it is frozen.
pub fn extract(
    c: &Configuration,
    s: &Sentence,
    templates: &[FeatureTemplate],
    vocab: &mut FeatureVocabulary,
) -> FeatureVector {
    let indices = templates
        .iter()
        .enumerate()
        .filter_map(|(ordinal, t)| vocab.get_or_insert(ordinal, t.value(c, s)))
        .collect();
    FeatureVector::new(indices)
}

/// Read-only extraction: unseen values are dropped.
pub fn extract_frozen(
    c: &Configuration,
    s: &Sentence,
    templates: &[FeatureTemplate],
    vocab: &FeatureVocabulary,
) -> FeatureVector {
    let indices = templates
        .iter()
        .enumerate()
        .filter_map(|(ordinal, t)| vocab.get(ordinal, t.value(c, s)))
        .collect();
    FeatureVector::new(indices)
}
