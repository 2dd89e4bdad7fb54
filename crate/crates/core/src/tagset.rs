//! Label vocabularies for dependency relations and POS tags.
//!
//! Lookups are case-insensitive; the canonical casing of the tagset is
//! what gets written back out.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

const DEFAULT_DEPRELS: [&str; 22] = [
    "Root", "Subj", "Dobj", "Iobj", "Nmod", "Vmod", "Nummod", "Adjmod", "Advmod", "Poss", "Aaux",
    "Taux", "Conj", "Cc", "Tp", "P", "Loc", "Q", "R", "NEG", "Vcomp", "Comp",
];

const DEFAULT_ALIASES: [(&str, &str); 3] = [("Reason", "R"), ("Poss.", "Poss"), ("lobj", "Iobj")];

/// Result of resolving a label against a vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup<'a> {
    Canonical(&'a str),
    /// The label was accepted through an alias of the canonical one.
    Alias(&'a str),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tagset {
    deprels: Vec<String>,
    root_label: String,
    aliases: Vec<(String, String)>,
    postags: Option<Vec<String>>,
    deprel_index: HashMap<String, usize>,
    alias_index: HashMap<String, usize>,
    postag_index: HashMap<String, usize>,
}

impl Tagset {
    pub fn new(
        deprels: Vec<String>,
        root_label: &str,
        mut aliases: Vec<(String, String)>,
        postags: Option<Vec<String>>,
    ) -> Result<Self> {
        let invalid = |message: String| Error::Tagset { line: 0, message };

        if deprels.is_empty() {
            return Err(invalid("empty dependency relation set".into()));
        }

        let mut deprel_index = HashMap::new();
        for (i, label) in deprels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(invalid(format!("invalid label '{}'", label)));
            }
            if deprel_index.insert(label.to_lowercase(), i).is_some() {
                return Err(invalid(format!("duplicate label '{}'", label)));
            }
        }

        let root = deprel_index
            .get(&root_label.to_lowercase())
            .copied()
            .ok_or_else(|| invalid(format!("root label '{}' is not a relation", root_label)))?;

        let mut alias_index = HashMap::new();
        for (alias, canonical) in &aliases {
            let target = deprel_index
                .get(&canonical.to_lowercase())
                .copied()
                .ok_or_else(|| {
                    invalid(format!("alias '{}' targets unknown '{}'", alias, canonical))
                })?;
            let key = alias.to_lowercase();
            if deprel_index.contains_key(&key) || alias_index.insert(key, target).is_some() {
                return Err(invalid(format!("alias '{}' is ambiguous", alias)));
            }
        }

        // Grouped by relation so rendering and parsing agree on order.
        aliases.sort_by_key(|(alias, _)| alias_index[&alias.to_lowercase()]);

        let mut postag_index = HashMap::new();
        if let Some(tags) = &postags {
            if tags.is_empty() {
                return Err(invalid("empty POS tag set".into()));
            }
            for (i, tag) in tags.iter().enumerate() {
                if postag_index.insert(tag.to_lowercase(), i).is_some() {
                    return Err(invalid(format!("duplicate POS tag '{}'", tag)));
                }
            }
        }

        let root_label = deprels[root].clone();
        Ok(Tagset {
            deprels,
            root_label,
            aliases,
            postags,
            deprel_index,
            alias_index,
            postag_index,
        })
    }

    /// The 22-relation Urdu tagset, rooted at `Root`, with no POS restriction.
    pub fn urdu() -> Self {
        Tagset::new(
            DEFAULT_DEPRELS.iter().map(|s| s.to_string()).collect(),
            "Root",
            DEFAULT_ALIASES
                .iter()
                .map(|(a, c)| (a.to_string(), c.to_string()))
                .collect(),
            None,
        )
        .expect("built-in tagset is valid")
    }

    pub fn deprels(&self) -> &[String] {
        &self.deprels
    }

    pub fn root_label(&self) -> &str {
        &self.root_label
    }

    pub fn aliases(&self) -> &[(String, String)] {
        &self.aliases
    }

    pub fn postags(&self) -> Option<&[String]> {
        self.postags.as_deref()
    }

    /// Position of a relation in tagset order, accepting aliases.
    pub fn deprel_position(&self, label: &str) -> Option<usize> {
        let key = label.to_lowercase();
        self.deprel_index
            .get(&key)
            .or_else(|| self.alias_index.get(&key))
            .copied()
    }

    pub fn lookup_deprel(&self, label: &str) -> Lookup<'_> {
        let key = label.to_lowercase();
        if let Some(&i) = self.deprel_index.get(&key) {
            Lookup::Canonical(&self.deprels[i])
        } else if let Some(&i) = self.alias_index.get(&key) {
            Lookup::Alias(&self.deprels[i])
        } else {
            Lookup::Unknown
        }
    }

    /// Canonical spelling of a relation, if it is known.
    pub fn canonical_deprel(&self, label: &str) -> Option<&str> {
        self.deprel_position(label)
            .map(|i| self.deprels[i].as_str())
    }

    /// Whether a POS tag is admissible; always true without a POS set.
    pub fn accepts_postag(&self, tag: &str) -> bool {
        self.postags.is_none() || self.postag_index.contains_key(&tag.to_lowercase())
    }

    /// Parse the line-oriented tagset format:
    ///
    /// ```text
    /// # comment
    /// deprel Root
    /// deprel R Reason      # further fields are aliases
    /// postag NN
    /// root Root            # optional, defaults to the first relation
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut deprels = Vec::new();
        let mut aliases = Vec::new();
        let mut postags: Option<Vec<String>> = None;
        let mut root = None;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let directive = fields.next().unwrap_or_default();
            let rest: Vec<&str> = fields.collect();
            let err = |message: String| Error::Tagset {
                line: line_no,
                message,
            };
            match directive.to_lowercase().as_str() {
                "deprel" => {
                    let (label, alias_list) = rest
                        .split_first()
                        .ok_or_else(|| err("deprel needs a label".into()))?;
                    deprels.push(label.to_string());
                    for alias in alias_list {
                        aliases.push((alias.to_string(), label.to_string()));
                    }
                }
                "postag" => match rest.as_slice() {
                    [tag] => postags.get_or_insert_with(Vec::new).push(tag.to_string()),
                    _ => return Err(err("postag needs exactly one tag".into())),
                },
                "root" => match rest.as_slice() {
                    [label] => root = Some(label.to_string()),
                    _ => return Err(err("root needs exactly one label".into())),
                },
                other => return Err(err(format!("unknown directive '{}'", other))),
            }
        }

        let root = match root {
            Some(r) => r,
            None => deprels.first().cloned().ok_or_else(|| Error::Tagset {
                line: 0,
                message: "no deprel lines".into(),
            })?,
        };
        Tagset::new(deprels, &root, aliases, postags)
    }

    /// Inverse of [`Tagset::parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "root {}", self.root_label).unwrap();
        for label in &self.deprels {
            out.push_str("deprel ");
            out.push_str(label);
            for (alias, canonical) in &self.aliases {
                if canonical == label {
                    out.push(' ');
                    out.push_str(alias);
                }
            }
            out.push('\n');
        }
        for tag in self.postags.iter().flatten() {
            writeln!(out, "postag {}", tag).unwrap();
        }
        out
    }
}

impl Default for Tagset {
    fn default() -> Self {
        Tagset::urdu()
    }
}
