//! Attachment scores and per-relation metrics.
//!
//! Every token counts with equal weight, punctuation included, unless the
//! caller excludes POS tags explicitly. Relation labels are compared
//! case-insensitively.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::sentence::{Sentence, Token};

/// Metrics for one relation. `None` marks a rate whose denominator is zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DeprelMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub fscore: Option<f64>,
    /// Among tokens with this gold label: correct head and label.
    pub las: Option<f64>,
    /// Among tokens with this gold label: correct head.
    pub uas: Option<f64>,
    pub gold_count: usize,
    pub system_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub las: f64,
    pub uas: f64,
    pub la: f64,
    pub token_count: usize,
    pub per_deprel: BTreeMap<String, DeprelMetrics>,
}

#[derive(Clone, Debug, Default)]
pub struct EvalOptions {
    /// Gold POS tags whose tokens are left out of every count.
    pub exclude_postags: Vec<String>,
}

/// Harmonic mean of precision and recall; `None` if either is undefined or both are 0.
pub fn f_score(precision: Option<f64>, recall: Option<f64>) -> Option<f64> {
    let (p, r) = (precision?, recall?);
    (p + r > 0.0).then(|| 2.0 * p * r / (p + r))
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// One scored token pair.
struct Pair<'a> {
    gold_head: usize,
    gold_label: &'a str,
    system_head: usize,
    system_label: &'a str,
}

impl Pair<'_> {
    fn head_ok(&self) -> bool {
        self.gold_head == self.system_head
    }

    fn label_ok(&self) -> bool {
        self.gold_label.to_lowercase() == self.system_label.to_lowercase()
    }
}

/// Check that two treebanks cover the same tokens.
pub(crate) fn check_alignment(a: &[Sentence], b: &[Sentence]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Misaligned(format!(
            "{} sentences vs {} sentences",
            a.len(),
            b.len()
        )));
    }
    for (i, (sa, sb)) in a.iter().zip(b).enumerate() {
        if sa.len() != sb.len() {
            return Err(Error::Misaligned(format!(
                "sentence {}: {} tokens vs {} tokens",
                i + 1,
                sa.len(),
                sb.len()
            )));
        }
        for (j, (ta, tb)) in sa.tokens.iter().zip(&sb.tokens).enumerate() {
            if ta.form != tb.form {
                return Err(Error::Misaligned(format!(
                    "sentence {} token {}: form '{}' vs '{}'",
                    i + 1,
                    j + 1,
                    ta.form,
                    tb.form
                )));
            }
        }
    }
    Ok(())
}

fn annotation<'a>(side: &str, sentence: usize, token: &'a Token) -> Result<(usize, &'a str)> {
    match (token.head, token.deprel.as_deref()) {
        (Some(h), Some(l)) => Ok((h, l)),
        _ => Err(Error::Unannotated(format!(
            "{} sentence {} token {} lacks HEAD or DEPREL",
            side, sentence, token.id
        ))),
    }
}

fn pairs<'a>(
    gold: &'a [Sentence],
    system: &'a [Sentence],
    opts: &EvalOptions,
) -> Result<Vec<Pair<'a>>> {
    check_alignment(gold, system)?;
    let mut out = Vec::new();
    for (i, (g, s)) in gold.iter().zip(system).enumerate() {
        for (tg, ts) in g.tokens.iter().zip(&s.tokens) {
            if opts.exclude_postags.contains(&tg.postag) {
                continue;
            }
            let (gold_head, gold_label) = annotation("gold", i + 1, tg)?;
            let (system_head, system_label) = annotation("system", i + 1, ts)?;
            out.push(Pair {
                gold_head,
                gold_label,
                system_head,
                system_label,
            });
        }
    }
    Ok(out)
}

/// Display spelling per case-folded label: first occurrence, gold side first.
fn label_names(pairs: &[Pair<'_>]) -> HashMap<String, String> {
    let mut names = HashMap::new();
    for label in pairs
        .iter()
        .map(|p| p.gold_label)
        .chain(pairs.iter().map(|p| p.system_label))
    {
        names
            .entry(label.to_lowercase())
            .or_insert_with(|| label.to_owned());
    }
    names
}

#[derive(Default)]
struct Tally {
    gold: usize,
    system: usize,
    label_match: usize,
    head_match: usize,
    both_match: usize,
}

fn per_deprel(pairs: &[Pair<'_>], include_system_only: bool) -> BTreeMap<String, DeprelMetrics> {
    let names = label_names(pairs);
    let mut tallies: HashMap<&str, Tally> = HashMap::new();
    for p in pairs {
        let g = tallies
            .entry(&names[&p.gold_label.to_lowercase()])
            .or_default();
        g.gold += 1;
        if p.label_ok() {
            g.label_match += 1;
        }
        if p.head_ok() {
            g.head_match += 1;
            if p.label_ok() {
                g.both_match += 1;
            }
        }
    }
    for p in pairs {
        let key = names[&p.system_label.to_lowercase()].as_str();
        if include_system_only {
            tallies.entry(key).or_default().system += 1;
        } else if let Some(t) = tallies.get_mut(key) {
            t.system += 1;
        }
    }

    tallies
        .into_iter()
        .map(|(label, t)| {
            let precision = ratio(t.label_match, t.system);
            let recall = ratio(t.label_match, t.gold);
            let metrics = DeprelMetrics {
                precision,
                recall,
                fscore: f_score(precision, recall),
                las: ratio(t.both_match, t.gold),
                uas: ratio(t.head_match, t.gold),
                gold_count: t.gold,
                system_count: t.system,
            };
            (label.to_owned(), metrics)
        })
        .collect()
}

/// LAS, UAS and LA over all tokens, with per-relation metrics.
pub fn attachment_scores(gold: &[Sentence], system: &[Sentence]) -> Result<EvalReport> {
    evaluate(gold, system, &EvalOptions::default())
}

pub fn evaluate(gold: &[Sentence], system: &[Sentence], opts: &EvalOptions) -> Result<EvalReport> {
    let pairs = pairs(gold, system, opts)?;
    let total = pairs.len();
    if total == 0 {
        return Err(Error::InvalidArgument("no tokens to evaluate".into()));
    }
    let heads = pairs.iter().filter(|p| p.head_ok()).count();
    let labels = pairs.iter().filter(|p| p.label_ok()).count();
    let both = pairs.iter().filter(|p| p.head_ok() && p.label_ok()).count();
    Ok(EvalReport {
        las: both as f64 / total as f64,
        uas: heads as f64 / total as f64,
        la: labels as f64 / total as f64,
        token_count: total,
        per_deprel: per_deprel(&pairs, true),
    })
}

/// Precision, recall and F per relation, over every label in gold or system.
pub fn prf_by_deprel(
    gold: &[Sentence],
    system: &[Sentence],
) -> Result<BTreeMap<String, DeprelMetrics>> {
    let pairs = pairs(gold, system, &EvalOptions::default())?;
    Ok(per_deprel(&pairs, true))
}

/// LAS and UAS grouped by gold relation.
pub fn attachment_by_deprel(
    gold: &[Sentence],
    system: &[Sentence],
) -> Result<BTreeMap<String, DeprelMetrics>> {
    let pairs = pairs(gold, system, &EvalOptions::default())?;
    Ok(per_deprel(&pairs, false))
}
