//! Seeded generators for random dependency trees and toy treebanks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sentence::{Features, Sentence, Token};
use crate::tagset::Tagset;

const POSTAGS: [&str; 8] = ["NN", "VB", "P", "PN", "ADJ", "ADV", "CA", "CC"];

/// Random projective head vector for `n` tokens (1-based heads).
///
/// Every projective tree has non-zero probability: each region left or
/// right of a head is cut into consecutive segments, and each segment
/// contributes one dependent whose subtree spans it.
pub fn random_projective_heads<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut heads = vec![0; n];
    if n == 0 {
        return heads;
    }
    let root = rng.gen_range(1..=n);
    heads[root - 1] = 0;
    fill_region(rng, &mut heads, 1, root - 1, root);
    fill_region(rng, &mut heads, root + 1, n, root);
    heads
}

fn fill_region<R: Rng>(rng: &mut R, heads: &mut [usize], lo: usize, hi: usize, parent: usize) {
    let mut start = lo;
    while start <= hi {
        let end = rng.gen_range(start..=hi);
        let head = rng.gen_range(start..=end);
        heads[head - 1] = parent;
        fill_region(rng, heads, start, head - 1, head);
        fill_region(rng, heads, head + 1, end, head);
        start = end + 1;
    }
}

/// Random single-rooted tree, projective or not.
pub fn random_heads<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n];
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        heads[order[i] - 1] = parent;
    }
    heads
}

/// Sentence over forms `w1..wn` with the given heads; the root token gets the
/// tagset's root label and every other token a random non-root relation.
pub fn sentence_from_heads<R: Rng>(rng: &mut R, heads: &[usize], tagset: &Tagset) -> Sentence {
    let labels: Vec<&String> = tagset
        .deprels()
        .iter()
        .filter(|l| l.as_str() != tagset.root_label())
        .collect();
    let tokens = heads
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let label = if h == 0 || labels.is_empty() {
                tagset.root_label().to_owned()
            } else {
                labels[rng.gen_range(0..labels.len())].clone()
            };
            let postag = POSTAGS[rng.gen_range(0..POSTAGS.len())];
            Token::new(i + 1, format!("w{}", i + 1), postag).with_head(h, label)
        })
        .collect();
    Sentence::new(tokens)
}

#[derive(Clone, Debug)]
pub struct TreebankOptions {
    pub seed: u64,
    pub sentences: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub lexicon_size: usize,
    pub projective: bool,
}

impl Default for TreebankOptions {
    fn default() -> Self {
        TreebankOptions {
            seed: 1,
            sentences: 20,
            min_len: 3,
            max_len: 12,
            lexicon_size: 60,
            projective: true,
        }
    }
}

struct Entry {
    form: String,
    postag: &'static str,
    feats: Features,
    label: String,
}

/// A toy treebank over a fixed random lexicon. Each word has a fixed POS
/// tag, gender/number features, and the relation it takes when not the root.
pub fn synthetic_treebank(opts: &TreebankOptions, tagset: &Tagset) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let relations: Vec<&String> = tagset
        .deprels()
        .iter()
        .filter(|l| l.as_str() != tagset.root_label())
        .collect();
    let lexicon: Vec<Entry> = (0..opts.lexicon_size.max(1))
        .map(|i| {
            let mut feats = Features::new();
            feats
                .insert("G", if rng.gen_bool(0.5) { "M" } else { "F" })
                .unwrap();
            feats
                .insert("N", if rng.gen_bool(0.5) { "S" } else { "P" })
                .unwrap();
            let label = if relations.is_empty() {
                tagset.root_label().to_owned()
            } else {
                relations[rng.gen_range(0..relations.len())].clone()
            };
            Entry {
                form: format!("lex{}", i),
                postag: POSTAGS[rng.gen_range(0..POSTAGS.len())],
                feats,
                label,
            }
        })
        .collect();

    (0..opts.sentences)
        .map(|_| {
            let n = rng.gen_range(opts.min_len..=opts.max_len.max(opts.min_len));
            let heads = if opts.projective {
                random_projective_heads(&mut rng, n)
            } else {
                random_heads(&mut rng, n)
            };
            let tokens = heads
                .iter()
                .enumerate()
                .map(|(i, &h)| {
                    let entry = &lexicon[rng.gen_range(0..lexicon.len())];
                    let label = if h == 0 {
                        tagset.root_label().to_owned()
                    } else {
                        entry.label.clone()
                    };
                    let mut token =
                        Token::new(i + 1, entry.form.clone(), entry.postag).with_head(h, label);
                    token.feats = entry.feats.clone();
                    token
                })
                .collect();
            Sentence::new(tokens)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::{heads_are_projective, validate_sentence};

    #[test]
    fn generated_trees_are_valid() {
        let tagset = Tagset::urdu();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..12 {
            for _ in 0..20 {
                let p = random_projective_heads(&mut rng, n);
                assert!(heads_are_projective(&p));
                let s = sentence_from_heads(&mut rng, &p, &tagset);
                assert!(validate_sentence(&s, &tagset, true).ok());
                let a = random_heads(&mut rng, n);
                let s = sentence_from_heads(&mut rng, &a, &tagset);
                assert!(validate_sentence(&s, &tagset, true).ok());
            }
        }
    }

    #[test]
    fn all_three_token_projective_trees_appear() {
        // There are 7 projective single-rooted trees over 3 tokens.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            seen.insert(random_projective_heads(&mut rng, 3));
        }
        assert_eq!(seen.len(), 7);
    }

    #[test]
    fn treebank_is_seeded() {
        let tagset = Tagset::urdu();
        let opts = TreebankOptions::default();
        assert_eq!(
            synthetic_treebank(&opts, &tagset),
            synthetic_treebank(&opts, &tagset)
        );
        let other = TreebankOptions {
            seed: 2,
            ..opts.clone()
        };
        assert_ne!(
            synthetic_treebank(&opts, &tagset),
            synthetic_treebank(&other, &tagset)
        );
        for s in synthetic_treebank(&opts, &tagset) {
            assert!(validate_sentence(&s, &tagset, true).ok());
        }
    }
}
