//! Transition-based dependency parsing for CoNLL treebanks.
//!
//! The crate covers the whole train-then-parse loop: reading and validating
//! treebanks, deriving gold transition sequences with static oracles,
//! extracting sparse features from declarative templates, training an
//! averaged perceptron, greedy parsing, and evaluation (attachment scores,
//! per-relation metrics and Cohen's kappa).

pub mod conll;
pub mod error;
pub mod eval;
pub mod features;
pub mod kappa;
pub mod parser;
pub mod perceptron;
pub mod sentence;
pub mod synthetic;
pub mod tagset;
pub mod transition;
pub mod validate;

pub use crate::conll::{read_conll, read_conll_str, write_conll, write_conll_string, ConllDialect};
pub use crate::error::{Error, Result};
pub use crate::eval::{attachment_scores, evaluate, EvalOptions, EvalReport};
pub use crate::kappa::{cohen_kappa, kappa_band, Band, KappaOn, KappaResult};
pub use crate::parser::{load_model, parse_sentence, save_model, train_parser, ParserModel};
pub use crate::sentence::{Features, Sentence, Token};
pub use crate::tagset::Tagset;
pub use crate::transition::{
    Algorithm, Configuration, Transition, TransitionKind, TransitionSystem,
};
pub use crate::validate::{is_projective, validate_sentence, ValidationReport};
