use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("expected {expected} columns, got {got}, line {line}")]
    ColumnCount {
        expected: usize,
        got: usize,
        line: usize,
    },

    #[error("invalid {field} '{value}', line {line}")]
    Field {
        field: &'static str,
        value: String,
        line: usize,
    },

    #[error("{message}")]
    Feats { message: String },

    #[error("feature spec line {line}: {message}")]
    FeatureSpec { line: usize, message: String },

    #[error("tagset line {line}: {message}")]
    Tagset { line: usize, message: String },

    #[error("illegal transition {transition}: {reason}")]
    IllegalTransition { transition: String, reason: String },

    #[error("non-projective sentence")]
    NonProjective,

    #[error("sentence is not fully annotated: {0}")]
    Unannotated(String),

    #[error("invalid sentence: {0}")]
    InvalidSentence(String),

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("unknown transition system '{0}'")]
    UnknownSystem(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model file, section {section}: {message}")]
    ModelFormat { section: String, message: String },

    #[error("misaligned inputs: {0}")]
    Misaligned(String),
}

impl Error {
    pub(crate) fn model(section: &str, message: impl Into<String>) -> Self {
        Error::ModelFormat {
            section: section.to_owned(),
            message: message.into(),
        }
    }
}
