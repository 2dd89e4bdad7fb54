//! Tab-separated CoNLL reading and writing.
//!
//! Columns are ID, FORM, LEMMA, CPOSTAG, POSTAG, FEATS, HEAD, DEPREL, and
//! optionally two trailing placeholder columns which are read and ignored.
//! `_` marks an absent LEMMA, FEATS, HEAD or DEPREL; `-` is also accepted as
//! an absent LEMMA.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sentence::{Features, Sentence, Token};

const ABSENT: &str = "_";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConllDialect {
    columns: usize,
    pub comment_prefix: String,
}

impl ConllDialect {
    pub fn new(columns: usize) -> Result<Self> {
        if columns != 8 && columns != 10 {
            return Err(Error::InvalidArgument(format!(
                "CoNLL dialect must have 8 or 10 columns, not {}",
                columns
            )));
        }
        Ok(ConllDialect {
            columns,
            comment_prefix: "#".to_owned(),
        })
    }

    pub fn eight() -> Self {
        ConllDialect::new(8).unwrap()
    }

    pub fn ten() -> Self {
        ConllDialect::new(10).unwrap()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Guess the dialect from the first token line; defaults to ten columns.
    pub fn sniff(text: &str) -> Self {
        let mut dialect = ConllDialect::ten();
        for line in text.trim_start_matches('\u{feff}').lines() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with(&dialect.comment_prefix) {
                continue;
            }
            if line.split('\t').count() == 8 {
                dialect = ConllDialect::eight();
            }
            break;
        }
        dialect
    }
}

impl Default for ConllDialect {
    fn default() -> Self {
        ConllDialect::ten()
    }
}

/// Read every sentence from `reader`.
pub fn read_conll<R: BufRead>(reader: R, dialect: &ConllDialect) -> Result<Vec<Sentence>> {
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut first_line = 0;
    let mut last_line = 0;

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let mut line = line?;
        if line_no == 1 && line.starts_with('\u{feff}') {
            line.drain(..'\u{feff}'.len_utf8());
        }
        let line = line.trim_end_matches('\r');

        if line.trim().is_empty() {
            if !tokens.is_empty() {
                sentences.push(finish(&mut tokens, first_line, last_line));
            }
            continue;
        }
        if line.starts_with(&dialect.comment_prefix) {
            continue;
        }
        if tokens.is_empty() {
            first_line = line_no;
        }
        last_line = line_no;
        tokens.push(parse_line(line, line_no, dialect)?);
    }
    if !tokens.is_empty() {
        sentences.push(finish(&mut tokens, first_line, last_line));
    }
    Ok(sentences)
}

pub fn read_conll_str(text: &str, dialect: &ConllDialect) -> Result<Vec<Sentence>> {
    read_conll(text.as_bytes(), dialect)
}

fn finish(tokens: &mut Vec<Token>, first: usize, last: usize) -> Sentence {
    Sentence {
        tokens: std::mem::take(tokens),
        metadata: Some(format!("lines {}-{}", first, last)),
    }
}

fn parse_line(line: &str, line_no: usize, dialect: &ConllDialect) -> Result<Token> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != dialect.columns {
        return Err(Error::ColumnCount {
            expected: dialect.columns,
            got: fields.len(),
            line: line_no,
        });
    }
    let bad = |field: &'static str, value: &str| Error::Field {
        field,
        value: value.to_owned(),
        line: line_no,
    };

    let id = fields[0]
        .parse::<usize>()
        .ok()
        .filter(|&id| id >= 1)
        .ok_or_else(|| bad("ID", fields[0]))?;
    if fields[1].is_empty() {
        return Err(bad("FORM", fields[1]));
    }
    let lemma = match fields[2] {
        "_" | "-" | "" => None,
        lemma => Some(lemma.to_owned()),
    };
    let feats = parse_feats(fields[5]).map_err(|e| Error::Field {
        field: "FEATS",
        value: format!("{} ({})", fields[5], e),
        line: line_no,
    })?;
    let head = match fields[6] {
        ABSENT => None,
        h => Some(h.parse::<usize>().map_err(|_| bad("HEAD", h))?),
    };
    let deprel = match fields[7] {
        ABSENT | "" => None,
        d => Some(d.to_owned()),
    };

    Ok(Token {
        id,
        form: fields[1].to_owned(),
        lemma,
        cpostag: fields[3].to_owned(),
        postag: fields[4].to_owned(),
        feats,
        head,
        deprel,
    })
}

/// Parse a FEATS cell: `_` or `attr=val|attr=val`, split on the first `=`.
pub fn parse_feats(text: &str) -> Result<Features> {
    let mut feats = Features::new();
    if text == ABSENT {
        return Ok(feats);
    }
    for item in text.split('|') {
        let (attribute, value) = item.split_once('=').ok_or_else(|| Error::Feats {
            message: format!("feature '{}' has no '='", item),
        })?;
        if attribute.is_empty() {
            return Err(Error::Feats {
                message: format!("feature '{}' has an empty attribute", item),
            });
        }
        feats.insert(attribute, value)?;
    }
    Ok(feats)
}

pub fn format_feats(feats: &Features) -> String {
    if feats.is_empty() {
        return ABSENT.to_owned();
    }
    feats
        .iter()
        .map(|(a, v)| format!("{}={}", a, v))
        .collect::<Vec<_>>()
        .join("|")
}

/// Write sentences, each followed by one blank line.
pub fn write_conll<W: Write>(
    mut writer: W,
    sentences: &[Sentence],
    dialect: &ConllDialect,
) -> Result<()> {
    for sentence in sentences {
        for token in &sentence.tokens {
            let head = token.head.map(|h| h.to_string());
            write!(
                writer,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                token.id,
                token.form,
                token.lemma.as_deref().unwrap_or(ABSENT),
                token.cpostag,
                token.postag,
                format_feats(&token.feats),
                head.as_deref().unwrap_or(ABSENT),
                token.deprel.as_deref().unwrap_or(ABSENT),
            )?;
            if dialect.columns == 10 {
                writer.write_all(b"\t_\t_")?;
            }
            writer.write_all(b"\n")?;
        }
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_conll_string(sentences: &[Sentence], dialect: &ConllDialect) -> String {
    let mut buf = Vec::new();
    write_conll(&mut buf, sentences, dialect).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("sentences are UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GOLDEN: &str = include_str!("../tests/data/golden.conll");

    #[test]
    fn reads_golden_sentence() {
        let sentences = read_conll_str(GOLDEN, &ConllDialect::eight()).unwrap();
        assert_eq!(sentences.len(), 1);
        let s = &sentences[0];
        assert_eq!(s.len(), 17);
        let last = &s.tokens[16];
        assert_eq!(last.form, "سنا");
        assert_eq!(last.lemma.as_deref(), Some("sunae"));
        assert_eq!(last.head, Some(0));
        assert_eq!(last.deprel.as_deref(), Some("Root"));
        assert_eq!(s.tokens[0].lemma, None);
        assert_eq!(s.tokens[0].feats.get("Suf"), Some("0"));
        assert_eq!(s.metadata.as_deref(), Some("lines 1-17"));
    }

    #[test]
    fn comments_and_blank_lines_only() {
        let text = "# a comment\n\n\n# another\n";
        assert!(read_conll_str(text, &ConllDialect::ten())
            .unwrap()
            .is_empty());
        assert!(read_conll_str("", &ConllDialect::ten()).unwrap().is_empty());
    }

    #[test]
    fn wrong_column_count_names_the_line() {
        let text = "1\ta\t_\tNN\tNN\t_\t0\tRoot\n2\tb\t_\tNN\tNN\t_\t1\n";
        let err = read_conll_str(text, &ConllDialect::eight()).unwrap_err();
        assert_eq!(err.to_string(), "expected 8 columns, got 7, line 2");
    }

    #[test]
    fn non_integer_head_is_an_error() {
        let text = "1\ta\t_\tNN\tNN\t_\tx\tRoot\n";
        let err = read_conll_str(text, &ConllDialect::eight()).unwrap_err();
        assert_eq!(err.to_string(), "invalid HEAD 'x', line 1");
    }

    #[test]
    fn ten_column_trailing_fields_are_ignored() {
        let text = "\u{feff}1\ta\t_\tNN\tNN\t_\t0\tRoot\t0\tRoot\n";
        let s = read_conll_str(text, &ConllDialect::ten()).unwrap();
        assert_eq!(s[0].tokens[0].head, Some(0));
        assert_eq!(s[0].tokens[0].form, "a");
    }

    #[test]
    fn golden_roundtrip_normalizes_lemmas() {
        let dialect = ConllDialect::eight();
        let sentences = read_conll_str(GOLDEN, &dialect).unwrap();
        let written = write_conll_string(&sentences, &dialect);
        assert_eq!(written, GOLDEN.replace("\t-\t", "\t_\t"));
        assert_eq!(read_conll_str(&written, &dialect).unwrap(), sentences);
    }

    #[test]
    fn unannotated_heads_are_written_as_underscore() {
        let s = Sentence::new(vec![Token::new(1, "a", "NN")]);
        let out = write_conll_string(&[s], &ConllDialect::ten());
        assert_eq!(out, "1\ta\t_\tNN\tNN\t_\t_\t_\t_\t_\n\n");
        assert_eq!(write_conll_string(&[], &ConllDialect::ten()), "");
    }

    #[test]
    fn feats_parsing() {
        let f = parse_feats("G=M|N=S|Suf=0").unwrap();
        let pairs: Vec<_> = f.iter().collect();
        assert_eq!(pairs, vec![("G", "M"), ("N", "S"), ("Suf", "0")]);
        assert!(parse_feats("_").unwrap().is_empty());
        assert_eq!(
            parse_feats("G=M|G=F").unwrap_err().to_string(),
            "duplicate attribute G"
        );
        assert!(parse_feats("G").unwrap_err().to_string().contains("'G'"));
        assert_eq!(parse_feats("a=b=c").unwrap().get("a"), Some("b=c"));
    }

    #[test]
    fn sniffing() {
        assert_eq!(ConllDialect::sniff(GOLDEN).columns(), 8);
        assert_eq!(
            ConllDialect::sniff("# x\n1\ta\t_\tN\tN\t_\t0\tR\t_\t_\n").columns(),
            10
        );
        assert!(ConllDialect::new(9).is_err());
    }

    proptest! {
        #[test]
        fn feats_format_parse_inverse(
            pairs in proptest::collection::btree_map("[A-Za-z][A-Za-z0-9]{0,5}", "[A-Za-z0-9_.-]{0,6}", 1..6)
        ) {
            let mut feats = Features::new();
            for (a, v) in &pairs {
                feats.insert(a.clone(), v.clone()).unwrap();
            }
            let text = format_feats(&feats);
            prop_assert_eq!(parse_feats(&text).unwrap(), feats);
        }
    }
}
