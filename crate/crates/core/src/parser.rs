//! Training and greedy parsing, plus the text model format.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::features::{
    extract, extract_frozen, parse_feature_spec, render_feature_spec, FeatureTemplate,
    FeatureVocabulary,
};
use crate::perceptron::{predict_legal, train_with_history, LinearModel, TrainOptions};
use crate::sentence::Sentence;
use crate::tagset::Tagset;
use crate::transition::{extract_tree, oracle_walk, Algorithm, Transition, TransitionKind};
use crate::validate::{validate_sentence, ValidationReport};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "depparse-model";

/// Bijection between classifier classes and transitions.
///
/// The canonical order lists the system's kinds in declaration order, and
/// each arc kind once per relation in tagset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionClasses {
    transitions: Vec<Transition>,
    index: HashMap<Transition, usize>,
}

impl TransitionClasses {
    pub fn for_system(algorithm: Algorithm, tagset: &Tagset) -> Self {
        let mut transitions = Vec::new();
        for &kind in algorithm.system().kinds() {
            if kind.is_arc() {
                for label in tagset.deprels() {
                    transitions.push(Transition {
                        kind,
                        label: Some(label.clone()),
                    });
                }
            } else {
                transitions.push(Transition { kind, label: None });
            }
        }
        TransitionClasses::from_transitions(transitions).expect("canonical classes are distinct")
    }

    pub fn from_transitions(transitions: Vec<Transition>) -> Result<Self> {
        let mut index = HashMap::with_capacity(transitions.len());
        for (i, t) in transitions.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "transition {} listed twice",
                    t
                )));
            }
        }
        Ok(TransitionClasses { transitions, index })
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn class_of(&self, t: &Transition) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn transition(&self, class: usize) -> &Transition {
        &self.transitions[class]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Classes whose kind is in `kinds`, ascending.
    pub fn classes_for(&self, kinds: &[TransitionKind]) -> Vec<usize> {
        (0..self.transitions.len())
            .filter(|&c| kinds.contains(&self.transitions[c].kind))
            .collect()
    }
}

/// A trained parser.
#[derive(Clone, Debug, PartialEq)]
pub struct ParserModel {
    pub algorithm: Algorithm,
    pub tagset: Tagset,
    pub templates: Vec<FeatureTemplate>,
    pub vocabulary: FeatureVocabulary,
    pub classifier: LinearModel,
    pub classes: TransitionClasses,
    pub fallback_label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrainReport {
    pub sentences_used: usize,
    pub sentences_skipped: usize,
    pub instances: usize,
    pub mistakes_per_epoch: Vec<usize>,
}

fn first_problem(report: &ValidationReport) -> String {
    report
        .issues
        .first()
        .map(|i| format!("token {}: {}: {}", i.token, i.kind, i.message))
        .unwrap_or_default()
}

/// Copy of `s` with relations in the tagset's canonical spelling.
fn canonicalize(s: &Sentence, tagset: &Tagset) -> Sentence {
    let mut out = s.clone();
    for token in &mut out.tokens {
        if let Some(label) = &token.deprel {
            if let Some(canonical) = tagset.canonical_deprel(label) {
                token.deprel = Some(canonical.to_owned());
            }
        }
    }
    out
}

/// Train a parser on an annotated treebank.
///
/// Projective-only systems skip non-projective sentences and count them in
/// the report.
pub fn train_parser(
    treebank: &[Sentence],
    algorithm: Algorithm,
    templates: &[FeatureTemplate],
    tagset: &Tagset,
    opts: &TrainOptions,
) -> Result<(ParserModel, TrainReport)> {
    let system = algorithm.system();
    let classes = TransitionClasses::for_system(algorithm, tagset);
    let mut vocabulary = FeatureVocabulary::new();
    let mut instances = Vec::new();
    let mut report = TrainReport::default();

    for (i, sentence) in treebank.iter().enumerate() {
        let validation = validate_sentence(sentence, tagset, true);
        if !validation.ok() {
            return Err(Error::InvalidSentence(format!(
                "training sentence {}: {}",
                i + 1,
                first_problem(&validation)
            )));
        }
        let gold = canonicalize(sentence, tagset);
        let walk = oracle_walk(&gold, system, |c, t| {
            let v = extract(c, &gold, templates, &mut vocabulary);
            let class = classes
                .class_of(t)
                .expect("oracle labels come from the tagset");
            instances.push((v, class));
        });
        match walk {
            Ok(_) => report.sentences_used += 1,
            Err(Error::NonProjective) => report.sentences_skipped += 1,
            Err(e) => return Err(e),
        }
    }

    if report.sentences_used == 0 {
        return Err(Error::Training(format!(
            "no trainable sentences ({} skipped as non-projective for {})",
            report.sentences_skipped,
            algorithm.name()
        )));
    }

    vocabulary.freeze();
    report.instances = instances.len();
    let (classifier, history) = if instances.is_empty() {
        // Only empty sentences: nothing to learn, but the model is still usable.
        (
            LinearModel::zeros(vocabulary.len(), classes.len()),
            vec![0; opts.epochs],
        )
    } else {
        train_with_history(&instances, classes.len(), vocabulary.len(), opts)?
    };
    report.mistakes_per_epoch = history;

    let model = ParserModel {
        algorithm,
        tagset: tagset.clone(),
        templates: templates.to_vec(),
        vocabulary,
        classifier,
        classes,
        fallback_label: tagset.root_label().to_owned(),
    };
    Ok((model, report))
}

/// Greedily parse `s`, filling HEAD and DEPREL; other columns pass through.
pub fn parse_sentence(m: &ParserModel, s: &Sentence) -> Sentence {
    let system = m.algorithm.system();
    let mut c = system.initial(s);
    while !system.is_terminal(&c) {
        let legal = m.classes.classes_for(&system.legal(&c));
        let v = extract_frozen(&c, s, &m.templates, &m.vocabulary);
        let class = predict_legal(&m.classifier, &v, &legal)
            .expect("every legal kind has at least one class");
        system
            .apply_mut(&mut c, m.classes.transition(class))
            .expect("predicted transitions are legal");
    }

    let (heads, labels) = extract_tree(&c, s.len(), &m.fallback_label);
    let mut out = s.clone();
    for ((token, head), label) in out.tokens.iter_mut().zip(heads).zip(labels) {
        token.head = Some(head);
        token.deprel = Some(label);
    }
    out
}

/// Write the model in its line-oriented text format.
pub fn save_model<W: Write>(m: &ParserModel, mut w: W) -> Result<()> {
    writeln!(w, "{}\t{}", MAGIC, FORMAT_VERSION)?;
    writeln!(w, "system\t{}", m.algorithm.name())?;
    writeln!(w, "fallback\t{}", m.fallback_label)?;
    writeln!(w, "[tagset]")?;
    w.write_all(m.tagset.render().as_bytes())?;
    writeln!(w, "[features]")?;
    w.write_all(render_feature_spec(&m.templates).as_bytes())?;
    writeln!(w, "[classes]")?;
    for (i, t) in m.classes.transitions().iter().enumerate() {
        writeln!(w, "{}\t{}", i, t)?;
    }
    writeln!(w, "[vocabulary]")?;
    for (i, (ordinal, value)) in m.vocabulary.entries().iter().enumerate() {
        writeln!(w, "{}\t{}\t{}", ordinal, value, i)?;
    }
    writeln!(w, "[weights]")?;
    for (feature, class, value) in m.classifier.nonzero() {
        writeln!(w, "{}\t{}\t{}", feature, class, value)?;
    }
    writeln!(w, "[end]")?;
    Ok(())
}

pub fn model_to_string(m: &ParserModel) -> String {
    let mut buf = Vec::new();
    save_model(m, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("model text is UTF-8")
}

const SECTIONS: [&str; 6] = [
    "tagset",
    "features",
    "classes",
    "vocabulary",
    "weights",
    "end",
];

/// Read a model written by [`save_model`].
pub fn load_model<R: BufRead>(r: R) -> Result<ParserModel> {
    let mut lines = Vec::new();
    for line in r.lines() {
        lines.push(line?);
    }
    let mut lines = lines.iter().map(|l| l.trim_end_matches('\r'));

    let mut header_field = |key: &str| -> Result<String> {
        let line = lines
            .next()
            .ok_or_else(|| Error::model("header", "file is truncated"))?;
        match line.split_once('\t') {
            Some((k, v)) if k == key => Ok(v.to_owned()),
            _ => Err(Error::model(
                "header",
                format!("expected '{}' line, found '{}'", key, line),
            )),
        }
    };
    let version = header_field(MAGIC)?;
    if version != FORMAT_VERSION.to_string() {
        return Err(Error::model(
            "header",
            format!(
                "version mismatch: file has {}, expected {}",
                version, FORMAT_VERSION
            ),
        ));
    }
    let algorithm: Algorithm = header_field("system")?.parse()?;
    let fallback_label = header_field("fallback")?;

    // Split the rest into the expected sections, in order.
    let mut bodies: Vec<Vec<&str>> = Vec::new();
    let mut current: Option<usize> = None;
    for line in lines {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let expected = bodies.len();
            if expected >= SECTIONS.len() || SECTIONS[expected] != name {
                let wanted = SECTIONS.get(expected).copied().unwrap_or("end of file");
                return Err(Error::model(
                    name,
                    format!("unexpected section, wanted [{}]", wanted),
                ));
            }
            bodies.push(Vec::new());
            current = Some(expected);
            continue;
        }
        match current {
            Some(i) if SECTIONS[i] == "end" => {
                if !line.trim().is_empty() {
                    return Err(Error::model("end", "content after [end]"));
                }
            }
            Some(i) => bodies[i].push(line),
            None => {
                return Err(Error::model(
                    "header",
                    format!("unexpected line '{}'", line),
                ))
            }
        }
    }
    if bodies.len() < SECTIONS.len() {
        let section = bodies
            .len()
            .checked_sub(1)
            .map(|i| SECTIONS[i])
            .unwrap_or("header");
        return Err(Error::model(section, "file is truncated"));
    }

    let tagset =
        Tagset::parse(&bodies[0].join("\n")).map_err(|e| Error::model("tagset", e.to_string()))?;
    if tagset.canonical_deprel(&fallback_label) != Some(fallback_label.as_str()) {
        return Err(Error::model(
            "header",
            format!("fallback label '{}' is not in the tagset", fallback_label),
        ));
    }

    let templates = parse_feature_spec(&bodies[1].join("\n"))
        .map_err(|e| Error::model("features", e.to_string()))?;

    let classes = parse_classes(&bodies[2], algorithm, &tagset)?;
    let vocabulary = parse_vocabulary(&bodies[3], templates.len())?;
    let classifier = parse_weights(&bodies[4], vocabulary.len(), classes.len())?;

    Ok(ParserModel {
        algorithm,
        tagset,
        templates,
        vocabulary,
        classifier,
        classes,
        fallback_label,
    })
}

fn numbered_fields<'a>(section: &str, line: &'a str, count: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != count {
        return Err(Error::model(
            section,
            format!("expected {} tab-separated fields in '{}'", count, line),
        ));
    }
    Ok(fields)
}

fn parse_index(section: &str, text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| Error::model(section, format!("invalid index '{}'", text)))
}

fn parse_classes(
    body: &[&str],
    algorithm: Algorithm,
    tagset: &Tagset,
) -> Result<TransitionClasses> {
    let system = algorithm.system();
    let mut transitions = Vec::new();
    for line in body.iter().filter(|l| !l.is_empty()) {
        let fields = numbered_fields("classes", line, 2)?;
        if parse_index("classes", fields[0])? != transitions.len() {
            return Err(Error::model(
                "classes",
                format!("class '{}' out of order", line),
            ));
        }
        let t: Transition = fields[1]
            .parse()
            .map_err(|e: Error| Error::model("classes", e.to_string()))?;
        if !system.kinds().contains(&t.kind) {
            return Err(Error::model(
                "classes",
                format!("{} is not a {} transition", t, system.name()),
            ));
        }
        if let Some(label) = &t.label {
            if tagset.canonical_deprel(label) != Some(label.as_str()) {
                return Err(Error::model(
                    "classes",
                    format!("label '{}' is not in the tagset", label),
                ));
            }
        }
        transitions.push(t);
    }
    for kind in system.kinds() {
        if !transitions.iter().any(|t| t.kind == *kind) {
            return Err(Error::model("classes", format!("no class for {}", kind)));
        }
    }
    TransitionClasses::from_transitions(transitions)
        .map_err(|e| Error::model("classes", e.to_string()))
}

fn parse_vocabulary(body: &[&str], template_count: usize) -> Result<FeatureVocabulary> {
    let mut entries = Vec::with_capacity(body.len());
    for line in body {
        let fields = numbered_fields("vocabulary", line, 3)?;
        let ordinal = parse_index("vocabulary", fields[0])?;
        if ordinal >= template_count {
            return Err(Error::model(
                "vocabulary",
                format!("template {} does not exist", ordinal),
            ));
        }
        if parse_index("vocabulary", fields[2])? != entries.len() {
            return Err(Error::model(
                "vocabulary",
                format!("entry '{}' out of order", line),
            ));
        }
        entries.push((ordinal, fields[1].to_owned()));
    }
    FeatureVocabulary::from_entries(entries, true)
        .map_err(|e| Error::model("vocabulary", e.to_string()))
}

fn parse_weights(body: &[&str], feature_count: usize, class_count: usize) -> Result<LinearModel> {
    let mut model = LinearModel::zeros(feature_count, class_count);
    for line in body.iter().filter(|l| !l.is_empty()) {
        let fields = numbered_fields("weights", line, 3)?;
        let feature = parse_index("weights", fields[0])?;
        let class = parse_index("weights", fields[1])?;
        let value: f64 = fields[2]
            .parse()
            .map_err(|_| Error::model("weights", format!("invalid weight '{}'", fields[2])))?;
        model
            .set_weight(feature, class, value)
            .map_err(|e| Error::model("weights", e.to_string()))?;
    }
    Ok(model)
}
