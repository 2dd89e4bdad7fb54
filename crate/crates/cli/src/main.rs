use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use depparse::features::{default_feature_model, parse_feature_spec};
use depparse::perceptron::TrainOptions;
use depparse::transition::derive_sequence;
use depparse::validate::validate_treebank;
use depparse::{
    cohen_kappa, evaluate, load_model, parse_sentence, read_conll_str, save_model, train_parser,
    write_conll, Algorithm, ConllDialect, Error, EvalOptions, KappaOn, Sentence, Tagset,
};
use rayon::prelude::*;

mod report;

#[derive(Parser)]
#[command(
    name = "depparse",
    version,
    about = "Transition-based dependency parsing for CoNLL treebanks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a CoNLL file for structural and tagset problems.
    Validate {
        file: PathBuf,
        /// Tagset file (defaults to the built-in Urdu tagset).
        #[arg(long)]
        tagset: Option<PathBuf>,
        /// Require HEAD/DEPREL on every token and reject alias spellings.
        #[arg(long)]
        strict: bool,
    },
    /// Train a parser model on an annotated treebank.
    Train {
        #[arg(long = "train")]
        train: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
        /// Feature specification file, one template per line.
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tagset: Option<PathBuf>,
        #[arg(long)]
        model: PathBuf,
    },
    /// Fill HEAD and DEPREL using a trained model.
    Parse {
        #[arg(long)]
        model: PathBuf,
        /// Defaults to standard input.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score a system file against gold.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        system: PathBuf,
        /// Add the per-relation table.
        #[arg(long)]
        by_deprel: bool,
        /// Comma-separated gold POS tags to leave out.
        #[arg(long, value_delimiter = ',')]
        exclude_pos: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cohen's kappa between two annotations of the same text.
    Kappa {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "label")]
        on: KappaOn,
    },
    /// Print the gold transition sequence of every sentence.
    Oracle {
        #[arg(long = "train")]
        train: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum Format {
    Text,
    Tsv,
    Json,
}

/// Failures that map to exit status 1.
struct Failure(String);

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {}", path.display(), e)))
}

fn read_treebank_text(text: &str, origin: &str) -> Result<(Vec<Sentence>, ConllDialect), Failure> {
    let dialect = ConllDialect::sniff(text);
    let sentences =
        read_conll_str(text, &dialect).map_err(|e| Failure(format!("{}: {}", origin, e)))?;
    Ok((sentences, dialect))
}

fn read_treebank(path: &Path) -> Result<Vec<Sentence>, Failure> {
    read_treebank_text(&read_text(path)?, &path.display().to_string()).map(|(s, _)| s)
}

fn read_tagset(path: Option<&Path>) -> Result<Tagset, Failure> {
    match path {
        Some(p) => {
            Tagset::parse(&read_text(p)?).map_err(|e| Failure(format!("{}: {}", p.display(), e)))
        }
        None => Ok(Tagset::urdu()),
    }
}

fn validate(file: &Path, tagset: Option<&Path>, strict: bool, out: &mut impl Write) -> Outcome {
    let tagset = read_tagset(tagset)?;
    let sentences = read_treebank(file)?;
    let report = validate_treebank(&sentences, &tagset, strict);
    for issue in &report.issues {
        writeln!(
            out,
            "sentence {} token {}: {}: {}",
            issue.sentence + 1,
            issue.token,
            issue.kind,
            issue.message
        )?;
    }
    for notice in &report.notices {
        let prefix = if strict { "" } else { "note: " };
        writeln!(
            out,
            "{}sentence {} token {}: {}",
            prefix,
            notice.sentence + 1,
            notice.token,
            notice.message
        )?;
    }
    let tokens: usize = sentences.iter().map(Sentence::len).sum();
    let problems = report.issues.len() + if strict { report.notices.len() } else { 0 };
    if problems == 0 {
        writeln!(out, "ok: {} sentences, {} tokens", sentences.len(), tokens)?;
        Ok(())
    } else {
        out.flush()?;
        Err(Failure(format!(
            "{}: {} problem{} in {} sentences",
            file.display(),
            problems,
            if problems == 1 { "" } else { "s" },
            sentences.len()
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn train(
    train: &Path,
    algorithm: Algorithm,
    features: Option<&Path>,
    epochs: usize,
    seed: u64,
    tagset: Option<&Path>,
    model_path: &Path,
    out: &mut impl Write,
) -> Outcome {
    let tagset = read_tagset(tagset)?;
    let templates = match features {
        Some(p) => parse_feature_spec(&read_text(p)?)
            .map_err(|e| Failure(format!("{}: {}", p.display(), e)))?,
        None => default_feature_model(),
    };
    let treebank = read_treebank(train)?;
    let opts = TrainOptions {
        epochs,
        seed,
        ..TrainOptions::default()
    };
    let (model, report) = train_parser(&treebank, algorithm, &templates, &tagset, &opts)?;
    let file = fs::File::create(model_path)
        .map_err(|e| Failure(format!("{}: {}", model_path.display(), e)))?;
    let mut w = BufWriter::new(file);
    save_model(&model, &mut w)?;
    w.flush()?;

    writeln!(out, "algorithm {}", algorithm)?;
    writeln!(out, "sentences used {}", report.sentences_used)?;
    writeln!(out, "sentences skipped {}", report.sentences_skipped)?;
    writeln!(out, "instances {}", report.instances)?;
    writeln!(out, "features {}", model.vocabulary.len())?;
    if let Some(last) = report.mistakes_per_epoch.last() {
        writeln!(out, "final epoch mistakes {}", last)?;
    }
    Ok(())
}

fn parse(
    model_path: &Path,
    input: Option<&Path>,
    output: Option<&Path>,
    stdout: &mut impl Write,
) -> Outcome {
    let model_file = fs::File::open(model_path)
        .map_err(|e| Failure(format!("{}: {}", model_path.display(), e)))?;
    let model = load_model(io::BufReader::new(model_file))
        .map_err(|e| Failure(format!("{}: {}", model_path.display(), e)))?;
    let (text, origin) = match input {
        Some(p) => (read_text(p)?, p.display().to_string()),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            (text, "<stdin>".to_owned())
        }
    };
    let (sentences, dialect) = read_treebank_text(&text, &origin)?;
    let parsed: Vec<Sentence> = sentences
        .par_iter()
        .map(|s| parse_sentence(&model, s))
        .collect();
    match output {
        Some(p) => {
            let file =
                fs::File::create(p).map_err(|e| Failure(format!("{}: {}", p.display(), e)))?;
            let mut w = BufWriter::new(file);
            write_conll(&mut w, &parsed, &dialect)?;
            w.flush()?;
        }
        None => write_conll(&mut *stdout, &parsed, &dialect)?,
    }
    Ok(())
}

fn eval(
    gold: &Path,
    system: &Path,
    by_deprel: bool,
    exclude_pos: Vec<String>,
    format: Format,
    out: &mut impl Write,
) -> Outcome {
    let gold = read_treebank(gold)?;
    let system = read_treebank(system)?;
    let opts = EvalOptions {
        exclude_postags: exclude_pos.into_iter().filter(|p| !p.is_empty()).collect(),
    };
    let r = evaluate(&gold, &system, &opts)?;
    out.write_all(report::eval(&r, by_deprel, format).as_bytes())?;
    Ok(())
}

fn kappa(a: &Path, b: &Path, on: KappaOn, out: &mut impl Write) -> Outcome {
    let a = read_treebank(a)?;
    let b = read_treebank(b)?;
    let r = cohen_kappa(&a, &b, on)?;
    out.write_all(report::kappa(&r).as_bytes())?;
    Ok(())
}

fn oracle(train: &Path, algorithm: Algorithm, out: &mut impl Write) -> Outcome {
    let treebank = read_treebank(train)?;
    let system = algorithm.system();
    let mut derived = 0;
    for (i, s) in treebank.iter().enumerate() {
        match derive_sequence(s, system) {
            Ok(seq) => {
                derived += 1;
                let names: Vec<String> = seq.iter().map(ToString::to_string).collect();
                writeln!(out, "sentence {}: {}", i + 1, names.join(" "))?;
            }
            Err(Error::NonProjective) => {
                writeln!(out, "sentence {}: skipped, non-projective", i + 1)?
            }
            Err(e) => return Err(Failure(format!("sentence {}: {}", i + 1, e))),
        }
    }
    if derived == 0 && !treebank.is_empty() {
        return Err(Failure(format!(
            "no sentence in {} is projective, as {} requires",
            train.display(),
            algorithm
        )));
    }
    Ok(())
}

fn run(command: Command) -> Outcome {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match command {
        Command::Validate {
            file,
            tagset,
            strict,
        } => validate(&file, tagset.as_deref(), strict, &mut out),
        Command::Train {
            train: train_path,
            algorithm,
            features,
            epochs,
            seed,
            tagset,
            model,
        } => train(
            &train_path,
            algorithm,
            features.as_deref(),
            epochs,
            seed,
            tagset.as_deref(),
            &model,
            &mut out,
        ),
        Command::Parse {
            model,
            input,
            output,
        } => parse(&model, input.as_deref(), output.as_deref(), &mut out),
        Command::Eval {
            gold,
            system,
            by_deprel,
            exclude_pos,
            format,
        } => eval(&gold, &system, by_deprel, exclude_pos, format, &mut out),
        Command::Kappa { a, b, on } => kappa(&a, &b, on, &mut out),
        Command::Oracle {
            train: train_path,
            algorithm,
        } => oracle(&train_path, algorithm, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(message)) => {
            eprintln!("depparse: {}", message.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
