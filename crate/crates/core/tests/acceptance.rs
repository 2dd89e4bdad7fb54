//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use depparse::eval::{attachment_by_deprel, f_score, prf_by_deprel};
use depparse::features::default_feature_model;
use depparse::parser::model_to_string;
use depparse::perceptron::TrainOptions;
use depparse::synthetic::{
    random_heads, random_projective_heads, sentence_from_heads, synthetic_treebank, TreebankOptions,
};
use depparse::transition::{derive_sequence, extract_tree, replay};
use depparse::{
    attachment_scores, cohen_kappa, is_projective, kappa_band, load_model, parse_sentence,
    read_conll_str, save_model, train_parser, validate, write_conll_string, Algorithm,
    ConllDialect, KappaOn, ParserModel, Sentence, Tagset, Token,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: &str = include_str!("data/golden.conll");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {:.2?}, limit {:.0?}", elapsed, limit)
    })
}

fn annotated(heads: &[usize], labels: &[&str]) -> Sentence {
    Sentence::new(
        heads
            .iter()
            .zip(labels)
            .enumerate()
            .map(|(i, (&h, &l))| Token::new(i + 1, format!("w{}", i + 1), "NN").with_head(h, l))
            .collect(),
    )
}

fn round_trip(sentence: &Sentence, algorithm: Algorithm) -> Result<(), String> {
    let system = algorithm.system();
    let sequence =
        derive_sequence(sentence, system).map_err(|e| format!("{}: {}", algorithm, e))?;
    let c =
        replay(sentence.len(), &sequence, system).map_err(|e| format!("{}: {}", algorithm, e))?;
    let (heads, labels) = extract_tree(&c, sentence.len(), "Root");
    let gold_heads = sentence.heads().unwrap();
    let gold_labels: Vec<String> = sentence
        .tokens
        .iter()
        .map(|t| t.deprel.clone().unwrap())
        .collect();
    ensure(heads == gold_heads && labels == gold_labels, || {
        format!("{}: replay of {:?} gave {:?}", algorithm, gold_heads, heads)
    })
}

fn oracle_round_trip() -> Outcome {
    let start = Instant::now();
    let tagset = Tagset::urdu();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonprojective = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let heads = random_projective_heads(&mut rng, n);
        let s = sentence_from_heads(&mut rng, &heads, &tagset);
        round_trip(&s, Algorithm::ArcEager)?;
        round_trip(&s, Algorithm::ArcStandard)?;
    }
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let heads = random_heads(&mut rng, n);
        if !validate::heads_are_projective(&heads) {
            nonprojective += 1;
        }
        let s = sentence_from_heads(&mut rng, &heads, &tagset);
        round_trip(&s, Algorithm::Covington)?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "1500/1500 exact ({} non-projective for covington), {:.2?}",
        nonprojective, elapsed
    ))
}

fn golden_file() -> Outcome {
    let dialect = ConllDialect::eight();
    let gold = read_conll_str(GOLDEN, &dialect).map_err(|e| e.to_string())?;
    ensure(gold.len() == 1 && gold[0].len() == 17, || {
        "expected one 17-token sentence".into()
    })?;
    let written = write_conll_string(&gold, &dialect);
    ensure(written == GOLDEN.replace("\t-\t", "\t_\t"), || {
        "written file differs".into()
    })?;
    let reread = read_conll_str(&written, &dialect).map_err(|e| e.to_string())?;
    ensure(reread == gold, || "re-read sentence differs".into())?;
    let r = attachment_scores(&gold, &reread).map_err(|e| e.to_string())?;
    ensure((r.las, r.uas, r.la) == (1.0, 1.0, 1.0), || {
        format!("LAS {:.4} UAS {:.4} LA {:.4}", r.las, r.uas, r.la)
    })?;
    Ok("round-trip exact, LAS 1.0000 UAS 1.0000 LA 1.0000".into())
}

fn overfit() -> Outcome {
    let start = Instant::now();
    let tagset = Tagset::urdu();
    let treebank = synthetic_treebank(&TreebankOptions::default(), &tagset);
    let templates = default_feature_model();
    let opts = TrainOptions::default();
    let train = || {
        train_parser(&treebank, Algorithm::ArcEager, &templates, &tagset, &opts)
            .map_err(|e| e.to_string())
    };
    let (model, _) = train()?;
    let (again, _) = train()?;
    ensure(model_to_string(&model) == model_to_string(&again), || {
        "model files differ between runs".into()
    })?;
    let parsed: Vec<Sentence> = treebank
        .iter()
        .map(|s| parse_sentence(&model, &s.unannotated()))
        .collect();
    let r = attachment_scores(&treebank, &parsed).map_err(|e| e.to_string())?;
    ensure(r.las >= 0.95, || format!("LAS {:.4} below 0.95", r.las))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{} sentences, LAS {:.4}, model files identical, {:.2?}",
        treebank.len(),
        r.las,
        elapsed
    ))
}

fn metric_identities() -> Outcome {
    let f = f_score(Some(0.8), Some(0.923)).unwrap();
    ensure((f - 0.857).abs() <= 1e-3, || format!("F = {}", f))?;

    let gold = vec![annotated(&[2, 0, 2, 2], &["Subj", "Root", "Dobj", "Nmod"])];
    let system = vec![annotated(&[2, 0, 2, 3], &["Subj", "Root", "Iobj", "Nmod"])];
    let r = attachment_scores(&gold, &system).map_err(|e| e.to_string())?;
    ensure((r.uas, r.la, r.las) == (0.75, 0.75, 0.5), || {
        format!("UAS {} LA {} LAS {}", r.uas, r.la, r.las)
    })?;
    let prf = prf_by_deprel(&gold, &system).map_err(|e| e.to_string())?;
    ensure(
        prf["Dobj"].recall == Some(0.0) && prf["Dobj"].precision.is_none(),
        || "Dobj precision/recall".into(),
    )?;
    ensure(
        prf["Iobj"].precision == Some(0.0) && prf["Iobj"].recall.is_none(),
        || "Iobj precision/recall".into(),
    )?;

    let tagset = Tagset::urdu();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let gh = random_heads(&mut rng, n);
        let sh = random_heads(&mut rng, n);
        let g = sentence_from_heads(&mut rng, &gh, &tagset);
        let mut s = sentence_from_heads(&mut rng, &sh, &tagset);
        // Small label space so that label matches are common.
        for (tg, ts) in g.tokens.iter().zip(&mut s.tokens) {
            if rng.gen_bool(0.5) {
                ts.deprel = tg.deprel.clone();
            }
        }
        let (g, s) = (vec![g], vec![s]);
        let r = attachment_scores(&g, &s).map_err(|e| e.to_string())?;
        ensure(r.las <= r.uas.min(r.la), || {
            format!("LAS {} > min({}, {})", r.las, r.uas, r.la)
        })?;
        let grouped = attachment_by_deprel(&g, &s).map_err(|e| e.to_string())?;
        let total: usize = grouped.values().map(|m| m.gold_count).sum();
        let weighted: f64 = grouped
            .values()
            .map(|m| m.las.unwrap() * m.gold_count as f64 / total as f64)
            .sum();
        ensure((weighted - r.las).abs() <= 1e-12, || {
            format!("weighted per-relation LAS {} vs {}", weighted, r.las)
        })?;
    }
    Ok(format!(
        "F {:.3}, 4-token example exact, 1000 random pairs consistent",
        f
    ))
}

fn kappa_criteria() -> Outcome {
    let labels = |xs: &[&str]| {
        vec![Sentence::new(
            xs.iter()
                .enumerate()
                .map(|(i, l)| Token::new(i + 1, format!("w{}", i + 1), "NN").with_head(0, *l))
                .collect(),
        )]
    };
    let a = labels(&["A", "A", "A", "A", "A", "A", "B", "B", "B", "B"]);
    let b = labels(&["A", "A", "A", "A", "A", "B", "B", "B", "B", "B"]);
    let r = cohen_kappa(&a, &b, KappaOn::Label).map_err(|e| e.to_string())?;
    ensure(r.kappa == 0.8, || format!("kappa {}", r.kappa))?;
    ensure(r.band.as_str() == "Substantial", || {
        format!("band {}", r.band)
    })?;
    let same = cohen_kappa(&a, &a, KappaOn::Label).map_err(|e| e.to_string())?;
    ensure(same.kappa == 1.0, || format!("self kappa {}", same.kappa))?;
    let band = kappa_band(0.93).map_err(|e| e.to_string())?;
    ensure(band.as_str() == "Almost Perfect", || {
        format!("band(0.93) {}", band)
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cats = ["A", "B", "C", "D"];
    for _ in 0..100 {
        let n = rng.gen_range(1..=30);
        let xs: Vec<&str> = (0..n).map(|_| cats[rng.gen_range(0..cats.len())]).collect();
        let ys: Vec<&str> = (0..n).map(|_| cats[rng.gen_range(0..cats.len())]).collect();
        let (x, y) = (labels(&xs), labels(&ys));
        let ab = cohen_kappa(&x, &y, KappaOn::Label)
            .map_err(|e| e.to_string())?
            .kappa;
        let ba = cohen_kappa(&y, &x, KappaOn::Label)
            .map_err(|e| e.to_string())?
            .kappa;
        ensure((ab - ba).abs() <= 1e-12, || {
            format!("asymmetric: {} vs {}", ab, ba)
        })?;
    }
    Ok("kappa 0.8000 Substantial, self 1, band(0.93) Almost Perfect, 100 pairs symmetric".into())
}

/// Two arcs cross when exactly one endpoint of one lies strictly inside the other.
fn crossing_brute_force(heads: &[usize]) -> bool {
    let arcs: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .map(|(i, &h)| (h.min(i + 1), h.max(i + 1)))
        .collect();
    for &(a, b) in &arcs {
        for &(c, d) in &arcs {
            if a < c && c < b && b < d {
                return false;
            }
        }
    }
    true
}

fn projectivity() -> Outcome {
    let tagset = Tagset::urdu();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut nonprojective = 0;
    for i in 0..1000 {
        let n = rng.gen_range(1..=10);
        let heads = if i % 2 == 0 {
            random_heads(&mut rng, n)
        } else {
            random_projective_heads(&mut rng, n)
        };
        let s = sentence_from_heads(&mut rng, &heads, &tagset);
        let fast = is_projective(&s).map_err(|e| e.to_string())?;
        let slow = crossing_brute_force(&heads);
        ensure(fast == slow, || {
            format!("{:?}: sweep {} brute force {}", heads, fast, slow)
        })?;
        if !slow {
            nonprojective += 1;
        }
    }
    Ok(format!(
        "1000/1000 agree ({} non-projective)",
        nonprojective
    ))
}

fn persistence() -> Outcome {
    let tagset = Tagset::urdu();
    let all = synthetic_treebank(
        &TreebankOptions {
            seed: 5,
            sentences: 40,
            ..TreebankOptions::default()
        },
        &tagset,
    );
    let (train, held_out) = all.split_at(20);
    let dialect = ConllDialect::ten();
    let input_text = write_conll_string(
        &held_out
            .iter()
            .map(Sentence::unannotated)
            .collect::<Vec<_>>(),
        &dialect,
    );
    let input = read_conll_str(&input_text, &dialect).map_err(|e| e.to_string())?;

    let (model, _) = train_parser(
        train,
        Algorithm::ArcEager,
        &default_feature_model(),
        &tagset,
        &TrainOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    save_model(&model, &mut bytes).map_err(|e| e.to_string())?;
    let loaded = load_model(&bytes[..]).map_err(|e| e.to_string())?;

    let run = |m: &ParserModel| {
        let parsed: Vec<Sentence> = input.iter().map(|s| parse_sentence(m, s)).collect();
        write_conll_string(&parsed, &dialect)
    };
    let before = run(&model);
    let after = run(&loaded);
    ensure(before == after, || {
        "parse output changed after reload".into()
    })?;
    Ok(format!(
        "{} held-out sentences, {} output bytes identical",
        input.len(),
        after.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("oracle round-trip", oracle_round_trip),
        ("golden file", golden_file),
        ("overfit", overfit),
        ("metric identities", metric_identities),
        ("kappa", kappa_criteria),
        ("projectivity check", projectivity),
        ("model persistence", persistence),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let outcome =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}: {}", name, detail),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}: {}", name, detail);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
