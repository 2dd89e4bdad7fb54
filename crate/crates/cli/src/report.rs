//! Rendering of evaluation and agreement results.

use depparse::eval::DeprelMetrics;
use depparse::{EvalReport, KappaResult};
use serde_json::{json, Value};

use crate::Format;

const UNDEFINED: &str = "-";

fn num(x: f64) -> String {
    format!("{:.4}", x)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| UNDEFINED.to_owned(), num)
}

fn row(label: &str, m: &DeprelMetrics) -> [String; 8] {
    [
        label.to_owned(),
        m.gold_count.to_string(),
        m.system_count.to_string(),
        opt(m.precision),
        opt(m.recall),
        opt(m.fscore),
        opt(m.las),
        opt(m.uas),
    ]
}

const HEADER: [&str; 8] = [
    "deprel",
    "gold",
    "system",
    "precision",
    "recall",
    "f",
    "las",
    "uas",
];

pub fn eval(r: &EvalReport, by_deprel: bool, format: Format) -> String {
    match format {
        Format::Text => eval_text(r, by_deprel),
        Format::Tsv => eval_tsv(r, by_deprel),
        Format::Json => eval_json(r, by_deprel),
    }
}

fn eval_text(r: &EvalReport, by_deprel: bool) -> String {
    let mut s = format!("LAS {} UAS {} LA {}\n", num(r.las), num(r.uas), num(r.la));
    if !by_deprel {
        return s;
    }
    s.push_str(&format!("tokens {}\n\n", r.token_count));
    let rows: Vec<[String; 8]> = r.per_deprel.iter().map(|(l, m)| row(l, m)).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
    for cells in &rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let header: Vec<String> = HEADER.iter().map(|h| h.to_string()).collect();
    for cells in std::iter::once(&header[..]).chain(rows.iter().map(|r| &r[..])) {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| {
                if i == 0 {
                    format!("{:<w$}", c, w = w)
                } else {
                    format!("{:>w$}", c, w = w)
                }
            })
            .collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

fn eval_tsv(r: &EvalReport, by_deprel: bool) -> String {
    let mut s = format!(
        "metric\tvalue\nLAS\t{}\nUAS\t{}\nLA\t{}\ntokens\t{}\n",
        num(r.las),
        num(r.uas),
        num(r.la),
        r.token_count
    );
    if by_deprel {
        s.push('\n');
        s.push_str(&HEADER.join("\t"));
        s.push('\n');
        for (label, m) in &r.per_deprel {
            s.push_str(&row(label, m).join("\t"));
            s.push('\n');
        }
    }
    s
}

fn eval_json(r: &EvalReport, by_deprel: bool) -> String {
    let mut v = json!({
        "las": r.las,
        "uas": r.uas,
        "la": r.la,
        "tokens": r.token_count,
    });
    if by_deprel {
        let table: serde_json::Map<String, Value> = r
            .per_deprel
            .iter()
            .map(|(label, m)| {
                let entry = json!({
                    "gold": m.gold_count,
                    "system": m.system_count,
                    "precision": m.precision,
                    "recall": m.recall,
                    "f": m.fscore,
                    "las": m.las,
                    "uas": m.uas,
                });
                (label.clone(), entry)
            })
            .collect();
        v["by_deprel"] = Value::Object(table);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("report values serialize");
    s.push('\n');
    s
}

pub fn kappa(r: &KappaResult) -> String {
    format!(
        "kappa {}\np(A) {}\np(E) {}\nband {}\ntokens {}\n",
        num(r.kappa),
        num(r.p_observed),
        num(r.p_expected),
        r.band,
        r.token_count
    )
}
