//! Cohen's kappa between two annotations of the same tokens.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::eval::check_alignment;
use crate::sentence::{Sentence, Token};

/// Which annotation decision is compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KappaOn {
    #[default]
    Label,
    Head,
    Both,
}

impl FromStr for KappaOn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "label" => Ok(Self::Label),
            "head" => Ok(Self::Head),
            "both" => Ok(Self::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown kappa target '{}' (expected label, head or both)",
                other
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Band {
    NoAgreement,
    NoneToSlight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NoAgreement => "No agreement",
            Self::NoneToSlight => "None to slight",
            Self::Fair => "Fair",
            Self::Moderate => "Moderate",
            Self::Substantial => "Substantial",
            Self::AlmostPerfect => "Almost Perfect",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Interpretation band; each band includes its upper bound.
pub fn kappa_band(kappa: f64) -> Result<Band> {
    if kappa.is_nan() || kappa > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "kappa {} is out of range",
            kappa
        )));
    }
    Ok(match kappa {
        k if k <= 0.0 => Band::NoAgreement,
        k if k <= 0.20 => Band::NoneToSlight,
        k if k <= 0.40 => Band::Fair,
        k if k <= 0.60 => Band::Moderate,
        k if k <= 0.80 => Band::Substantial,
        _ => Band::AlmostPerfect,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaResult {
    pub kappa: f64,
    pub p_observed: f64,
    pub p_expected: f64,
    pub band: Band,
    pub token_count: usize,
    /// Both annotators used one identical category throughout, so chance
    /// agreement is 1; kappa is reported as 1.
    pub degenerate: bool,
}

/// Kappa over paired category decisions.
pub fn kappa_from_pairs<T: Ord>(pairs: impl IntoIterator<Item = (T, T)>) -> Result<KappaResult> {
    let mut marginals: BTreeMap<T, (u128, u128)> = BTreeMap::new();
    let mut n: u128 = 0;
    let mut agree: u128 = 0;
    for (a, b) in pairs {
        n += 1;
        if a == b {
            agree += 1;
        }
        marginals.entry(a).or_default().0 += 1;
        marginals.entry(b).or_default().1 += 1;
    }
    if n == 0 {
        return Err(Error::InvalidArgument("no tokens to compare".into()));
    }
    let chance: u128 = marginals.values().map(|&(x, y)| x * y).sum();
    let square = n * n;
    let p_observed = agree as f64 / n as f64;
    let p_expected = chance as f64 / square as f64;
    let degenerate = chance == square;
    let kappa = if degenerate {
        1.0
    } else {
        // Integer numerator and denominator keep exact cases exact.
        let num = (n * agree) as f64 - chance as f64;
        num / (square - chance) as f64
    };
    Ok(KappaResult {
        kappa,
        p_observed,
        p_expected,
        band: kappa_band(kappa)?,
        token_count: n as usize,
        degenerate,
    })
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Decision {
    Label(Option<String>),
    Head(Option<usize>),
    Both(Option<usize>, Option<String>),
}

fn decision(token: &Token, on: KappaOn) -> Decision {
    let label = || token.deprel.as_ref().map(|l| l.to_lowercase());
    match on {
        KappaOn::Label => Decision::Label(label()),
        KappaOn::Head => Decision::Head(token.head),
        KappaOn::Both => Decision::Both(token.head, label()),
    }
}

/// Agreement between two annotations of the same sentences.
pub fn cohen_kappa(a: &[Sentence], b: &[Sentence], on: KappaOn) -> Result<KappaResult> {
    check_alignment(a, b)?;
    let pairs = a
        .iter()
        .zip(b)
        .flat_map(|(sa, sb)| sa.tokens.iter().zip(&sb.tokens))
        .map(|(ta, tb)| (decision(ta, on), decision(tb, on)));
    kappa_from_pairs(pairs)
}
