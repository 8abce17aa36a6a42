use std::fmt;

use num_traits::Float;
use serde::Serialize;

use super::{Alignment, EvalError};
use crate::extraction::{Level, SentenceType};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
}

/// How per-class values are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Average {
    /// Pooled counts; equals accuracy for single-label data.
    Micro,
    /// Unweighted mean over the classes seen in gold or predictions.
    Macro,
    /// Mean weighted by gold support.
    Weighted,
}

impl fmt::Display for Average {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Average::Micro => "micro",
            Average::Macro => "macro",
            Average::Weighted => "weighted",
        })
    }
}

impl std::str::FromStr for Average {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "micro" => Ok(Average::Micro),
            "macro" => Ok(Average::Macro),
            "weighted" => Ok(Average::Weighted),
            _ => Err(format!("unknown averaging `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport<F> {
    pub labels: Vec<String>,
    /// `confusion[gold][predicted]` over `labels`.
    pub confusion: Vec<Vec<usize>>,
    pub accuracy: F,
    pub micro: Prf<F>,
    pub macro_avg: Prf<F>,
    pub weighted: Prf<F>,
}

impl<F: Copy> DimensionReport<F> {
    pub fn averaged(&self, average: Average) -> Prf<F> {
        match average {
            Average::Micro => self.micro,
            Average::Macro => self.macro_avg,
            Average::Weighted => self.weighted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report<F> {
    pub truth_rows: usize,
    pub matched: usize,
    pub parsed_fraction: F,
    pub level: DimensionReport<F>,
    pub sentence_type: DimensionReport<F>,
}

/// Counts `confusion[gold][pred]`.
pub fn confusion<T: PartialEq>(labels: &[T], pairs: &[(T, T)]) -> Vec<Vec<usize>> {
    let pos = |x: &T| labels.iter().position(|l| l == x).expect("label in label set");
    let mut m = vec![vec![0; labels.len()]; labels.len()];
    for (g, p) in pairs {
        m[pos(g)][pos(p)] += 1;
    }
    m
}

fn ratio<F: Float>(num: usize, den: usize) -> F {
    if den == 0 {
        F::zero()
    } else {
        F::from(num).unwrap() / F::from(den).unwrap()
    }
}

fn harmonic<F: Float>(p: F, r: F) -> F {
    if p + r == F::zero() {
        F::zero()
    } else {
        (F::one() + F::one()) * p * r / (p + r)
    }
}

fn dimension<F: Float>(labels: Vec<String>, m: Vec<Vec<usize>>) -> DimensionReport<F> {
    let n = labels.len();
    let total: usize = m.iter().flatten().sum();
    let correct: usize = (0..n).map(|i| m[i][i]).sum();
    let accuracy = ratio::<F>(correct, total);

    let mut present = 0usize;
    let (mut mp, mut mr, mut mf) = (F::zero(), F::zero(), F::zero());
    let (mut wp, mut wr, mut wf) = (F::zero(), F::zero(), F::zero());
    for c in 0..n {
        let tp = m[c][c];
        let gold: usize = m[c].iter().sum();
        let pred: usize = (0..n).map(|g| m[g][c]).sum();
        if gold == 0 && pred == 0 {
            continue;
        }
        present += 1;
        let p = ratio::<F>(tp, pred);
        let r = ratio::<F>(tp, gold);
        let f = harmonic(p, r);
        mp = mp + p;
        mr = mr + r;
        mf = mf + f;
        let w = ratio::<F>(gold, total);
        wp = wp + w * p;
        wr = wr + w * r;
        wf = wf + w * f;
    }
    let k = F::from(present.max(1)).unwrap();
    DimensionReport {
        labels,
        confusion: m,
        accuracy,
        micro: Prf {
            precision: accuracy,
            recall: accuracy,
            f1: accuracy,
        },
        macro_avg: Prf {
            precision: mp / k,
            recall: mr / k,
            f1: mf / k,
        },
        weighted: Prf {
            precision: wp,
            recall: wr,
            f1: wf,
        },
    }
}

/// Metrics over the matched pairs; `parsed_fraction` is matched / truth.
pub fn score<F: Float>(alignment: &Alignment) -> Result<Report<F>, EvalError> {
    if alignment.pairs.is_empty() {
        return Err(EvalError::Empty);
    }
    let matched: Vec<_> = alignment
        .pairs
        .iter()
        .filter_map(|(t, r)| r.as_ref().map(|r| (t, r)))
        .collect();
    if matched.is_empty() {
        return Err(EvalError::NoMatches);
    }
    let levels = [Level::High, Level::Low];
    let level_pairs: Vec<(Level, Level)> = matched.iter().map(|(t, r)| (t.level, r.level)).collect();
    let types = [SentenceType::TypeA, SentenceType::TypeB];
    let type_pairs: Vec<(SentenceType, SentenceType)> =
        matched.iter().map(|(t, r)| (t.sentence_type, r.sentence_type)).collect();
    Ok(Report {
        truth_rows: alignment.pairs.len(),
        matched: matched.len(),
        parsed_fraction: ratio(matched.len(), alignment.pairs.len()),
        level: dimension(levels.iter().map(|l| l.to_string()).collect(), confusion(&levels, &level_pairs)),
        sentence_type: dimension(types.iter().map(|t| t.to_string()).collect(), confusion(&types, &type_pairs)),
    })
}
