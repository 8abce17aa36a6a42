//! Scoring extracted records against ground truth on expression level and
//! sentence type.

mod metrics;
mod table;
mod truth;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::extraction::OutputRow;

pub use metrics::{confusion, score, Average, DimensionReport, Prf, Report};
pub use table::render_table;
pub use truth::{load_truth, resolve_sent_ids, supplied_mentions, GroundTruthRow};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("truth line {line}: {message}")]
    Truth { line: usize, message: String },
    #[error("duplicate truth key: pmid {pmid}, sent_id {sent_id}, gene {gene}")]
    DuplicateKey { pmid: String, sent_id: String, gene: String },
    #[error("nothing to score: no ground-truth rows")]
    Empty,
    #[error("nothing to score: no ground-truth row was matched by an extraction")]
    NoMatches,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Truth rows with their matched record, plus records matching no row.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub pairs: Vec<(GroundTruthRow, Option<OutputRow>)>,
    pub unmatched_records: Vec<OutputRow>,
}

impl Alignment {
    pub fn matched(&self) -> usize {
        self.pairs.iter().filter(|(_, r)| r.is_some()).count()
    }
}

fn gene_matches(truth: &GroundTruthRow, rec: &OutputRow) -> bool {
    (!truth.gene_id.is_empty() && truth.gene_id == rec.gene_id)
        || (!truth.gene_symbol.is_empty() && truth.gene_symbol.eq_ignore_ascii_case(&rec.gene_symbol))
}

/// Pairs each truth row with the first record of the same pmid and sentence
/// whose gene id or symbol agrees. Truth rows must be unique per key.
pub fn align(records: &[OutputRow], truth: &[GroundTruthRow]) -> Result<Alignment, EvalError> {
    let mut keys = HashSet::new();
    for t in truth {
        if !keys.insert(t.key()) {
            return Err(EvalError::DuplicateKey {
                pmid: t.pmid.clone(),
                sent_id: t.sent_id.map_or_else(|| t.sentence_text.clone(), |s| s.to_string()),
                gene: t.gene_key(),
            });
        }
    }
    let mut by_sentence: BTreeMap<(&str, usize), Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_sentence.entry((r.pmid.as_str(), r.sent_id)).or_default().push(i);
    }
    let mut used = vec![false; records.len()];
    let mut pairs = Vec::with_capacity(truth.len());
    for t in truth {
        let hit = t.sent_id.and_then(|sid| {
            by_sentence
                .get(&(t.pmid.as_str(), sid))
                .and_then(|idx| idx.iter().copied().find(|&i| !used[i] && gene_matches(t, &records[i])))
        });
        if let Some(i) = hit {
            used[i] = true;
        }
        pairs.push((t.clone(), hit.map(|i| records[i].clone())));
    }
    let unmatched_records = records
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(r, _)| r.clone())
        .collect();
    Ok(Alignment {
        pairs,
        unmatched_records,
    })
}

