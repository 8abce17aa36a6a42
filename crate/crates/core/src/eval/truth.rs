use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::corpus::AbstractDoc;
use crate::entities::{is_mirna, EntityMention, EntityType, MentionSource};
use crate::extraction::{Level, SentenceType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundTruthRow {
    pub pmid: String,
    /// Missing ids are resolved from `sentence_text`.
    pub sent_id: Option<usize>,
    pub sentence_text: String,
    pub gene_id: String,
    pub gene_symbol: String,
    pub level: Level,
    pub sentence_type: SentenceType,
    pub disease_name: Option<String>,
    pub disease_id: Option<String>,
}

impl GroundTruthRow {
    pub fn gene_key(&self) -> String {
        if self.gene_id.is_empty() {
            self.gene_symbol.to_lowercase()
        } else {
            self.gene_id.clone()
        }
    }

    /// (pmid, sentence, gene), the sentence given by id or else by text.
    pub fn key(&self) -> (String, String, String) {
        let sentence = match self.sent_id {
            Some(s) => s.to_string(),
            None => format!("text:{}", normalize_space(&self.sentence_text)),
        };
        (self.pmid.clone(), sentence, self.gene_key())
    }
}

#[derive(Debug, Deserialize)]
struct RawRow {
    pmid: String,
    sent_id: Option<String>,
    #[serde(default)]
    sentence_text: String,
    #[serde(default)]
    gene_id: String,
    #[serde(default)]
    gene_symbol: String,
    level: String,
    sentence_type: String,
    #[serde(default)]
    disease_name: Option<String>,
    #[serde(default)]
    disease_id: Option<String>,
}

fn non_empty(s: Option<String>) -> Option<String> {
    s.map(|s| s.trim().to_string()).filter(|s| !s.is_empty())
}

/// Reads the tab-separated truth file (with header).
pub fn load_truth<R: Read>(reader: R) -> Result<Vec<GroundTruthRow>, EvalError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .flexible(true)
        .quoting(false)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<RawRow>().enumerate() {
        let line = i + 2;
        let raw = rec.map_err(|e| EvalError::Truth {
            line,
            message: e.to_string(),
        })?;
        let bad = |message: String| EvalError::Truth { line, message };
        let level: Level = raw.level.parse().map_err(bad)?;
        if level == Level::Unknown {
            return Err(bad("level must be High or Low".into()));
        }
        let sentence_type: SentenceType = raw.sentence_type.parse().map_err(bad)?;
        let sent_id = match non_empty(raw.sent_id) {
            Some(s) => Some(s.parse().map_err(|_| bad(format!("sent_id `{s}` is not a number")))?),
            None => None,
        };
        if raw.gene_id.trim().is_empty() && raw.gene_symbol.trim().is_empty() {
            return Err(bad("row has neither gene_id nor gene_symbol".into()));
        }
        if sent_id.is_none() && raw.sentence_text.trim().is_empty() {
            return Err(bad("row has neither sent_id nor sentence_text".into()));
        }
        rows.push(GroundTruthRow {
            pmid: raw.pmid.trim().to_string(),
            sent_id,
            sentence_text: raw.sentence_text.trim().to_string(),
            gene_id: raw.gene_id.trim().to_string(),
            gene_symbol: raw.gene_symbol.trim().to_string(),
            level,
            sentence_type,
            disease_name: non_empty(raw.disease_name),
            disease_id: non_empty(raw.disease_id),
        });
    }
    Ok(rows)
}

fn normalize_space(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Fills missing sent_ids by matching the sentence text against the corpus
/// (whitespace-insensitive). Returns how many rows stay unresolved.
pub fn resolve_sent_ids(rows: &mut [GroundTruthRow], docs: &[AbstractDoc]) -> usize {
    let mut unresolved = 0;
    for row in rows.iter_mut().filter(|r| r.sent_id.is_none()) {
        let want = normalize_space(&row.sentence_text);
        let found = docs
            .iter()
            .filter(|d| d.pmid == row.pmid)
            .flat_map(|d| d.all_sentences())
            .find(|s| normalize_space(&s.text) == want)
            .map(|s| s.sent_id);
        match found {
            Some(id) => row.sent_id = Some(id),
            None => unresolved += 1,
        }
    }
    unresolved
}

fn word_occurrences<'a>(text: &'a str, needle: &'a str) -> impl Iterator<Item = usize> + 'a {
    let boundary = |c: Option<char>| c.is_none_or(|c| !c.is_alphanumeric());
    text.match_indices(needle).map(|(i, _)| i).filter(move |&i| {
        boundary(text[..i].chars().next_back()) && boundary(text[i + needle.len()..].chars().next())
    })
}

/// Mentions built from the truth rows: every whole-word occurrence of a
/// row's gene symbol and disease name in the row's document.
pub fn supplied_mentions(rows: &[GroundTruthRow], docs: &[AbstractDoc]) -> BTreeMap<String, Vec<EntityMention>> {
    let mut out: BTreeMap<String, Vec<EntityMention>> = BTreeMap::new();
    for row in rows {
        let mut wanted = Vec::new();
        if !row.gene_symbol.is_empty() {
            let etype = if is_mirna(&row.gene_symbol) { EntityType::MiRNA } else { EntityType::Gene };
            let id = (!row.gene_id.is_empty()).then(|| row.gene_id.clone());
            wanted.push((row.gene_symbol.as_str(), etype, id));
        }
        if let (Some(name), Some(id)) = (&row.disease_name, &row.disease_id) {
            wanted.push((name.as_str(), EntityType::Disease, Some(id.clone())));
        }
        for doc in docs.iter().filter(|d| d.pmid == row.pmid) {
            for s in doc.all_sentences() {
                let base = s.base_offset();
                for (surface, etype, id) in &wanted {
                    for i in word_occurrences(&s.text, surface) {
                        out.entry(row.pmid.clone()).or_default().push(EntityMention {
                            pmid: row.pmid.clone(),
                            char_start: base + i,
                            char_end: base + i + surface.len(),
                            surface: surface.to_string(),
                            etype: *etype,
                            norm_id: id.clone(),
                            source: MentionSource::Supplied,
                        });
                    }
                }
            }
        }
    }
    for list in out.values_mut() {
        list.sort_by_key(|a| (a.char_start, a.char_end, a.etype));
        list.dedup();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "pmid\tsent_id\tsentence_text\tgene_id\tgene_symbol\tlevel\tsentence_type\n";

    #[test]
    fn reads_rows_and_optional_columns() {
        let text = format!("{HEADER}1\t2\tA b.\t7157\tTP53\thigh\tTypeA\n3\t\tC  d.\t\tmiR-21\tLow\tTypeB\n");
        let rows = load_truth(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].sent_id, rows[0].level), (Some(2), Level::High));
        assert_eq!(rows[1].sent_id, None);
        assert_eq!(rows[1].gene_key(), "mir-21");
        assert_eq!(rows[1].key().1, "text:C d.");
    }

    #[test]
    fn rejects_bad_values_with_line() {
        let text = format!("{HEADER}1\t2\tx\t1\tg\tmedium\tTypeA\n");
        match load_truth(text.as_bytes()) {
            Err(EvalError::Truth { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("medium"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = format!("{HEADER}1\t2\tx\t1\tg\tUnknown\tTypeA\n");
        assert!(load_truth(text.as_bytes()).is_err());
    }

    #[test]
    fn whole_word_occurrences() {
        assert_eq!(word_occurrences("p53 and p53x, p53.", "p53").collect::<Vec<_>>(), vec![0, 14]);
    }
}
