use std::collections::BTreeMap;
use std::io::BufRead;

use thiserror::Error;

use super::{is_mirna, EntityMention, EntityType, MentionSource};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PubtatorDoc {
    pub pmid: String,
    pub title: String,
    pub abstract_text: String,
}

impl PubtatorDoc {
    /// Title, one space, abstract: the text annotation offsets refer to.
    pub fn text(&self) -> String {
        format!("{} {}", self.title, self.abstract_text)
    }
}

#[derive(Debug, Clone, Default)]
pub struct PubtatorBatch {
    pub documents: Vec<PubtatorDoc>,
    pub mentions: Vec<EntityMention>,
    /// Rows of other entity types, or gene rows without an identifier.
    pub skipped_rows: usize,
}

#[derive(Debug, Error)]
pub enum PubtatorError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("pmid {pmid}, line {line}: annotation before the document's title and abstract")]
    MissingText { pmid: String, line: usize },
    #[error("pmid {pmid}, line {line}: offsets {start}..{end} give `{found}`, annotation says `{expected}`")]
    OffsetMismatch {
        pmid: String,
        line: usize,
        start: usize,
        end: usize,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const DISEASE_TYPES: [&str; 4] = ["Disease", "SpecificDisease", "DiseaseClass", "CompositeMention"];

pub fn parse_pubtator(input: &str) -> Result<PubtatorBatch, PubtatorError> {
    load_pubtator(input.as_bytes())
}

/// Reads PubTator abstract format. Gene and disease rows become mentions;
/// their offsets are checked against the title + " " + abstract text.
pub fn load_pubtator<R: BufRead>(reader: R) -> Result<PubtatorBatch, PubtatorError> {
    let mut batch = PubtatorBatch::default();
    let mut titles: BTreeMap<String, String> = BTreeMap::new();
    let mut texts: BTreeMap<String, String> = BTreeMap::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some((pmid, kind, body)) = text_line(line) {
            match kind {
                "t" => {
                    titles.insert(pmid.to_string(), body.to_string());
                }
                _ => {
                    let Some(title) = titles.remove(pmid) else {
                        return Err(PubtatorError::Malformed {
                            line: line_no,
                            message: format!("abstract line for pmid {pmid} without a title line"),
                        });
                    };
                    batch.documents.push(PubtatorDoc {
                        pmid: pmid.to_string(),
                        title: title.clone(),
                        abstract_text: body.to_string(),
                    });
                    texts.insert(pmid.to_string(), format!("{title} {body}"));
                }
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 5 {
            return Err(PubtatorError::Malformed {
                line: line_no,
                message: format!("expected at least 5 tab-separated columns, found {}", cols.len()),
            });
        }
        let pmid = cols[0].trim();
        let offset = |s: &str| {
            s.trim().parse::<usize>().map_err(|_| PubtatorError::Malformed {
                line: line_no,
                message: format!("offset `{s}` is not a number"),
            })
        };
        let (start, end) = (offset(cols[1])?, offset(cols[2])?);
        let surface = cols[3];
        let etype = cols[4].trim();
        let id = cols.get(5).map(|s| s.trim()).filter(|s| !s.is_empty() && *s != "-");

        let is_gene = etype == "Gene";
        if !is_gene && !DISEASE_TYPES.contains(&etype) {
            batch.skipped_rows += 1;
            continue;
        }
        if is_gene && id.is_none() {
            batch.skipped_rows += 1;
            continue;
        }
        let Some(text) = texts.get(pmid) else {
            return Err(PubtatorError::MissingText {
                pmid: pmid.to_string(),
                line: line_no,
            });
        };
        let found = if start < end { text.get(start..end) } else { None };
        if found != Some(surface) {
            return Err(PubtatorError::OffsetMismatch {
                pmid: pmid.to_string(),
                line: line_no,
                start,
                end,
                expected: surface.to_string(),
                found: found.unwrap_or("<out of range>").to_string(),
            });
        }
        let etype = match (is_gene, is_mirna(surface)) {
            (true, true) => EntityType::MiRNA,
            (true, false) => EntityType::Gene,
            _ => EntityType::Disease,
        };
        batch.mentions.push(EntityMention {
            pmid: pmid.to_string(),
            char_start: start,
            char_end: end,
            surface: surface.to_string(),
            etype,
            norm_id: id.map(String::from),
            source: MentionSource::Pubtator,
        });
    }
    if let Some((pmid, _)) = titles.into_iter().next() {
        return Err(PubtatorError::Malformed {
            line: 0,
            message: format!("pmid {pmid} has a title line but no abstract line"),
        });
    }
    if batch.skipped_rows > 0 {
        log::warn!("skipped {} PubTator rows of unused types or without ids", batch.skipped_rows);
    }
    Ok(batch)
}

fn text_line(line: &str) -> Option<(&str, &str, &str)> {
    let (pmid, rest) = line.split_once('|')?;
    if pmid.is_empty() || !pmid.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return None;
    }
    let (kind, body) = rest.split_once('|')?;
    matches!(kind, "t" | "a").then_some((pmid, kind, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "\
20360610|t|EphA2 in lung adenocarcinoma
20360610|a|Expression of EphA2 is increased in NSCLC metastases.
20360610\t43\t48\tEphA2\tGene\t1969
20360610\t65\t70\tNSCLC\tDisease\tMESH:D002289
20360610\t0\t5\tEphA2\tSpecies\t9606
";

    #[test]
    fn gene_and_disease_rows() {
        let b = parse_pubtator(DOC).unwrap();
        assert_eq!(b.documents.len(), 1);
        assert_eq!(b.skipped_rows, 1);
        assert_eq!(b.mentions.len(), 2);
        assert_eq!(b.mentions[0].etype, EntityType::Gene);
        assert_eq!(b.mentions[1].norm_id.as_deref(), Some("MESH:D002289"));
    }

    #[test]
    fn empty_input() {
        let b = parse_pubtator("").unwrap();
        assert!(b.mentions.is_empty() && b.documents.is_empty());
    }

    #[test]
    fn offset_mismatch_names_pmid_and_line() {
        let bad = DOC.replace("\t65\t70\t", "\t64\t69\t");
        let err = parse_pubtator(&bad).unwrap_err();
        assert!(matches!(err, PubtatorError::OffsetMismatch { line: 4, .. }), "{err}");
        assert!(err.to_string().contains("20360610"));
    }

    #[test]
    fn gene_named_like_mirna_is_mirna() {
        let s = "1|t|miR-195 here\n1|a|x\n1\t0\t7\tmiR-195\tGene\t406971\n1\t8\t12\there\tGene\t\n";
        let b = parse_pubtator(s).unwrap();
        assert_eq!(b.mentions.len(), 1);
        assert_eq!(b.mentions[0].etype, EntityType::MiRNA);
        assert_eq!(b.mentions[0].norm_id.as_deref(), Some("406971"));
        assert_eq!(b.skipped_rows, 1);
    }

    #[test]
    fn annotation_without_text_is_rejected() {
        assert!(matches!(
            parse_pubtator("9\t0\t1\tx\tGene\t1\n"),
            Err(PubtatorError::MissingText { line: 1, .. })
        ));
    }
}
