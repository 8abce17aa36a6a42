use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{DiseaseSource, GdaRecord, GeneKind, IdSystem, Level, SentenceType};

pub const OUTPUT_FIELDS: [&str; 12] = [
    "pmid",
    "sent_id",
    "sentence_type",
    "gene_symbol",
    "gene_id",
    "gene_kind",
    "level",
    "disease_name",
    "disease_id",
    "disease_id_system",
    "disease_inferred_from",
    "pattern_id",
];

/// The flat record written to JSONL and TSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRow {
    pub pmid: String,
    pub sent_id: usize,
    pub sentence_type: SentenceType,
    pub gene_symbol: String,
    pub gene_id: String,
    pub gene_kind: GeneKind,
    pub level: Level,
    pub disease_name: String,
    pub disease_id: String,
    pub disease_id_system: IdSystem,
    pub disease_inferred_from: DiseaseSource,
    pub pattern_id: String,
}

impl From<&GdaRecord> for OutputRow {
    fn from(r: &GdaRecord) -> Self {
        OutputRow {
            pmid: r.pmid.clone(),
            sent_id: r.sent_id,
            sentence_type: r.sentence_type,
            gene_symbol: r.gene.symbol.clone(),
            gene_id: r.gene.norm_id.clone(),
            gene_kind: r.gene.kind,
            level: r.level,
            disease_name: r.disease.name.clone(),
            disease_id: r.disease.norm_id.clone(),
            disease_id_system: r.disease.id_system,
            disease_inferred_from: r.disease.inferred_from,
            pattern_id: r.pattern_id.clone(),
        }
    }
}

pub fn write_jsonl<W: Write, T: Serialize>(mut w: W, items: &[T]) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_tsv<W: Write>(w: W, rows: &[OutputRow]) -> Result<(), csv::Error> {
    let mut out = csv::WriterBuilder::new().delimiter(b'\t').has_headers(true).from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<OutputRow>, String> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 1))?);
    }
    Ok(rows)
}
