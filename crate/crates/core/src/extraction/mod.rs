//! Relation extraction: sentence filtering, pattern application, conjunct
//! expansion, argument typing, disease inference and record assembly.

mod components;
mod diagnostics;
mod disease;
mod output;
mod pipeline;
mod structure;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use crate::lexicons::Level;
pub use components::{components, Components, RELATIONAL_MODIFIERS};
pub use diagnostics::{Diagnostic, DiagnosticKind, Stage};
pub use disease::{infer_disease, DiseaseHit, DoidMap, DoidMapError, NoDiseaseFound};
pub use output::{read_jsonl, write_jsonl, write_tsv, OutputRow, OUTPUT_FIELDS};
pub use pipeline::{
    extract_gda, filter_arguments, gene_in_aspect, prefilter, prepare_document, type_arguments, ArgumentTyping,
    CorpusOutput, DocOutput, Extractor, GeneChoice, PreparedDoc,
};
pub use structure::{classify_and_extract, expand_conjuncts, phrase_span, scale_span, structure_from_match, Heads};

use crate::corpus::TokenSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SentenceType {
    TypeA,
    TypeB,
}

impl fmt::Display for SentenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SentenceType::TypeA => "TypeA",
            SentenceType::TypeB => "TypeB",
        })
    }
}

impl FromStr for SentenceType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "typea" | "a" => Ok(SentenceType::TypeA),
            "typeb" | "b" => Ok(SentenceType::TypeB),
            _ => Err(format!("unknown sentence type `{s}`")),
        }
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "high" => Ok(Level::High),
            "low" => Ok(Level::Low),
            "unknown" => Ok(Level::Unknown),
            _ => Err(format!("unknown level `{s}`")),
        }
    }
}

/// The RE output for one sentence, as token spans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonStructure {
    pub sentence_type: SentenceType,
    pub scale_indicator: TokenSpan,
    pub compared_aspect: TokenSpan,
    pub entity1: TokenSpan,
    /// Present exactly for TypeA.
    pub entity2: Option<TokenSpan>,
    pub pattern_id: String,
    pub heads: Heads,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneKind {
    Gene,
    MiRNA,
}

impl fmt::Display for GeneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneKind::Gene => "Gene",
            GeneKind::MiRNA => "MiRNA",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdSystem {
    #[serde(rename = "MEDIC")]
    Medic,
    #[serde(rename = "DOID")]
    Doid,
}

impl fmt::Display for IdSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdSystem::Medic => "MEDIC",
            IdSystem::Doid => "DOID",
        })
    }
}

/// Where the associated disease was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiseaseSource {
    Sentence,
    Title,
    FirstSentence,
    Methods,
}

impl fmt::Display for DiseaseSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiseaseSource::Sentence => "sentence",
            DiseaseSource::Title => "title",
            DiseaseSource::FirstSentence => "first_sentence",
            DiseaseSource::Methods => "methods",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneRef {
    pub symbol: String,
    pub kind: GeneKind,
    /// NCBI Gene ID, or the lowercased name for regex-detected miRNAs.
    pub norm_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiseaseRef {
    pub name: String,
    pub norm_id: String,
    pub id_system: IdSystem,
    pub inferred_from: DiseaseSource,
}

/// Abstract-level byte ranges of every component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordSpans {
    pub scale: Range<usize>,
    pub aspect: Range<usize>,
    pub entity1: Range<usize>,
    pub entity2: Option<Range<usize>>,
    pub gene: Range<usize>,
    /// Sentence holding the disease mention, and the mention range.
    pub disease_sent_id: usize,
    pub disease: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GdaRecord {
    pub pmid: String,
    pub sent_id: usize,
    pub sentence_type: SentenceType,
    pub gene: GeneRef,
    pub level: Level,
    pub disease: DiseaseRef,
    pub pattern_id: String,
    pub spans: RecordSpans,
}

impl GdaRecord {
    /// The deduplication key.
    pub fn key(&self) -> (&str, &str, Level, &str, usize) {
        (&self.pmid, &self.gene.norm_id, self.level, &self.disease.norm_id, self.sent_id)
    }
}
