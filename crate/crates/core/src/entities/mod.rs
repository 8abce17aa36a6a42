//! Gene, miRNA and disease mentions: PubTator ingestion, regex miRNA
//! detection, the pooled annotation store, phrase typing and expansion.

mod expand;
mod mirna;
mod pool;
mod pubtator;
mod resolve;
mod typing;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use expand::{collapse_entities, expand_entity, expand_entity_chars};
pub use mirna::{detect_mirna, is_mirna};
pub use pool::{AnnotationPool, PoolEntry};
pub use pubtator::{load_pubtator, parse_pubtator, PubtatorBatch, PubtatorDoc, PubtatorError};
pub use resolve::{resolve_mentions, MentionSet};
pub use typing::{is_specific_disease, phrase_evidence, phrase_type, span_head, PhraseEvidence, PhraseType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityType {
    Gene,
    MiRNA,
    Disease,
}

impl EntityType {
    pub fn is_gene_like(self) -> bool {
        matches!(self, EntityType::Gene | EntityType::MiRNA)
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityType::Gene => "Gene",
            EntityType::MiRNA => "MiRNA",
            EntityType::Disease => "Disease",
        })
    }
}

/// Where a mention came from. The order is the tie-break rank when two
/// equally long mentions overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MentionSource {
    /// Injected from ground-truth rows.
    Supplied,
    Pubtator,
    Regex,
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub pmid: String,
    pub char_start: usize,
    pub char_end: usize,
    pub surface: String,
    pub etype: EntityType,
    pub norm_id: Option<String>,
    pub source: MentionSource,
}

impl EntityMention {
    pub fn range(&self) -> Range<usize> {
        self.char_start..self.char_end
    }

    pub fn len(&self) -> usize {
        self.char_end - self.char_start
    }

    pub fn is_empty(&self) -> bool {
        self.char_end == self.char_start
    }

    pub fn overlaps(&self, other: &EntityMention) -> bool {
        self.char_start < other.char_end && other.char_start < self.char_end
    }
}
