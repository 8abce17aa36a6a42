use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Retokenize,
    Prefilter,
    Pattern,
    Typing,
    Gene,
    Level,
    Disease,
    Dedup,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticKind {
    /// The sentence was not processed further.
    Skip,
    /// A pattern matched; `candidates` structures entered the later stages.
    Match,
    /// One candidate structure was rejected.
    Drop,
    /// Informational; nothing was removed.
    Note,
}

/// One diagnostics log line. Per document, the candidates of `match` lines
/// equal the emitted records plus the `drop` lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub pmid: String,
    pub sent_id: usize,
    pub stage: Stage,
    pub kind: DiagnosticKind,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<usize>,
}

impl Diagnostic {
    pub fn new(pmid: &str, sent_id: usize, stage: Stage, kind: DiagnosticKind, reason: impl Into<String>) -> Self {
        Diagnostic {
            pmid: pmid.to_string(),
            sent_id,
            stage,
            kind,
            reason: reason.into(),
            candidates: None,
        }
    }
}
