use std::collections::HashSet;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    classify_and_extract, expand_conjuncts, infer_disease, ComparisonStructure, Diagnostic, DiagnosticKind,
    DiseaseRef, DoidMap, GdaRecord, GeneKind, GeneRef, IdSystem, Level, RecordSpans, SentenceType, Stage,
};
use crate::corpus::{retokenize_mirna, AbstractDoc, DependencySentence, TokenSpan};
use crate::entities::{detect_mirna, phrase_evidence, resolve_mentions, EntityMention, EntityType, MentionSet, PhraseEvidence};
use crate::lexicons::{contains_trigger, Category, Lexicons};
use crate::patterns::PatternSet;

/// Does the sentence carry a sentence-filter trigger?
pub fn prefilter(sentence: &DependencySentence, lexicons: &Lexicons) -> bool {
    contains_trigger(sentence, lexicons.get(Category::SentenceFilter))
}

/// A document with miRNA names merged into single tokens and the mentions
/// of every sentence resolved. Index `i` is sent_id `i`; 0 is the title.
#[derive(Debug, Clone)]
pub struct PreparedDoc {
    pub pmid: String,
    pub sentences: Vec<DependencySentence>,
    pub mentions: Vec<Vec<EntityMention>>,
    pub notes: Vec<Diagnostic>,
}

fn merge_mirnas(pmid: &str, sentence: &DependencySentence, notes: &mut Vec<Diagnostic>) -> DependencySentence {
    let ranges: Vec<Range<usize>> = detect_mirna(pmid, &sentence.text, sentence.base_offset())
        .into_iter()
        .map(|m| m.range())
        .filter(|r| {
            sentence
                .tokens_overlapping(r.clone())
                .is_some_and(|s| s.len() > 1 && sentence.span_chars(s) == *r)
        })
        .collect();
    if ranges.is_empty() {
        return sentence.clone();
    }
    match retokenize_mirna(sentence, &ranges) {
        Ok(s) => s,
        Err(e) => {
            notes.push(Diagnostic::new(pmid, sentence.sent_id, Stage::Retokenize, DiagnosticKind::Note, e.to_string()));
            sentence.clone()
        }
    }
}

pub fn prepare_document(doc: &AbstractDoc, mentions: MentionSet<'_>) -> PreparedDoc {
    let mut notes = Vec::new();
    let sentences: Vec<DependencySentence> = doc
        .all_sentences()
        .map(|s| merge_mirnas(&doc.pmid, s, &mut notes))
        .collect();
    let mentions = sentences
        .iter()
        .map(|s| resolve_mentions(mentions, &doc.pmid, s))
        .collect();
    PreparedDoc {
        pmid: doc.pmid.clone(),
        sentences,
        mentions,
        notes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgumentTyping {
    pub aspect: PhraseEvidence,
    pub entity1: PhraseEvidence,
    pub entity2: Option<PhraseEvidence>,
}

pub fn type_arguments(
    cs: &ComparisonStructure,
    sentence: &DependencySentence,
    lexicons: &Lexicons,
    mentions: &[EntityMention],
) -> ArgumentTyping {
    let ev = |span| phrase_evidence(sentence, span, lexicons, mentions);
    ArgumentTyping {
        aspect: ev(cs.compared_aspect),
        entity1: ev(cs.entity1),
        entity2: cs.entity2.map(ev),
    }
}

fn argument_failure(cs: &ComparisonStructure, typing: &ArgumentTyping) -> Option<String> {
    if !typing.aspect.expression {
        return Some(format!("compared aspect is {}, not an expression", typing.aspect.phrase_type));
    }
    if !typing.entity1.phrase_type.is_disease_like() {
        return Some(format!("entity1 is {}, not a disease or sample", typing.entity1.phrase_type));
    }
    match (cs.sentence_type, &typing.entity2) {
        (SentenceType::TypeA, Some(e)) if !e.phrase_type.is_disease_like() => {
            Some(format!("entity2 is {}, not a disease or sample", e.phrase_type))
        }
        (SentenceType::TypeA, None) => Some("TypeA structure without entity2".into()),
        _ => None,
    }
}

/// The aspect must be an expression and every compared entity a disease,
/// disease sample or generic disease.
pub fn filter_arguments(cs: &ComparisonStructure, typing: &ArgumentTyping) -> bool {
    argument_failure(cs, typing).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneChoice {
    /// Index into the sentence mentions.
    pub mention: usize,
    /// Set when several genes remained and the closest one was taken.
    pub ambiguity: Option<String>,
}

fn gene_key(m: &EntityMention) -> String {
    m.norm_id.clone().unwrap_or_else(|| m.surface.to_lowercase())
}

/// The gene or miRNA of the aspect. Distinct genes attached as conjuncts are
/// left to their own structures; remaining ties go to the mention closest
/// to the aspect head.
pub fn gene_in_aspect(
    cs: &ComparisonStructure,
    sentence: &DependencySentence,
    mentions: &[EntityMention],
) -> Option<GeneChoice> {
    let aspect = cs.compared_aspect;
    let mut cands: Vec<(usize, TokenSpan)> = mentions
        .iter()
        .enumerate()
        .filter(|(_, m)| m.etype.is_gene_like())
        .filter_map(|(i, m)| sentence.tokens_overlapping(m.range()).map(|s| (i, s)))
        .filter(|(_, s)| aspect.contains_span(s))
        .collect();
    let distinct = |c: &[(usize, TokenSpan)]| c.iter().map(|(i, _)| gene_key(&mentions[*i])).collect::<HashSet<_>>().len();
    if cands.is_empty() {
        return None;
    }
    if distinct(&cands) > 1 {
        let not_conj: Vec<(usize, TokenSpan)> = cands
            .iter()
            .copied()
            .filter(|(_, s)| {
                let h = crate::entities::span_head(sentence, *s);
                let t = sentence.token(h);
                !(t.deprel == "conj" && aspect.contains(t.head))
            })
            .collect();
        if !not_conj.is_empty() {
            cands = not_conj;
        }
    }
    let ambiguous = distinct(&cands) > 1;
    let head = cs.heads.aspect;
    let dist = |s: &TokenSpan| s.indices().map(|i| i.abs_diff(head)).min().unwrap_or(usize::MAX);
    let (best, _) = *cands.iter().min_by_key(|(_, s)| (dist(s), s.first)).unwrap();
    let ambiguity = ambiguous.then(|| {
        let names: Vec<&str> = cands.iter().map(|(i, _)| mentions[*i].surface.as_str()).collect();
        format!("aspect holds several genes ({}); took `{}`", names.join(", "), mentions[best].surface)
    });
    Some(GeneChoice {
        mention: best,
        ambiguity,
    })
}

/// Shared, read-only extraction inputs.
#[derive(Debug, Clone, Copy)]
pub struct Extractor<'a> {
    pub patterns: &'a PatternSet,
    pub lexicons: &'a Lexicons,
    pub mentions: MentionSet<'a>,
    pub doid: Option<&'a DoidMap>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocOutput {
    pub records: Vec<GdaRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusOutput {
    pub records: Vec<GdaRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

fn pmid_order(pmid: &str) -> (u8, u64, &str) {
    match pmid.parse::<u64>() {
        Ok(n) => (0, n, pmid),
        Err(_) => (1, 0, pmid),
    }
}

impl Extractor<'_> {
    /// Documents in parallel; output ordered by numeric pmid.
    pub fn run(&self, docs: &[AbstractDoc]) -> CorpusOutput {
        let mut outs: Vec<(&str, DocOutput)> = docs.par_iter().map(|d| (d.pmid.as_str(), self.extract(d))).collect();
        outs.sort_by(|a, b| pmid_order(a.0).cmp(&pmid_order(b.0)));
        let mut all = CorpusOutput::default();
        for (_, o) in outs {
            all.records.extend(o.records);
            all.diagnostics.extend(o.diagnostics);
        }
        all
    }

    pub fn extract(&self, doc: &AbstractDoc) -> DocOutput {
        extract_gda(doc, self.patterns, self.lexicons, self.mentions, self.doid)
    }
}

/// Runs every sentence of `doc` (title included) through the pipeline.
/// Failures become diagnostics; the document is never aborted.
pub fn extract_gda(
    doc: &AbstractDoc,
    patterns: &PatternSet,
    lexicons: &Lexicons,
    mentions: MentionSet<'_>,
    doid: Option<&DoidMap>,
) -> DocOutput {
    let prepared = prepare_document(doc, mentions);
    let pmid = doc.pmid.as_str();
    let mut out = DocOutput {
        records: Vec::new(),
        diagnostics: prepared.notes.clone(),
    };
    let mut seen = HashSet::new();
    let diag = |sent_id, stage, kind, reason: String| Diagnostic::new(pmid, sent_id, stage, kind, reason);

    for (sent_id, sentence) in prepared.sentences.iter().enumerate() {
        let ms = &prepared.mentions[sent_id];
        if !prefilter(sentence, lexicons) {
            out.diagnostics
                .push(diag(sent_id, Stage::Prefilter, DiagnosticKind::Skip, "no sentence-filter trigger".into()));
            continue;
        }
        let Some(cs) = classify_and_extract(sentence, patterns) else {
            out.diagnostics
                .push(diag(sent_id, Stage::Pattern, DiagnosticKind::Skip, "no pattern matched".into()));
            continue;
        };
        let candidates = expand_conjuncts(&cs, sentence, ms);
        let mut m = diag(sent_id, Stage::Pattern, DiagnosticKind::Match, format!("{} matched as {}", cs.pattern_id, cs.sentence_type));
        m.candidates = Some(candidates.len());
        out.diagnostics.push(m);

        for cand in candidates {
            let drop = |stage, reason: String| diag(sent_id, stage, DiagnosticKind::Drop, reason);
            let typing = type_arguments(&cand, sentence, lexicons, ms);
            if let Some(reason) = argument_failure(&cand, &typing) {
                out.diagnostics.push(drop(Stage::Typing, reason));
                continue;
            }
            let Some(choice) = gene_in_aspect(&cand, sentence, ms) else {
                out.diagnostics.push(drop(
                    Stage::Gene,
                    format!("no gene or miRNA mention in `{}`", sentence.span_text(cand.compared_aspect)),
                ));
                continue;
            };
            if let Some(note) = &choice.ambiguity {
                out.diagnostics.push(diag(sent_id, Stage::Gene, DiagnosticKind::Note, note.clone()));
            }
            let scale_text = sentence.span_text(cand.scale_indicator);
            let level = lexicons.normalize_level(scale_text);
            if level == Level::Unknown {
                out.diagnostics
                    .push(drop(Stage::Level, format!("scale `{scale_text}` is neither high nor low")));
                continue;
            }
            let hit = match infer_disease(&typing, sent_id, &prepared, lexicons) {
                Ok(h) => h,
                Err(e) => {
                    out.diagnostics.push(drop(Stage::Disease, e.to_string()));
                    continue;
                }
            };
            let gm = &ms[choice.mention];
            let medic = hit.mention.norm_id.clone().unwrap_or_default();
            let (disease_id, id_system) = match doid.and_then(|d| d.get(&medic)) {
                Some(d) => (d.to_string(), IdSystem::Doid),
                None => (medic, IdSystem::Medic),
            };
            let record = GdaRecord {
                pmid: pmid.to_string(),
                sent_id,
                sentence_type: cand.sentence_type,
                gene: GeneRef {
                    symbol: gm.surface.clone(),
                    kind: if gm.etype == EntityType::MiRNA { GeneKind::MiRNA } else { GeneKind::Gene },
                    norm_id: gene_key(gm),
                },
                level,
                disease: DiseaseRef {
                    name: hit.mention.surface.clone(),
                    norm_id: disease_id,
                    id_system,
                    inferred_from: hit.source,
                },
                pattern_id: cand.pattern_id.clone(),
                spans: RecordSpans {
                    scale: sentence.span_chars(cand.scale_indicator),
                    aspect: sentence.span_chars(cand.compared_aspect),
                    entity1: sentence.span_chars(cand.entity1),
                    entity2: cand.entity2.map(|e| sentence.span_chars(e)),
                    gene: gm.range(),
                    disease_sent_id: hit.sent_id,
                    disease: hit.mention.range(),
                },
            };
            let key = {
                let (a, b, c, d, e) = record.key();
                (a.to_string(), b.to_string(), c, d.to_string(), e)
            };
            if !seen.insert(key) {
                out.diagnostics.push(drop(
                    Stage::Dedup,
                    format!("duplicate of an earlier {} / {} record", record.gene.symbol, record.disease.name),
                ));
                continue;
            }
            out.records.push(record);
        }
    }
    out
}
