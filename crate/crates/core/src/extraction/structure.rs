use serde::Serialize;

use super::{ComparisonStructure, SentenceType};
use crate::corpus::{DependencySentence, TokenSpan};
use crate::entities::EntityMention;
use crate::patterns::{match_pattern, DepPattern, MatchResult, PatternSet};

/// Head tokens of the captured components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Heads {
    pub scale: usize,
    pub aspect: usize,
    pub entity1: usize,
    pub entity2: Option<usize>,
}

const COORD_RELS: [&str; 3] = ["conj", "cc", "preconj"];
const LEADING_TRIM: [&str; 5] = ["case", "punct", "cc", "mark", "preconj"];
const TRAILING_TRIM: [&str; 2] = ["punct", "cc"];
const SCALE_PARTS: [&str; 4] = ["compound", "prt", "hmod", "hyph"];

/// The phrase headed by `head`: its subtree without coordinated branches,
/// trimmed of leading function words and trailing punctuation.
pub fn phrase_span(sentence: &DependencySentence, head: usize) -> TokenSpan {
    let mut keep = vec![head];
    let mut stack = vec![head];
    while let Some(n) = stack.pop() {
        for c in sentence.children(n) {
            if n == head && COORD_RELS.contains(&c.deprel.as_str()) {
                continue;
            }
            keep.push(c.index);
            stack.push(c.index);
        }
    }
    keep.sort_unstable();
    let mut lo = 0;
    while lo < keep.len() && keep[lo] != head && LEADING_TRIM.contains(&sentence.token(keep[lo]).deprel.as_str()) {
        lo += 1;
    }
    let mut hi = keep.len() - 1;
    while hi > lo && keep[hi] != head && TRAILING_TRIM.contains(&sentence.token(keep[hi]).deprel.as_str()) {
        hi -= 1;
    }
    TokenSpan::new(keep[lo], keep[hi])
}

/// The scale token with adjacent word-part children (particles, hyphen
/// pieces). Adverbial modifiers such as "significantly" stay out.
pub fn scale_span(sentence: &DependencySentence, scale: usize) -> TokenSpan {
    let mut span = TokenSpan::single(scale);
    let part = |i: usize| {
        let t = sentence.token(i);
        t.head == scale && SCALE_PARTS.contains(&t.deprel.as_str())
    };
    while span.first > 1 && part(span.first - 1) {
        span.first -= 1;
    }
    while span.last < sentence.len() && part(span.last + 1) {
        span.last += 1;
    }
    span
}

/// Converts a match into spans. `None` if a required capture is missing or
/// the components overlap.
pub fn structure_from_match(
    sentence: &DependencySentence,
    pattern: &DepPattern,
    m: &MatchResult,
    sentence_type: SentenceType,
) -> Option<ComparisonStructure> {
    let scale = m.get("scale")?;
    let aspect = m.get("aspect")?;
    let entity1 = m.get("entity1")?;
    let entity2 = match sentence_type {
        SentenceType::TypeA => Some(m.get("entity2")?),
        SentenceType::TypeB => None,
    };
    let cs = ComparisonStructure {
        sentence_type,
        scale_indicator: scale_span(sentence, scale),
        compared_aspect: phrase_span(sentence, aspect),
        entity1: phrase_span(sentence, entity1),
        entity2: entity2.map(|e| phrase_span(sentence, e)),
        pattern_id: pattern.id.clone(),
        heads: Heads {
            scale,
            aspect,
            entity1,
            entity2,
        },
    };
    let parts: Vec<TokenSpan> = [Some(cs.scale_indicator), Some(cs.compared_aspect), Some(cs.entity1), cs.entity2]
        .into_iter()
        .flatten()
        .collect();
    for (i, a) in parts.iter().enumerate() {
        if parts[i + 1..].iter().any(|b| a.overlaps(b)) {
            return None;
        }
    }
    Some(cs)
}

/// TypeA patterns first, then TypeB, each in priority order; the first
/// structurally valid match wins.
pub fn classify_and_extract(sentence: &DependencySentence, patterns: &PatternSet) -> Option<ComparisonStructure> {
    let tiers = [(SentenceType::TypeA, &patterns.type_a), (SentenceType::TypeB, &patterns.type_b)];
    for (sentence_type, list) in tiers {
        let mut ordered: Vec<&DepPattern> = list.iter().collect();
        ordered.sort_by_key(|p| p.priority);
        for p in ordered {
            for m in match_pattern(p, sentence) {
                if let Some(cs) = structure_from_match(sentence, p, &m, sentence_type) {
                    return Some(cs);
                }
            }
        }
    }
    None
}

fn conj_closure(sentence: &DependencySentence, head: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![head];
    while let Some(n) = stack.pop() {
        for c in sentence.children(n) {
            if c.deprel == "conj" {
                out.push(c.index);
                stack.push(c.index);
            }
        }
    }
    out.sort_unstable();
    out
}

/// One structure per (aspect, entity1) combination over coordinated genes
/// in the aspect and coordinated heads of entity1. The first element is
/// always `cs` itself.
pub fn expand_conjuncts(
    cs: &ComparisonStructure,
    sentence: &DependencySentence,
    mentions: &[EntityMention],
) -> Vec<ComparisonStructure> {
    let mut aspects = vec![(cs.compared_aspect, cs.heads.aspect)];
    for i in cs.compared_aspect.indices() {
        let t = sentence.token(i);
        if t.deprel != "conj" || !cs.compared_aspect.contains(t.head) {
            continue;
        }
        let gene = mentions
            .iter()
            .filter(|m| m.etype.is_gene_like())
            .filter_map(|m| sentence.tokens_overlapping(m.range()))
            .find(|s| s.contains(i) && cs.compared_aspect.contains_span(s));
        if let Some(span) = gene {
            if !aspects.iter().any(|(s, _)| *s == span) {
                aspects.push((span, i));
            }
        }
    }
    let mut entities = vec![(cs.entity1, cs.heads.entity1)];
    for c in conj_closure(sentence, cs.heads.entity1) {
        entities.push((phrase_span(sentence, c), c));
    }

    let mut out = Vec::with_capacity(aspects.len() * entities.len());
    for &(aspect, aspect_head) in &aspects {
        for &(entity1, entity1_head) in &entities {
            let mut next = cs.clone();
            next.compared_aspect = aspect;
            next.entity1 = entity1;
            next.heads.aspect = aspect_head;
            next.heads.entity1 = entity1_head;
            out.push(next);
        }
    }
    out
}
