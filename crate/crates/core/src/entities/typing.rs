use std::fmt;

use serde::Serialize;

use super::{expand_entity, EntityMention, EntityType};
use crate::corpus::{DependencySentence, TokenSpan};
use crate::lexicons::{Category, Lexicons};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhraseType {
    Expression,
    DiseaseSample,
    Disease,
    GenericDisease,
    Other,
}

impl PhraseType {
    /// Acceptable as a compared entity.
    pub fn is_disease_like(self) -> bool {
        matches!(self, PhraseType::Disease | PhraseType::DiseaseSample | PhraseType::GenericDisease)
    }
}

impl fmt::Display for PhraseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Everything typing found in a phrase. Argument filtering looks at the
/// role-specific parts; `phrase_type` is the single summary value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhraseEvidence {
    pub head: usize,
    pub expression: bool,
    /// Index into the sentence mentions of the first specific disease.
    pub specific_disease: Option<usize>,
    /// Disease evidence exists but is only generic ("tumor").
    pub generic: bool,
    pub sample: bool,
    pub phrase_type: PhraseType,
}

/// The token of `span` whose governor lies outside it (leftmost if several).
pub fn span_head(sentence: &DependencySentence, span: TokenSpan) -> usize {
    span.indices()
        .find(|&i| !span.contains(sentence.token(i).head))
        .unwrap_or(span.first)
}

fn covered(sentence: &DependencySentence, span: TokenSpan, category: Category, lexicons: &Lexicons) -> Vec<bool> {
    let mut cover = vec![false; span.len()];
    for m in lexicons.get(category).find_in(sentence, span) {
        for i in m.span.indices() {
            cover[i - span.first] = true;
        }
    }
    cover
}

/// A disease mention with an identifier whose words are not all generic
/// disease terms.
pub fn is_specific_disease(sentence: &DependencySentence, mention: &EntityMention, lexicons: &Lexicons) -> bool {
    if mention.etype != EntityType::Disease || mention.norm_id.is_none() {
        return false;
    }
    match sentence.tokens_overlapping(mention.range()) {
        Some(span) => !covered(sentence, span, Category::GenericDisease, lexicons).iter().all(|&c| c),
        None => false,
    }
}

pub fn phrase_evidence(
    sentence: &DependencySentence,
    span: TokenSpan,
    lexicons: &Lexicons,
    mentions: &[EntityMention],
) -> PhraseEvidence {
    let head = span_head(sentence, span);
    let inside: Vec<(usize, TokenSpan)> = mentions
        .iter()
        .enumerate()
        .filter_map(|(i, m)| sentence.tokens_overlapping(m.range()).map(|s| (i, s)))
        .filter(|(_, s)| span.contains_span(s))
        .collect();

    let specific: Vec<(usize, TokenSpan)> = inside
        .iter()
        .copied()
        .filter(|(i, _)| is_specific_disease(sentence, &mentions[*i], lexicons))
        .collect();
    let generic_term = !lexicons.get(Category::GenericDisease).find_in(sentence, span).is_empty()
        || inside.iter().any(|(i, _)| mentions[*i].etype == EntityType::Disease);
    let samples = lexicons.get(Category::DiseaseSample);
    let sample_head = samples.find_in(sentence, span).iter().any(|m| m.span.contains(head));
    let sample_any = samples.matches_span(sentence, span);

    let expression = lexicons.get(Category::Expression).matches_span(sentence, span)
        || inside.iter().any(|(i, s)| {
            mentions[*i].etype.is_gene_like() && (*s == span || expand_entity(sentence, *s, lexicons) == span)
        });

    let head_disease = specific.iter().any(|(_, s)| s.contains(head));
    let phrase_type = if head_disease {
        PhraseType::Disease
    } else if sample_head {
        PhraseType::DiseaseSample
    } else if !specific.is_empty() {
        PhraseType::Disease
    } else if generic_term {
        PhraseType::GenericDisease
    } else if expression {
        PhraseType::Expression
    } else if sample_any {
        PhraseType::DiseaseSample
    } else {
        PhraseType::Other
    };
    PhraseEvidence {
        head,
        expression,
        specific_disease: specific.first().map(|(i, _)| *i),
        generic: generic_term && specific.is_empty(),
        sample: sample_any,
        phrase_type,
    }
}

pub fn phrase_type(
    sentence: &DependencySentence,
    span: TokenSpan,
    lexicons: &Lexicons,
    mentions: &[EntityMention],
) -> PhraseType {
    phrase_evidence(sentence, span, lexicons, mentions).phrase_type
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::sentence;
    use crate::entities::MentionSource;
    use crate::resources;

    fn mention(s: &DependencySentence, tokens: TokenSpan, etype: EntityType, id: Option<&str>) -> EntityMention {
        let r = s.span_chars(tokens);
        EntityMention {
            pmid: "1".into(),
            char_start: r.start,
            char_end: r.end,
            surface: s.text_at(r).to_string(),
            etype,
            norm_id: id.map(String::from),
            source: MentionSource::Pubtator,
        }
    }

    #[test]
    fn expression_of_gene() {
        let lex = resources::builtin_lexicons();
        let s = sentence(&[("The", "DT", 2, "det"), ("expression", "NN", 0, "root"), ("of", "IN", 2, "prep"), ("Sam68", "NN", 3, "pobj")]);
        let m = [mention(&s, TokenSpan::single(4), EntityType::Gene, Some("10657"))];
        assert_eq!(phrase_type(&s, TokenSpan::new(1, 4), &lex, &m), PhraseType::Expression);
        // a bare gene is its own expressed aspect
        assert!(phrase_evidence(&s, TokenSpan::single(4), &lex, &m).expression);
    }

    #[test]
    fn disease_tissue_and_generic() {
        let lex = resources::builtin_lexicons();
        let s = sentence(&[("NSCLC", "NN", 2, "compound"), ("tissues", "NNS", 0, "root")]);
        let m = [mention(&s, TokenSpan::single(1), EntityType::Disease, Some("MESH:D002289"))];
        let e = phrase_evidence(&s, TokenSpan::new(1, 2), &lex, &m);
        assert_eq!(e.phrase_type, PhraseType::DiseaseSample);
        assert_eq!((e.specific_disease, e.generic), (Some(0), false));

        let s = sentence(&[("tumor", "NN", 2, "compound"), ("tissues", "NNS", 0, "root")]);
        let m = [mention(&s, TokenSpan::single(1), EntityType::Disease, Some("MESH:D009369"))];
        let e = phrase_evidence(&s, TokenSpan::new(1, 2), &lex, &m);
        assert_eq!(e.phrase_type, PhraseType::DiseaseSample);
        assert!(e.generic && e.specific_disease.is_none());
        assert_eq!(phrase_type(&s, TokenSpan::single(1), &lex, &m), PhraseType::GenericDisease);
    }

    #[test]
    fn specific_disease_head() {
        let lex = resources::builtin_lexicons();
        let s = sentence(&[("lung", "NN", 2, "compound"), ("cancers", "NNS", 0, "root")]);
        let m = [mention(&s, TokenSpan::new(1, 2), EntityType::Disease, Some("MESH:D008175"))];
        assert_eq!(phrase_type(&s, TokenSpan::new(1, 2), &lex, &m), PhraseType::Disease);
        assert!(is_specific_disease(&s, &m[0], &lex));
    }

    #[test]
    fn nothing_is_other() {
        let lex = resources::builtin_lexicons();
        let s = sentence(&[("the", "DT", 2, "det"), ("results", "NNS", 0, "root")]);
        assert_eq!(phrase_type(&s, TokenSpan::new(1, 2), &lex, &[]), PhraseType::Other);
    }
}
