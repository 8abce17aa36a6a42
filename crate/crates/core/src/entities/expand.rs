use std::ops::Range;

use super::EntityMention;
use crate::corpus::{DependencySentence, TokenSpan};
use crate::lexicons::{Category, Lexicons};

const MODIFIER_RELS: [&str; 3] = ["amod", "compound", "nn"];

fn is_modifier(deprel: &str) -> bool {
    MODIFIER_RELS.contains(&deprel)
}

/// Grows a mention into its noun phrase: preceding `amod`/`compound`
/// modifiers of tokens in the span, and a following head noun from the
/// disease_sample lexicon that a span token modifies.
pub fn expand_entity(sentence: &DependencySentence, span: TokenSpan, lexicons: &Lexicons) -> TokenSpan {
    let samples = lexicons.get(Category::DiseaseSample);
    let mut cur = span;
    loop {
        let mut grew = false;
        if cur.first > 1 {
            let t = sentence.token(cur.first - 1);
            if is_modifier(&t.deprel) && cur.contains(t.head) {
                cur.first -= 1;
                grew = true;
            }
        }
        if cur.last < sentence.len() {
            let h = cur.last + 1;
            let attached = cur
                .indices()
                .any(|i| sentence.token(i).head == h && is_modifier(&sentence.token(i).deprel));
            if attached && samples.matches_span(sentence, TokenSpan::single(h)) {
                cur.last = h;
                grew = true;
            }
        }
        if !grew {
            return cur;
        }
    }
}

/// [`expand_entity`] over abstract-level byte ranges. Ranges outside the
/// sentence come back unchanged.
pub fn expand_entity_chars(sentence: &DependencySentence, range: Range<usize>, lexicons: &Lexicons) -> Range<usize> {
    let bounds = sentence.char_range();
    if range.start < bounds.start || range.end > bounds.end {
        return range;
    }
    match sentence.tokens_overlapping(range.clone()) {
        Some(span) => {
            let grown = sentence.span_chars(expand_entity(sentence, span, lexicons));
            grown.start.min(range.start)..grown.end.max(range.end)
        }
        None => range,
    }
}

/// Collapses noun tokens and mentions into non-overlapping entity ranges:
/// each seed is expanded, then overlapping results are merged.
pub fn collapse_entities(sentence: &DependencySentence, mentions: &[EntityMention], lexicons: &Lexicons) -> Vec<TokenSpan> {
    let mut spans: Vec<TokenSpan> = sentence
        .tokens
        .iter()
        .filter(|t| t.pos().starts_with("NN"))
        .map(|t| TokenSpan::single(t.index))
        .chain(mentions.iter().filter_map(|m| sentence.tokens_overlapping(m.range())))
        .map(|s| expand_entity(sentence, s, lexicons))
        .collect();
    spans.sort();
    let mut merged: Vec<TokenSpan> = Vec::new();
    for s in spans {
        match merged.last_mut() {
            Some(last) if last.overlaps(&s) => *last = last.union(&s),
            _ => merged.push(s),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::sentence;
    use crate::resources;

    fn oscc() -> DependencySentence {
        sentence(&[
            ("Plasma", "NN", 2, "compound"),
            ("miR-187", "NN", 5, "nsubj"),
            ("was", "VBD", 5, "cop"),
            ("significantly", "RB", 5, "advmod"),
            ("higher", "JJR", 0, "root"),
            ("in", "IN", 5, "prep"),
            ("OSCC", "NN", 8, "compound"),
            ("patients", "NNS", 6, "pobj"),
            ("than", "IN", 5, "prep"),
            ("in", "IN", 9, "pcomp"),
            ("normal", "JJ", 12, "amod"),
            ("individuals", "NNS", 10, "pobj"),
            (".", ".", 5, "punct"),
        ])
    }

    #[test]
    fn grows_onto_sample_head() {
        let lex = resources::builtin_lexicons();
        let s = oscc();
        assert_eq!(s.span_text(expand_entity(&s, TokenSpan::single(7), &lex)), "OSCC patients");
        assert_eq!(s.span_text(expand_entity(&s, TokenSpan::single(12), &lex)), "normal individuals");
        assert_eq!(s.span_text(expand_entity(&s, TokenSpan::single(2), &lex)), "Plasma miR-187");
        // already maximal
        let full = TokenSpan::new(7, 8);
        assert_eq!(expand_entity(&s, full, &lex), full);
    }

    #[test]
    fn modifiers_of_outside_heads_are_not_taken() {
        let lex = resources::builtin_lexicons();
        let s = oscc();
        // "higher" does not attach to "significantly" as a modifier
        assert_eq!(expand_entity(&s, TokenSpan::single(5), &lex), TokenSpan::single(5));
    }

    #[test]
    fn char_ranges_round_trip() {
        let lex = resources::builtin_lexicons();
        let s = oscc();
        let r = s.token(7).char_range();
        assert_eq!(s.text_at(expand_entity_chars(&s, r, &lex)), "OSCC patients");
        assert_eq!(expand_entity_chars(&s, 500..510, &lex), 500..510);
    }

    #[test]
    fn collapses_to_three() {
        let lex = resources::builtin_lexicons();
        let s = oscc();
        let got: Vec<&str> = collapse_entities(&s, &[], &lex).into_iter().map(|sp| s.span_text(sp)).collect();
        assert_eq!(got, vec!["Plasma miR-187", "OSCC patients", "normal individuals"]);
    }
}
