use serde::Serialize;

use super::{ComparisonStructure, SentenceType};
use crate::corpus::{DependencySentence, TokenSpan};

/// Leading modifiers that relate an entity to another one rather than
/// describe it ("adjacent normal lung" is the normal lung).
pub const RELATIONAL_MODIFIERS: [&str; 6] = ["adjacent", "corresponding", "matched", "paired", "surrounding", "neighboring"];

const DETERMINER_RELS: [&str; 3] = ["det", "poss", "predet"];

/// The components of a structure in the conventional tabular view: the
/// aspect is shown as its gene, entities without determiners or relational
/// modifiers, and the scale capitalized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    pub sentence_type: SentenceType,
    pub scale_indicator: String,
    pub compared_aspect: String,
    pub entity1: String,
    pub entity2: Option<String>,
}

fn entity_text(sentence: &DependencySentence, span: TokenSpan) -> String {
    let mut first = span.first;
    while first < span.last {
        let t = sentence.token(first);
        let relational = t.deprel == "amod" && RELATIONAL_MODIFIERS.contains(&t.lemma.as_str());
        if DETERMINER_RELS.contains(&t.deprel.as_str()) || relational {
            first += 1;
        } else {
            break;
        }
    }
    sentence.span_text(TokenSpan::new(first, span.last)).to_string()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn components(sentence: &DependencySentence, cs: &ComparisonStructure, gene_symbol: &str) -> Components {
    Components {
        sentence_type: cs.sentence_type,
        scale_indicator: capitalize(&sentence.span_text(cs.scale_indicator).to_lowercase()),
        compared_aspect: gene_symbol.to_string(),
        entity1: entity_text(sentence, cs.entity1),
        entity2: cs.entity2.map(|e| entity_text(sentence, e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::sentence;

    #[test]
    fn trims_relational_modifiers_only() {
        let s = sentence(&[("the", "DT", 4, "det"), ("adjacent", "JJ", 4, "amod"), ("normal", "JJ", 4, "amod"), ("lung", "NN", 0, "root")]);
        assert_eq!(entity_text(&s, TokenSpan::new(1, 4)), "normal lung");
        assert_eq!(entity_text(&s, TokenSpan::new(3, 4)), "normal lung");
        // a lone head is never trimmed away
        assert_eq!(entity_text(&s, TokenSpan::single(4)), "lung");
        assert_eq!(capitalize("elevated"), "Elevated");
    }
}
