//! Pattern and lexicon files shipped with the crate.

use crate::lexicons::{Category, Lexicons};
use crate::patterns::PatternSet;

pub const TYPE_A_PATTERNS: &str = include_str!("../../../patterns/typeA.dp");
pub const TYPE_B_PATTERNS: &str = include_str!("../../../patterns/typeB.dp");

pub const LEXICON_SOURCES: [(Category, &str); 8] = [
    (Category::SentenceFilter, include_str!("../../../lexicons/sentence_filter.txt")),
    (Category::Expression, include_str!("../../../lexicons/expression.txt")),
    (Category::DiseaseSample, include_str!("../../../lexicons/disease_sample.txt")),
    (Category::LevelHigh, include_str!("../../../lexicons/level_high.txt")),
    (Category::LevelLow, include_str!("../../../lexicons/level_low.txt")),
    (Category::GenericDisease, include_str!("../../../lexicons/generic_disease.txt")),
    (Category::Investigation, include_str!("../../../lexicons/investigation.txt")),
    (Category::Analyzed, include_str!("../../../lexicons/analyzed.txt")),
];

/// The shipped lexicons. They are checked by the test suite, so loading
/// cannot fail.
pub fn builtin_lexicons() -> Lexicons {
    Lexicons::from_sources(LEXICON_SOURCES).expect("shipped lexicons are valid")
}

pub fn builtin_patterns() -> PatternSet {
    PatternSet::from_sources(TYPE_A_PATTERNS, TYPE_B_PATTERNS).expect("shipped patterns are valid")
}
