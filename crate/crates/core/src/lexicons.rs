//! Trigger lexicons and phrase lookup over token lemmas.
//!
//! Phrases and tokens are compared word by word after splitting on hyphens,
//! so `down-regulated`, `down regulated` and `down - regulated` are the same
//! trigger. A token matches a phrase word through its lowercased form or its
//! lemma. Matches always start and end on token boundaries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{DependencySentence, TokenSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    SentenceFilter,
    Expression,
    DiseaseSample,
    LevelHigh,
    LevelLow,
    GenericDisease,
    Investigation,
    Analyzed,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::SentenceFilter,
        Category::Expression,
        Category::DiseaseSample,
        Category::LevelHigh,
        Category::LevelLow,
        Category::GenericDisease,
        Category::Investigation,
        Category::Analyzed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::SentenceFilter => "sentence_filter",
            Category::Expression => "expression",
            Category::DiseaseSample => "disease_sample",
            Category::LevelHigh => "level_high",
            Category::LevelLow => "level_low",
            Category::GenericDisease => "generic_disease",
            Category::Investigation => "investigation",
            Category::Analyzed => "analyzed",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.txt", self.name())
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("missing lexicon files for: {}", .0.join(", "))]
    MissingCategories(Vec<String>),
    #[error("lexicon `{0}` has no entries")]
    Empty(Category),
    #[error("{category}.txt line {line}: phrase `{phrase}` has more than four words")]
    TooLong {
        category: Category,
        line: usize,
        phrase: String,
    },
    #[error("phrase `{0}` appears in both level_high and level_low")]
    LevelOverlap(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
struct Phrase {
    text: String,
    /// Hyphen-split words.
    words: Vec<String>,
}

fn split_words(s: &str) -> Vec<String> {
    s.split(|c: char| c.is_whitespace() || c == '-')
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn normalize_phrase(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    pub category: Category,
    entries: BTreeSet<String>,
    phrases: Vec<Phrase>,
}

/// One word position in a token stream, with the token it came from.
#[derive(Debug, Clone)]
struct Slot {
    token: usize,
    starts_token: bool,
    ends_token: bool,
    alternatives: Vec<String>,
}

fn token_slots(sentence: &DependencySentence, span: TokenSpan) -> Vec<Slot> {
    let mut slots = Vec::new();
    for i in span.indices() {
        let t = sentence.token(i);
        let form = split_words(&t.form);
        let lemma = split_words(&t.lemma);
        let n = form.len();
        for (k, w) in form.iter().enumerate() {
            let mut alternatives = vec![w.clone()];
            if lemma.len() == n && lemma[k] != *w {
                alternatives.push(lemma[k].clone());
            }
            slots.push(Slot {
                token: i,
                starts_token: k == 0,
                ends_token: k + 1 == n,
                alternatives,
            });
        }
    }
    slots
}

fn text_slots(text: &str) -> Vec<Slot> {
    let mut slots = Vec::new();
    for (i, word) in text.split_whitespace().enumerate() {
        let parts = split_words(word);
        let n = parts.len();
        for (k, w) in parts.into_iter().enumerate() {
            slots.push(Slot {
                token: i + 1,
                starts_token: k == 0,
                ends_token: k + 1 == n,
                alternatives: vec![w],
            });
        }
    }
    slots
}

/// A phrase occurrence in a token stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerMatch {
    pub span: TokenSpan,
    pub phrase: String,
}

impl Lexicon {
    pub fn new<I, S>(category: Category, phrases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries: BTreeSet<String> = phrases
            .into_iter()
            .map(|p| normalize_phrase(p.as_ref()))
            .filter(|p| !p.is_empty())
            .collect();
        let phrases = entries
            .iter()
            .map(|p| Phrase {
                text: p.clone(),
                words: split_words(p),
            })
            .filter(|p| !p.words.is_empty())
            .collect();
        Lexicon {
            category,
            entries,
            phrases,
        }
    }

    fn parse(category: Category, text: &str) -> Result<Self, LexiconError> {
        let mut lines = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.split_whitespace().count() > 4 {
                return Err(LexiconError::TooLong {
                    category,
                    line: i + 1,
                    phrase: line.to_string(),
                });
            }
            lines.push(line);
        }
        let lex = Lexicon::new(category, lines);
        if lex.entries.is_empty() {
            return Err(LexiconError::Empty(category));
        }
        Ok(lex)
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn union(&self, other: &Lexicon) -> Lexicon {
        Lexicon::new(self.category, self.entries().chain(other.entries()))
    }

    fn scan(&self, slots: &[Slot], mut on_match: impl FnMut(&Slot, &Slot, &Phrase) -> bool) {
        for start in 0..slots.len() {
            if !slots[start].starts_token {
                continue;
            }
            for p in &self.phrases {
                let n = p.words.len();
                if start + n > slots.len() {
                    continue;
                }
                let window = &slots[start..start + n];
                if !window[n - 1].ends_token {
                    continue;
                }
                let hit = window
                    .iter()
                    .zip(&p.words)
                    .all(|(slot, w)| slot.alternatives.iter().any(|a| a == w));
                if hit && !on_match(&window[0], &window[n - 1], p) {
                    return;
                }
            }
        }
    }

    /// Every phrase occurrence inside `span`, in token order.
    pub fn find_in(&self, sentence: &DependencySentence, span: TokenSpan) -> Vec<TriggerMatch> {
        let slots = token_slots(sentence, span);
        let mut out = Vec::new();
        self.scan(&slots, |a, b, p| {
            out.push(TriggerMatch {
                span: TokenSpan::new(a.token, b.token),
                phrase: p.text.clone(),
            });
            true
        });
        out
    }

    pub fn matches_span(&self, sentence: &DependencySentence, span: TokenSpan) -> bool {
        let slots = token_slots(sentence, span);
        let mut hit = false;
        self.scan(&slots, |_, _, _| {
            hit = true;
            false
        });
        hit
    }

    /// Longest phrase (in characters) occurring in free text.
    fn longest_in_text(&self, text: &str) -> Option<usize> {
        let slots = text_slots(text);
        let mut best = None;
        self.scan(&slots, |_, _, p| {
            best = best.max(Some(p.text.len()));
            true
        });
        best
    }
}

/// Does some lexicon phrase occur in the sentence?
pub fn contains_trigger(sentence: &DependencySentence, lexicon: &Lexicon) -> bool {
    if sentence.is_empty() {
        return false;
    }
    lexicon.matches_span(sentence, TokenSpan::new(1, sentence.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    High,
    Low,
    Unknown,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::High => "High",
            Level::Low => "Low",
            Level::Unknown => "Unknown",
        })
    }
}

fn decide(high: Option<usize>, low: Option<usize>) -> Level {
    match (high, low) {
        (Some(_), None) => Level::High,
        (None, Some(_)) => Level::Low,
        (Some(h), Some(l)) if h > l => Level::High,
        (Some(h), Some(l)) if l > h => Level::Low,
        _ => Level::Unknown,
    }
}

#[derive(Debug, Clone)]
pub struct Lexicons {
    by_category: BTreeMap<Category, Lexicon>,
}

impl Lexicons {
    /// Builds the set from (category, file contents) pairs.
    pub fn from_sources<'a>(sources: impl IntoIterator<Item = (Category, &'a str)>) -> Result<Self, LexiconError> {
        let mut by_category = BTreeMap::new();
        for (category, text) in sources {
            by_category.insert(category, Lexicon::parse(category, text)?);
        }
        let missing: Vec<String> = Category::ALL
            .iter()
            .filter(|c| !by_category.contains_key(*c))
            .map(|c| c.file_name())
            .collect();
        if !missing.is_empty() {
            return Err(LexiconError::MissingCategories(missing));
        }
        let set = Lexicons { by_category };
        set.check_levels()?;
        Ok(set)
    }

    fn check_levels(&self) -> Result<(), LexiconError> {
        let key = |p: &str| split_words(p).join(" ");
        let high: BTreeMap<String, &str> = self
            .get(Category::LevelHigh)
            .entries()
            .map(|p| (key(p), p))
            .collect();
        for p in self.get(Category::LevelLow).entries() {
            if let Some(h) = high.get(&key(p)) {
                return Err(LexiconError::LevelOverlap(h.to_string()));
            }
        }
        Ok(())
    }

    pub fn get(&self, category: Category) -> &Lexicon {
        &self.by_category[&category]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Lexicon> {
        self.by_category.values()
    }

    /// Classifies a scale phrase as High or Low. When both lists match, the
    /// longer phrase wins; equal lengths give Unknown.
    pub fn normalize_level(&self, scale_phrase: &str) -> Level {
        decide(
            self.get(Category::LevelHigh).longest_in_text(scale_phrase),
            self.get(Category::LevelLow).longest_in_text(scale_phrase),
        )
    }
}

/// Loads one `<category>.txt` file per category from `dir`.
pub fn load_lexicons(dir: &Path) -> Result<Lexicons, LexiconError> {
    let mut texts = Vec::new();
    let mut missing = Vec::new();
    for c in Category::ALL {
        let path = dir.join(c.file_name());
        if !path.is_file() {
            missing.push(c.file_name());
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        texts.push((c, text));
    }
    if !missing.is_empty() {
        return Err(LexiconError::MissingCategories(missing));
    }
    Lexicons::from_sources(texts.iter().map(|(c, t)| (*c, t.as_str())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::sentence;

    fn sources(high: &str, low: &str) -> Vec<(Category, String)> {
        Category::ALL
            .iter()
            .map(|&c| {
                let text = match c {
                    Category::LevelHigh => high.to_string(),
                    Category::LevelLow => low.to_string(),
                    _ => "placeholder\n".to_string(),
                };
                (c, text)
            })
            .collect()
    }

    fn build(high: &str, low: &str) -> Result<Lexicons, LexiconError> {
        let s = sources(high, low);
        Lexicons::from_sources(s.iter().map(|(c, t)| (*c, t.as_str())))
    }

    #[test]
    fn quoted_level_triggers_load() {
        let lex = build("over-expressed\nincreased\n", "low\ndecreased\ndown-regulated\n").unwrap();
        assert_eq!(lex.normalize_level("increased"), Level::High);
        assert_eq!(lex.normalize_level("down-regulated"), Level::Low);
        assert_eq!(lex.normalize_level("down regulated"), Level::Low);
        assert_eq!(lex.normalize_level(""), Level::Unknown);
    }

    #[test]
    fn overlap_is_rejected() {
        match build("increased\n", "increased\nlow\n") {
            Err(LexiconError::LevelOverlap(p)) => assert_eq!(p, "increased"),
            other => panic!("unexpected {other:?}"),
        }
        // hyphenation variants count as the same phrase
        assert!(matches!(build("up regulated\n", "up-regulated\n"), Err(LexiconError::LevelOverlap(_))));
    }

    #[test]
    fn missing_category_lists_files() {
        let s = sources("a\n", "b\n");
        let err = Lexicons::from_sources(s.iter().skip(1).map(|(c, t)| (*c, t.as_str()))).unwrap_err();
        assert!(err.to_string().contains("sentence_filter.txt"), "{err}");
    }

    #[test]
    fn duplicate_lines_dedup_and_lowercase() {
        let l = Lexicon::parse(Category::Expression, "# c\nExpression\nexpression\n  LEVEL \n").unwrap();
        assert_eq!(l.entries().collect::<Vec<_>>(), vec!["expression", "level"]);
        assert!(matches!(
            Lexicon::parse(Category::Expression, "a b c d e\n"),
            Err(LexiconError::TooLong { line: 1, .. })
        ));
        assert!(matches!(Lexicon::parse(Category::Expression, "# only\n"), Err(LexiconError::Empty(_))));
    }

    #[test]
    fn multiword_order_matters() {
        let s = sentence(&[("tumor", "NN", 2, "compound"), ("growth", "NN", 3, "nsubj"), ("enhanced", "VBD", 0, "root")]);
        assert!(contains_trigger(&s, &Lexicon::new(Category::SentenceFilter, ["tumor growth"])));
        assert!(!contains_trigger(&s, &Lexicon::new(Category::SentenceFilter, ["growth tumor"])));
        assert!(!contains_trigger(&DependencySentence::empty(0), &Lexicon::new(Category::SentenceFilter, ["x"])));
    }

    #[test]
    fn lemma_and_form_both_match() {
        let mut s = sentence(&[("tissues", "NNS", 0, "root")]);
        s.tokens[0].lemma = "tissue".into();
        assert!(contains_trigger(&s, &Lexicon::new(Category::DiseaseSample, ["tissue"])));
        assert!(contains_trigger(&s, &Lexicon::new(Category::DiseaseSample, ["tissues"])));
    }

    #[test]
    fn hyphen_tokenization_variants() {
        let lex = Lexicon::new(Category::LevelLow, ["down-regulated"]);
        let split = sentence(&[("down", "RB", 3, "advmod"), ("-", "HYPH", 3, "punct"), ("regulated", "VBN", 0, "root")]);
        let spaced = sentence(&[("down", "RB", 2, "advmod"), ("regulated", "VBN", 0, "root")]);
        let partial = sentence(&[("regulated", "VBN", 0, "root")]);
        assert!(contains_trigger(&split, &lex));
        assert!(contains_trigger(&spaced, &lex));
        assert!(!contains_trigger(&partial, &lex));
        // phrases never match inside a token
        let inner = sentence(&[("up-regulated", "VBN", 0, "root")]);
        assert!(!contains_trigger(&inner, &Lexicon::new(Category::LevelHigh, ["regulated"])));
    }

    #[test]
    fn longest_phrase_breaks_conflicts() {
        let lex = build("expressed\n", "under expressed\n").unwrap();
        assert_eq!(lex.normalize_level("under expressed"), Level::Low);
        let tie = build("up\n", "lo\n").unwrap();
        assert_eq!(tie.normalize_level("up lo"), Level::Unknown);
    }
}
