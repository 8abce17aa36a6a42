//! Dependency-parsed abstracts: tokens, sentences and documents.
//!
//! Token offsets are byte offsets into the abstract text, which is the title
//! followed by a single space and the abstract body (the PubTator convention).
//! A sentence's `text` starts at the byte offset of its first token.

mod conllu;
mod retokenize;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conllu::{load_conllu, parse_conllu, write_conllu};
pub use retokenize::{retokenize_mirna, RetokenizeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    /// Always lowercase.
    pub lemma: String,
    pub upos: String,
    /// Penn tag, when the parser provided one.
    pub xpos: Option<String>,
    /// Index of the governor, 0 for the root.
    pub head: usize,
    pub deprel: String,
    pub char_start: usize,
    pub char_end: usize,
}

impl Token {
    /// The tag patterns test: XPOS when present, else UPOS.
    pub fn pos(&self) -> &str {
        self.xpos.as_deref().unwrap_or(&self.upos)
    }

    pub fn char_range(&self) -> Range<usize> {
        self.char_start..self.char_end
    }
}

/// Inclusive range of 1-based token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TokenSpan {
    pub first: usize,
    pub last: usize,
}

impl TokenSpan {
    pub fn new(first: usize, last: usize) -> Self {
        debug_assert!(first >= 1 && first <= last);
        TokenSpan { first, last }
    }

    pub fn single(index: usize) -> Self {
        TokenSpan::new(index, index)
    }

    #[allow(clippy::len_without_is_empty)] // spans hold at least one token
    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn contains(&self, index: usize) -> bool {
        self.first <= index && index <= self.last
    }

    pub fn contains_span(&self, other: &TokenSpan) -> bool {
        self.first <= other.first && other.last <= self.last
    }

    pub fn overlaps(&self, other: &TokenSpan) -> bool {
        self.first <= other.last && other.first <= self.last
    }

    pub fn union(&self, other: &TokenSpan) -> TokenSpan {
        TokenSpan::new(self.first.min(other.first), self.last.max(other.last))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        self.first..=self.last
    }
}

impl fmt::Display for TokenSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.first, self.last)
    }
}

/// Violations of the sentence tree and offset invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("token {found} is out of sequence (expected index {expected})")]
    Index { expected: usize, found: usize },
    #[error("no root token")]
    NoRoot,
    #[error("multiple root tokens: {0:?}")]
    MultipleRoots(Vec<usize>),
    #[error("token {0} is its own head")]
    SelfLoop(usize),
    #[error("token {token} has head {head}, which does not exist")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("head structure contains a cycle through token {0}")]
    Cycle(usize),
    #[error("token {token}: {reason}")]
    Offsets { token: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencySentence {
    pub sent_id: usize,
    pub tokens: Vec<Token>,
    pub text: String,
}

impl DependencySentence {
    /// Builds a sentence, checking the tree and offset invariants.
    pub fn new(sent_id: usize, text: String, tokens: Vec<Token>) -> Result<Self, TreeError> {
        validate(&text, &tokens)?;
        Ok(DependencySentence {
            sent_id,
            tokens,
            text,
        })
    }

    /// A sentence with no tokens. Never produced by the loader.
    pub fn empty(sent_id: usize) -> Self {
        DependencySentence {
            sent_id,
            tokens: Vec::new(),
            text: String::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    pub fn root(&self) -> Option<usize> {
        self.tokens.iter().find(|t| t.head == 0).map(|t| t.index)
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &Token> + '_ {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    /// Ancestors from the direct head upwards, excluding the root marker 0.
    pub fn ancestors(&self, index: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.token(index).head;
        while cur != 0 && out.len() < self.tokens.len() {
            out.push(cur);
            cur = self.token(cur).head;
        }
        out
    }

    pub fn is_ancestor(&self, ancestor: usize, index: usize) -> bool {
        self.ancestors(index).contains(&ancestor)
    }

    /// All tokens dominated by `index`, including itself, in index order.
    pub fn subtree(&self, index: usize) -> Vec<usize> {
        self.tokens
            .iter()
            .filter(|t| t.index == index || self.is_ancestor(index, t.index))
            .map(|t| t.index)
            .collect()
    }

    /// Smallest span covering the subtree of `index`.
    pub fn subtree_span(&self, index: usize) -> TokenSpan {
        let sub = self.subtree(index);
        TokenSpan::new(sub[0], *sub.last().unwrap())
    }

    /// Byte offset of the sentence text within the abstract text.
    pub fn base_offset(&self) -> usize {
        self.tokens.first().map_or(0, |t| t.char_start)
    }

    /// Abstract-level byte range covered by the tokens.
    pub fn char_range(&self) -> Range<usize> {
        match (self.tokens.first(), self.tokens.last()) {
            (Some(a), Some(b)) => a.char_start..b.char_end,
            _ => 0..0,
        }
    }

    /// Slice of the sentence text for an abstract-level byte range.
    pub fn text_at(&self, range: Range<usize>) -> &str {
        let base = self.base_offset();
        &self.text[range.start - base..range.end - base]
    }

    pub fn span_chars(&self, span: TokenSpan) -> Range<usize> {
        self.token(span.first).char_start..self.token(span.last).char_end
    }

    pub fn span_text(&self, span: TokenSpan) -> &str {
        self.text_at(self.span_chars(span))
    }

    /// Tokens overlapping an abstract-level byte range.
    pub fn tokens_overlapping(&self, range: Range<usize>) -> Option<TokenSpan> {
        let mut hit = self
            .tokens
            .iter()
            .filter(|t| t.char_start < range.end && range.start < t.char_end)
            .map(|t| t.index);
        let first = hit.next()?;
        let last = hit.next_back().unwrap_or(first);
        Some(TokenSpan::new(first, last))
    }
}

fn validate(text: &str, tokens: &[Token]) -> Result<(), TreeError> {
    if tokens.is_empty() {
        return Err(TreeError::NoRoot);
    }
    let n = tokens.len();
    let base = tokens[0].char_start;
    let mut prev_end = None;
    let mut roots = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.index != i + 1 {
            return Err(TreeError::Index {
                expected: i + 1,
                found: t.index,
            });
        }
        if t.head == t.index {
            return Err(TreeError::SelfLoop(t.index));
        }
        if t.head > n {
            return Err(TreeError::HeadOutOfRange {
                token: t.index,
                head: t.head,
            });
        }
        if t.head == 0 {
            roots.push(t.index);
        }
        let offsets = |reason: String| TreeError::Offsets {
            token: t.index,
            reason,
        };
        if t.char_start >= t.char_end {
            return Err(offsets(format!("empty offsets {}..{}", t.char_start, t.char_end)));
        }
        if let Some(end) = prev_end {
            if t.char_start < end {
                return Err(offsets(format!("offset {} overlaps the previous token", t.char_start)));
            }
        }
        prev_end = Some(t.char_end);
        let (s, e) = (t.char_start - base, t.char_end - base);
        if e > text.len() {
            return Err(offsets(format!("offsets {}..{} run past the sentence text", t.char_start, t.char_end)));
        }
        if !text.is_char_boundary(s) || !text.is_char_boundary(e) {
            return Err(offsets(format!("offsets {}..{} split a UTF-8 character", t.char_start, t.char_end)));
        }
    }
    match roots.len() {
        0 => return Err(TreeError::NoRoot),
        1 => {}
        _ => return Err(TreeError::MultipleRoots(roots)),
    }
    for t in tokens {
        let mut cur = t.head;
        let mut steps = 0;
        while cur != 0 {
            steps += 1;
            if steps > n {
                return Err(TreeError::Cycle(t.index));
            }
            cur = tokens[cur - 1].head;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractDoc {
    pub pmid: String,
    pub title: DependencySentence,
    pub sentences: Vec<DependencySentence>,
}

impl AbstractDoc {
    /// Title first, then the body in order.
    pub fn all_sentences(&self) -> impl Iterator<Item = &DependencySentence> {
        std::iter::once(&self.title).chain(self.sentences.iter())
    }

    pub fn sentence(&self, sent_id: usize) -> Option<&DependencySentence> {
        if sent_id == 0 {
            Some(&self.title)
        } else {
            self.sentences.get(sent_id - 1)
        }
    }

    /// The first body sentence (sent_id 1).
    pub fn first_sentence(&self) -> Option<&DependencySentence> {
        self.sentences.first()
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("pmid {pmid}: duplicate sent_id {sent_id} (line {line})")]
    DuplicateSentId {
        pmid: String,
        sent_id: usize,
        line: usize,
    },
    #[error("pmid {pmid}: sent_ids are not consecutive from 0 (missing {missing})")]
    MissingSentence { pmid: String, missing: usize },
    #[error("pmid {pmid}, sent_id {sent_id}: {source}")]
    InvalidTree {
        pmid: String,
        sent_id: usize,
        #[source]
        source: TreeError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
