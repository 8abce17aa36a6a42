//! A small Semgrex-style language for dependency-graph patterns.
//!
//! ```text
//! pattern  := element
//! element  := node (rel operand)*
//! operand  := node | "(" element ")"
//! node     := "{" [test (";" test)*] "}" ["=" NAME]
//! test     := ("lemma" | "pos" | "deprel" | "form") ":" "/" REGEX "/"
//! rel      := (">" | "<" | ">>" | "<<") ["/" REGEX "/"]
//! ```
//!
//! Every relation in an element attaches to the element's first node, so
//! `{a} > {b} > {c}` requires `a` to govern both `b` and `c`; parentheses
//! start a nested element. `A > B`: A governs B. `A < B`: A depends on B.
//! `A >> B`: A is an ancestor of B. `A << B`: A is a descendant of B.
//!
//! Regexes are anchored. Lemma tests ignore case. A relation's regex tests
//! the label of the edge next to the left node: for `>>` the first edge on
//! the downward path, for `<<` the left node's own edge.

mod file;
mod matcher;
mod parser;

use std::fmt;

use regex::Regex;
use thiserror::Error;

pub use file::{load_pattern_file, PatternFileError, PatternSet, PatternSetError, REQUIRED_CAPTURES};
pub use matcher::{match_first, match_pattern, MatchResult};
pub use parser::parse_pattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attribute {
    Lemma,
    Pos,
    Deprel,
    Form,
}

impl Attribute {
    pub const ALL: [Attribute; 4] = [Attribute::Lemma, Attribute::Pos, Attribute::Deprel, Attribute::Form];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Lemma => "lemma",
            Attribute::Pos => "pos",
            Attribute::Deprel => "deprel",
            Attribute::Form => "form",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Attribute::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn value(self, token: &crate::corpus::Token) -> &str {
        match self {
            Attribute::Lemma => &token.lemma,
            Attribute::Pos => token.pos(),
            Attribute::Deprel => &token.deprel,
            Attribute::Form => &token.form,
        }
    }
}

/// A full-string regex, remembering the source it was written with.
#[derive(Debug, Clone)]
pub struct AnchoredRegex {
    source: String,
    ignore_case: bool,
    regex: Regex,
}

impl AnchoredRegex {
    pub fn new(source: &str, ignore_case: bool) -> Result<Self, regex::Error> {
        let flags = if ignore_case { "(?i)" } else { "" };
        let regex = Regex::new(&format!("{flags}^(?:{source})$"))?;
        Ok(AnchoredRegex {
            source: source.to_string(),
            ignore_case,
            regex,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_match(&self, value: &str) -> bool {
        self.regex.is_match(value)
    }
}

impl PartialEq for AnchoredRegex {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.ignore_case == other.ignore_case
    }
}

impl Eq for AnchoredRegex {}

impl fmt::Display for AnchoredRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("/")?;
        let mut escaped = false;
        for c in self.source.chars() {
            if c == '/' && !escaped {
                f.write_str("\\")?;
            }
            escaped = c == '\\' && !escaped;
            write!(f, "{c}")?;
        }
        f.write_str("/")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrTest {
    pub attribute: Attribute,
    pub regex: AnchoredRegex,
}

impl AttrTest {
    pub fn new(attribute: Attribute, source: &str) -> Result<Self, regex::Error> {
        Ok(AttrTest {
            attribute,
            regex: AnchoredRegex::new(source, attribute == Attribute::Lemma)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeConstraint {
    pub tests: Vec<AttrTest>,
    pub capture: Option<String>,
}

impl NodeConstraint {
    pub fn matches(&self, token: &crate::corpus::Token) -> bool {
        self.tests
            .iter()
            .all(|t| t.regex.is_match(t.attribute.value(token)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelKind {
    /// `>`
    GovernorOf,
    /// `<`
    DependentOf,
    /// `>>`
    AncestorOf,
    /// `<<`
    DescendantOf,
}

impl RelKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RelKind::GovernorOf => ">",
            RelKind::DependentOf => "<",
            RelKind::AncestorOf => ">>",
            RelKind::DescendantOf => "<<",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelConstraint {
    pub kind: RelKind,
    pub deprel: Option<AnchoredRegex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNode {
    pub constraint: NodeConstraint,
    pub children: Vec<(RelConstraint, PatternNode)>,
}

impl PatternNode {
    pub fn leaf(constraint: NodeConstraint) -> Self {
        PatternNode {
            constraint,
            children: Vec::new(),
        }
    }

    /// Nodes in pre-order with the index of their parent and the relation
    /// leading to them.
    pub fn preorder(&self) -> Vec<(&PatternNode, Option<(usize, &RelConstraint)>)> {
        fn walk<'a>(
            node: &'a PatternNode,
            parent: Option<(usize, &'a RelConstraint)>,
            out: &mut Vec<(&'a PatternNode, Option<(usize, &'a RelConstraint)>)>,
        ) {
            let me = out.len();
            out.push((node, parent));
            for (rel, child) in &node.children {
                walk(child, Some((me, rel)), out);
            }
        }
        let mut out = Vec::new();
        walk(self, None, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepPattern {
    pub id: String,
    /// Lower is tried first.
    pub priority: i64,
    pub root: PatternNode,
}

impl DepPattern {
    /// Capture names in declaration (pre-)order.
    pub fn captures(&self) -> Vec<&str> {
        self.root
            .preorder()
            .into_iter()
            .filter_map(|(n, _)| n.constraint.capture.as_deref())
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.root.preorder().len()
    }
}

impl fmt::Display for NodeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.tests.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}:{}", t.attribute.name(), t.regex)?;
        }
        f.write_str("}")?;
        if let Some(name) = &self.capture {
            write!(f, "={name}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PatternNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constraint)?;
        for (rel, child) in &self.children {
            write!(f, " {}", rel.kind.symbol())?;
            if let Some(r) = &rel.deprel {
                write!(f, "{r}")?;
            }
            if child.children.is_empty() {
                write!(f, " {child}")?;
            } else {
                write!(f, " ({child})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for DepPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{column}: invalid regex: {message}")]
    Regex {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: duplicate capture name `{name}`")]
    DuplicateCapture {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: node has neither attribute tests nor a capture name")]
    EmptyNode { line: usize, column: usize },
    #[error("{line}:{column}: attribute `{attribute}` tested twice in one node")]
    DuplicateAttribute {
        line: usize,
        column: usize,
        attribute: String,
    },
}

impl PatternError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            PatternError::Syntax { line, column, .. }
            | PatternError::Regex { line, column, .. }
            | PatternError::DuplicateCapture { line, column, .. }
            | PatternError::EmptyNode { line, column }
            | PatternError::DuplicateAttribute { line, column, .. } => (*line, *column),
        }
    }
}
