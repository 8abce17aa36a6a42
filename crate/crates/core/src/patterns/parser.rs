use std::collections::HashSet;

use super::{
    AnchoredRegex, AttrTest, Attribute, DepPattern, NodeConstraint, PatternError, PatternNode, RelConstraint,
    RelKind,
};

/// Parses pattern source into a pattern with an empty id and priority 0.
pub fn parse_pattern(source: &str) -> Result<DepPattern, PatternError> {
    let mut p = Parser::new(source);
    p.skip_ws();
    let root = p.element()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.syntax("a relation or end of pattern", &format!("`{c}`")));
    }
    Ok(DepPattern {
        id: String::new(),
        priority: 0,
        root,
    })
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    captures: HashSet<String>,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            captures: HashSet::new(),
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of pattern".into(),
        }
    }

    fn syntax(&self, expected: &str, found: &str) -> PatternError {
        PatternError::Syntax {
            line: self.line,
            column: self.column,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PatternError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&format!("`{c}`"), &self.found()))
        }
    }

    fn element(&mut self) -> Result<PatternNode, PatternError> {
        let mut head = self.node()?;
        loop {
            self.skip_ws();
            let Some(rel) = self.relation()? else { break };
            self.skip_ws();
            let child = match self.peek() {
                Some('(') => {
                    self.bump();
                    self.skip_ws();
                    let inner = self.element()?;
                    self.skip_ws();
                    self.expect(')')?;
                    inner
                }
                Some('{') => self.node()?,
                _ => return Err(self.syntax("a node `{...}` or `(`", &self.found())),
            };
            head.children.push((rel, child));
        }
        Ok(head)
    }

    fn relation(&mut self) -> Result<Option<RelConstraint>, PatternError> {
        let kind = match (self.peek(), self.peek_at(1)) {
            (Some('>'), Some('>')) => RelKind::AncestorOf,
            (Some('<'), Some('<')) => RelKind::DescendantOf,
            (Some('>'), _) => RelKind::GovernorOf,
            (Some('<'), _) => RelKind::DependentOf,
            _ => return Ok(None),
        };
        for _ in 0..kind.symbol().len() {
            self.bump();
        }
        let deprel = if self.peek() == Some('/') {
            Some(self.regex(false)?)
        } else {
            None
        };
        Ok(Some(RelConstraint { kind, deprel }))
    }

    fn regex(&mut self, ignore_case: bool) -> Result<AnchoredRegex, PatternError> {
        let (line, column) = (self.line, self.column);
        self.expect('/')?;
        let mut src = String::new();
        loop {
            match self.bump() {
                None => return Err(self.syntax("closing `/`", "end of pattern")),
                Some('/') => break,
                Some('\\') => {
                    src.push('\\');
                    match self.bump() {
                        Some(c) => src.push(c),
                        None => return Err(self.syntax("closing `/`", "end of pattern")),
                    }
                }
                Some(c) => src.push(c),
            }
        }
        AnchoredRegex::new(&src, ignore_case).map_err(|e| PatternError::Regex {
            line,
            column,
            message: e.to_string(),
        })
    }

    fn name(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            let ok = if s.is_empty() {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn node(&mut self) -> Result<PatternNode, PatternError> {
        let (line, column) = (self.line, self.column);
        self.expect('{')?;
        let mut tests: Vec<AttrTest> = Vec::new();
        self.skip_ws();
        if self.peek() != Some('}') {
            loop {
                self.skip_ws();
                let (aline, acol) = (self.line, self.column);
                let name = self.name();
                let Some(attribute) = Attribute::from_name(&name) else {
                    let found = if name.is_empty() { self.found() } else { format!("`{name}`") };
                    return Err(PatternError::Syntax {
                        line: aline,
                        column: acol,
                        expected: "an attribute (lemma, pos, deprel, form)".into(),
                        found,
                    });
                };
                if tests.iter().any(|t| t.attribute == attribute) {
                    return Err(PatternError::DuplicateAttribute {
                        line: aline,
                        column: acol,
                        attribute: name,
                    });
                }
                self.skip_ws();
                self.expect(':')?;
                self.skip_ws();
                let regex = self.regex(attribute == Attribute::Lemma)?;
                tests.push(AttrTest { attribute, regex });
                self.skip_ws();
                match self.peek() {
                    Some(';') => {
                        self.bump();
                    }
                    Some('}') => break,
                    _ => return Err(self.syntax("`;` or `}`", &self.found())),
                }
            }
        }
        self.expect('}')?;
        let capture = if self.peek() == Some('=') {
            self.bump();
            let (cl, cc) = (self.line, self.column);
            let name = self.name();
            if name.is_empty() {
                return Err(self.syntax("a capture name", &self.found()));
            }
            if !self.captures.insert(name.clone()) {
                return Err(PatternError::DuplicateCapture {
                    line: cl,
                    column: cc,
                    name,
                });
            }
            Some(name)
        } else {
            None
        };
        if tests.is_empty() && capture.is_none() {
            return Err(PatternError::EmptyNode { line, column });
        }
        Ok(PatternNode::leaf(NodeConstraint { tests, capture }))
    }
}
