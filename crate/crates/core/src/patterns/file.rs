use thiserror::Error;

use super::{parse_pattern, DepPattern, PatternError};

#[derive(Debug, Error)]
pub enum PatternFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("pattern `{id}` at line {line}, column {column}: {source}")]
    Pattern {
        id: String,
        line: usize,
        column: usize,
        #[source]
        source: PatternError,
    },
}

struct Stanza {
    line: usize,
    id: Option<String>,
    priority: Option<i64>,
    pattern: Option<(usize, String)>,
}

/// Reads a pattern file: stanzas of `id:`, `priority:` and `pattern:` keys
/// separated by blank lines. Indented lines continue the preceding
/// `pattern:` value. Patterns come back sorted by priority, ties in file
/// order.
pub fn load_pattern_file(text: &str) -> Result<Vec<DepPattern>, PatternFileError> {
    let mut stanzas = Vec::new();
    let mut cur: Option<Stanza> = None;
    let mut in_pattern = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if let Some(s) = cur.take() {
                stanzas.push(s);
            }
            in_pattern = false;
            continue;
        }
        let indented = raw.starts_with([' ', '\t']);
        if indented && in_pattern {
            let (_, body) = cur.as_mut().unwrap().pattern.as_mut().unwrap();
            body.push('\n');
            body.push_str(raw);
            continue;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(PatternFileError::Format {
                line,
                message: format!("expected `key: value`, found `{trimmed}`"),
            });
        };
        let stanza = cur.get_or_insert(Stanza {
            line,
            id: None,
            priority: None,
            pattern: None,
        });
        let value = value.trim();
        let dup = |k: &str| PatternFileError::Format {
            line,
            message: format!("duplicate `{k}` key in stanza"),
        };
        in_pattern = false;
        match key.trim() {
            "id" => {
                if stanza.id.replace(value.to_string()).is_some() {
                    return Err(dup("id"));
                }
            }
            "priority" => {
                let p = value.parse().map_err(|_| PatternFileError::Format {
                    line,
                    message: format!("priority `{value}` is not an integer"),
                })?;
                if stanza.priority.replace(p).is_some() {
                    return Err(dup("priority"));
                }
            }
            "pattern" => {
                if stanza.pattern.is_some() {
                    return Err(dup("pattern"));
                }
                // keep the column of the value so error positions map back
                let offset = raw.find(':').unwrap() + 1;
                let body = format!("{}{}", " ".repeat(offset), &raw[offset..]);
                stanza.pattern = Some((line, body));
                in_pattern = true;
            }
            other => {
                return Err(PatternFileError::Format {
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    if let Some(s) = cur.take() {
        stanzas.push(s);
    }

    let mut out: Vec<DepPattern> = Vec::with_capacity(stanzas.len());
    for s in stanzas {
        let missing = |k: &str| PatternFileError::Format {
            line: s.line,
            message: format!("stanza is missing `{k}`"),
        };
        let id = s.id.clone().ok_or_else(|| missing("id"))?;
        let priority = s.priority.ok_or_else(|| missing("priority"))?;
        let (pline, body) = s.pattern.ok_or_else(|| missing("pattern"))?;
        if out.iter().any(|p| p.id == id) {
            return Err(PatternFileError::Format {
                line: s.line,
                message: format!("duplicate pattern id `{id}`"),
            });
        }
        let mut pattern = parse_pattern(&body).map_err(|source| {
            let (l, c) = source.position();
            PatternFileError::Pattern {
                id: id.clone(),
                line: pline + l - 1,
                column: c,
                source,
            }
        })?;
        pattern.id = id;
        pattern.priority = priority;
        out.push(pattern);
    }
    out.sort_by_key(|p| p.priority);
    Ok(out)
}

/// Captures every extraction pattern must declare.
pub const REQUIRED_CAPTURES: [&str; 3] = ["scale", "aspect", "entity1"];

#[derive(Debug, Error)]
pub enum PatternSetError {
    #[error("{file}: {source}")]
    File {
        file: String,
        #[source]
        source: Box<PatternFileError>,
    },
    #[error("pattern `{id}` does not capture `{capture}`")]
    MissingCapture { id: String, capture: String },
    #[error("TypeB pattern `{id}` captures `entity2`")]
    SecondEntityInTypeB { id: String },
    #[error("pattern id `{id}` is used in both pattern files")]
    DuplicateId { id: String },
}

/// The TypeA and TypeB pattern lists, each sorted by priority.
#[derive(Debug, Clone)]
pub struct PatternSet {
    pub type_a: Vec<DepPattern>,
    pub type_b: Vec<DepPattern>,
}

impl PatternSet {
    pub fn from_sources(type_a: &str, type_b: &str) -> Result<Self, PatternSetError> {
        let load = |name: &str, text: &str| {
            load_pattern_file(text).map_err(|source| PatternSetError::File {
                file: name.to_string(),
                source: Box::new(source),
            })
        };
        let set = PatternSet {
            type_a: load("typeA.dp", type_a)?,
            type_b: load("typeB.dp", type_b)?,
        };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<(), PatternSetError> {
        for (p, is_a) in self.type_a.iter().map(|p| (p, true)).chain(self.type_b.iter().map(|p| (p, false))) {
            let caps = p.captures();
            let needed = REQUIRED_CAPTURES.iter().chain(is_a.then_some(&"entity2"));
            for c in needed {
                if !caps.contains(c) {
                    return Err(PatternSetError::MissingCapture {
                        id: p.id.clone(),
                        capture: c.to_string(),
                    });
                }
            }
            if !is_a && caps.contains(&"entity2") {
                return Err(PatternSetError::SecondEntityInTypeB { id: p.id.clone() });
            }
        }
        for a in &self.type_a {
            if self.type_b.iter().any(|b| b.id == a.id) {
                return Err(PatternSetError::DuplicateId { id: a.id.clone() });
            }
        }
        Ok(())
    }

    /// TypeA patterns followed by TypeB patterns.
    pub fn all(&self) -> impl Iterator<Item = &DepPattern> {
        self.type_a.iter().chain(self.type_b.iter())
    }
}
