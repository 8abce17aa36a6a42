use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

use super::{ArgumentTyping, DiseaseSource, PreparedDoc};
use crate::entities::{is_specific_disease, EntityMention};
use crate::lexicons::{contains_trigger, Category, Lexicons};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiseaseHit {
    pub mention: EntityMention,
    pub sent_id: usize,
    pub source: DiseaseSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no specific disease mention in the entities, title, first sentence or methods sentences")]
pub struct NoDiseaseFound;

fn first_specific(doc: &PreparedDoc, sent_id: usize, lexicons: &Lexicons) -> Option<EntityMention> {
    let sentence = doc.sentences.get(sent_id)?;
    doc.mentions[sent_id]
        .iter()
        .find(|m| is_specific_disease(sentence, m, lexicons))
        .cloned()
}

/// The disease of a candidate found in sentence `sent_id`: a specific
/// disease inside the compared entities, else the first one in the title,
/// the first body sentence, then the first methods-like sentence.
pub fn infer_disease(
    typing: &ArgumentTyping,
    sent_id: usize,
    doc: &PreparedDoc,
    lexicons: &Lexicons,
) -> Result<DiseaseHit, NoDiseaseFound> {
    let in_entities = typing
        .entity1
        .specific_disease
        .or_else(|| typing.entity2.as_ref().and_then(|e| e.specific_disease));
    if let Some(i) = in_entities {
        return Ok(DiseaseHit {
            mention: doc.mentions[sent_id][i].clone(),
            sent_id,
            source: DiseaseSource::Sentence,
        });
    }
    for (sid, source) in [(0, DiseaseSource::Title), (1, DiseaseSource::FirstSentence)] {
        if let Some(mention) = first_specific(doc, sid, lexicons) {
            return Ok(DiseaseHit {
                mention,
                sent_id: sid,
                source,
            });
        }
    }
    let investigation = lexicons.get(Category::Investigation);
    let analyzed = lexicons.get(Category::Analyzed);
    for (sid, sentence) in doc.sentences.iter().enumerate().skip(1) {
        if !(contains_trigger(sentence, investigation) || contains_trigger(sentence, analyzed)) {
            continue;
        }
        if let Some(mention) = first_specific(doc, sid, lexicons) {
            return Ok(DiseaseHit {
                mention,
                sent_id: sid,
                source: DiseaseSource::Methods,
            });
        }
    }
    Err(NoDiseaseFound)
}

#[derive(Debug, Error)]
pub enum DoidMapError {
    #[error("line {line}: expected `MEDIC_ID<tab>DOID`")]
    Malformed { line: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// MEDIC to DOID identifiers from a two-column TSV.
#[derive(Debug, Clone, Default)]
pub struct DoidMap {
    map: HashMap<String, String>,
}

impl DoidMap {
    pub fn load<R: BufRead>(reader: R) -> Result<Self, DoidMapError> {
        let mut map = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t').map(str::trim);
            let (Some(medic), Some(doid)) = (cols.next(), cols.next()) else {
                return Err(DoidMapError::Malformed { line: i + 1 });
            };
            if i == 0 && medic.eq_ignore_ascii_case("medic_id") {
                continue;
            }
            if medic.is_empty() || doid.is_empty() {
                return Err(DoidMapError::Malformed { line: i + 1 });
            }
            map.insert(medic.to_string(), doid.to_string());
        }
        Ok(DoidMap { map })
    }

    /// Looks the id up as given, then with the `MESH:` prefix toggled.
    pub fn get(&self, medic: &str) -> Option<&str> {
        let alt = match medic.strip_prefix("MESH:") {
            Some(bare) => bare.to_string(),
            None => format!("MESH:{medic}"),
        };
        self.map.get(medic).or_else(|| self.map.get(&alt)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
