use std::collections::BTreeMap;

use super::{detect_mirna, AnnotationPool, EntityMention, EntityType};
use crate::corpus::DependencySentence;

/// Where per-document annotations come from.
#[derive(Debug, Clone, Copy)]
pub enum MentionSet<'a> {
    /// PubTator annotations, with pooled fallback.
    Pool(&'a AnnotationPool),
    /// Mentions supplied with the ground truth; no fallback.
    Supplied(&'a BTreeMap<String, Vec<EntityMention>>),
}

impl MentionSet<'_> {
    fn for_pmid(&self, pmid: &str) -> &[EntityMention] {
        match self {
            MentionSet::Pool(p) => p.mentions_for(pmid),
            MentionSet::Supplied(m) => m.get(pmid).map_or(&[], Vec::as_slice),
        }
    }
}

/// Mentions inside one sentence: document annotations, regex miRNAs, and
/// pooled matches for entity types the annotations lack entirely. Overlaps
/// keep the longest mention, then the better-ranked source.
pub fn resolve_mentions(set: MentionSet<'_>, pmid: &str, sentence: &DependencySentence) -> Vec<EntityMention> {
    if sentence.is_empty() {
        return Vec::new();
    }
    let bounds = sentence.char_range();
    let mut found: Vec<EntityMention> = Vec::new();
    for m in set.for_pmid(pmid) {
        if m.char_start < bounds.start || m.char_end > bounds.end {
            continue;
        }
        if sentence.text.get(m.char_start - bounds.start..m.char_end - bounds.start) != Some(m.surface.as_str()) {
            log::warn!("pmid {pmid}: mention `{}` at {}..{} disagrees with the corpus text", m.surface, m.char_start, m.char_end);
            continue;
        }
        found.push(m.clone());
    }

    if let MentionSet::Pool(pool) = set {
        let mut wanted = Vec::new();
        if !found.iter().any(|m| m.etype.is_gene_like()) {
            wanted.extend([EntityType::Gene, EntityType::MiRNA]);
        }
        if !found.iter().any(|m| m.etype == EntityType::Disease) {
            wanted.push(EntityType::Disease);
        }
        if !wanted.is_empty() {
            found.extend(pool.scan(pmid, sentence, &wanted));
        }
    }
    found.extend(detect_mirna(pmid, &sentence.text, bounds.start));
    resolve_overlaps(found)
}

fn resolve_overlaps(mut all: Vec<EntityMention>) -> Vec<EntityMention> {
    all.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then(a.source.cmp(&b.source))
            .then(a.char_start.cmp(&b.char_start))
    });
    let mut kept: Vec<EntityMention> = Vec::new();
    for m in all {
        if !kept.iter().any(|k| k.overlaps(&m)) {
            kept.push(m);
        }
    }
    kept.sort_by_key(|m| m.char_start);
    kept
}
