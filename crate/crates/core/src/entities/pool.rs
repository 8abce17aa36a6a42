use std::collections::{BTreeMap, BTreeSet};

use super::{EntityMention, EntityType, MentionSource};
use crate::corpus::{DependencySentence, TokenSpan};

/// Longest token n-gram tried by the surface scan.
const MAX_NGRAM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolEntry {
    pub etype: EntityType,
    pub norm_id: Option<String>,
    /// More than one identifier shared the top count.
    pub ambiguous: bool,
    pub occurrences: usize,
}

#[derive(Debug, Default)]
struct SurfaceStats {
    etypes: BTreeSet<EntityType>,
    // id -> (count, last load position)
    ids: BTreeMap<Option<String>, (usize, usize)>,
    occurrences: usize,
}

/// All loaded annotations, by pmid and by lowercased surface. Built once,
/// then read-only.
#[derive(Debug, Clone, Default)]
pub struct AnnotationPool {
    by_pmid: BTreeMap<String, Vec<EntityMention>>,
    by_surface: BTreeMap<String, PoolEntry>,
    conflicting: BTreeSet<String>,
}

impl AnnotationPool {
    /// Builds the pool; iteration order is the load order used for ties.
    pub fn new(mentions: impl IntoIterator<Item = EntityMention>) -> Self {
        let mut by_pmid: BTreeMap<String, Vec<EntityMention>> = BTreeMap::new();
        let mut stats: BTreeMap<String, SurfaceStats> = BTreeMap::new();
        for (order, m) in mentions.into_iter().enumerate() {
            let s = stats.entry(m.surface.to_lowercase()).or_default();
            s.etypes.insert(m.etype);
            s.occurrences += 1;
            let e = s.ids.entry(m.norm_id.clone()).or_insert((0, 0));
            e.0 += 1;
            e.1 = order;
            by_pmid.entry(m.pmid.clone()).or_default().push(m);
        }
        for list in by_pmid.values_mut() {
            list.sort_by_key(|m| (m.char_start, m.char_end));
        }
        let mut by_surface = BTreeMap::new();
        let mut conflicting = BTreeSet::new();
        for (surface, s) in stats {
            if s.etypes.len() > 1 {
                conflicting.insert(surface);
                continue;
            }
            let top = s.ids.values().map(|(c, _)| *c).max().unwrap_or(0);
            let tied: Vec<_> = s.ids.iter().filter(|(_, (c, _))| *c == top).collect();
            let (id, _) = tied.iter().max_by_key(|(_, (_, order))| *order).unwrap();
            by_surface.insert(
                surface,
                PoolEntry {
                    etype: *s.etypes.iter().next().unwrap(),
                    norm_id: (*id).clone(),
                    ambiguous: tied.len() > 1,
                    occurrences: s.occurrences,
                },
            );
        }
        AnnotationPool {
            by_pmid,
            by_surface,
            conflicting,
        }
    }

    pub fn mentions_for(&self, pmid: &str) -> &[EntityMention] {
        self.by_pmid.get(pmid).map_or(&[], Vec::as_slice)
    }

    pub fn pmids(&self) -> impl Iterator<Item = &str> {
        self.by_pmid.keys().map(String::as_str)
    }

    /// Case-insensitive surface lookup.
    pub fn lookup(&self, surface: &str) -> Option<&PoolEntry> {
        self.by_surface.get(&surface.to_lowercase())
    }

    /// Surface seen with more than one entity type, hence not pooled.
    pub fn is_conflicting(&self, surface: &str) -> bool {
        self.conflicting.contains(&surface.to_lowercase())
    }

    pub fn surface_count(&self) -> usize {
        self.by_surface.len()
    }

    /// Pooled mentions of the wanted types found by scanning token n-grams,
    /// longest first, without overlaps.
    pub fn scan(&self, pmid: &str, sentence: &DependencySentence, wanted: &[EntityType]) -> Vec<EntityMention> {
        let n = sentence.len();
        let mut taken = vec![false; n + 1];
        let mut out = Vec::new();
        for len in (1..=MAX_NGRAM.min(n)).rev() {
            for first in 1..=n + 1 - len {
                let span = TokenSpan::new(first, first + len - 1);
                if span.indices().any(|i| taken[i]) {
                    continue;
                }
                let surface = sentence.span_text(span);
                let Some(entry) = self.lookup(surface) else { continue };
                if !wanted.contains(&entry.etype) {
                    continue;
                }
                span.indices().for_each(|i| taken[i] = true);
                let range = sentence.span_chars(span);
                out.push(EntityMention {
                    pmid: pmid.to_string(),
                    char_start: range.start,
                    char_end: range.end,
                    surface: surface.to_string(),
                    etype: entry.etype,
                    norm_id: entry.norm_id.clone(),
                    source: MentionSource::Pooled,
                });
            }
        }
        out.sort_by_key(|m| m.char_start);
        out
    }
}
