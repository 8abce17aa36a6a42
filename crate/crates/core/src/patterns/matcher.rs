use std::collections::BTreeSet;

use super::{DepPattern, NodeConstraint, RelConstraint, RelKind};
use crate::corpus::DependencySentence;

/// One distinct assignment of capture names to token indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub pattern_id: String,
    pub sent_id: usize,
    /// Capture name and bound 1-based token index, in declaration order.
    pub bindings: Vec<(String, usize)>,
}

impl MatchResult {
    pub fn get(&self, name: &str) -> Option<usize> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, i)| *i)
    }
}

struct Flat<'p> {
    constraint: &'p NodeConstraint,
    parent: Option<(usize, &'p RelConstraint)>,
}

/// All distinct capture bindings, ordered lexicographically by the bound
/// indices. Pattern nodes bind to pairwise distinct tokens.
pub fn match_pattern(pattern: &DepPattern, sentence: &DependencySentence) -> Vec<MatchResult> {
    if sentence.is_empty() {
        return Vec::new();
    }
    let nodes: Vec<Flat> = pattern
        .root
        .preorder()
        .into_iter()
        .map(|(n, parent)| Flat {
            constraint: &n.constraint,
            parent,
        })
        .collect();
    let children: Vec<Vec<usize>> = (0..=sentence.len())
        .map(|i| sentence.children(i).map(|t| t.index).collect())
        .collect();

    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut assignment = vec![0usize; nodes.len()];
    search(&nodes, sentence, &children, 0, &mut assignment, &mut found);

    let names: Vec<String> = pattern.captures().into_iter().map(String::from).collect();
    found
        .into_iter()
        .map(|idx| MatchResult {
            pattern_id: pattern.id.clone(),
            sent_id: sentence.sent_id,
            bindings: names.iter().cloned().zip(idx).collect(),
        })
        .collect()
}

fn search(
    nodes: &[Flat],
    s: &DependencySentence,
    children: &[Vec<usize>],
    k: usize,
    assignment: &mut [usize],
    found: &mut BTreeSet<Vec<usize>>,
) {
    if k == nodes.len() {
        let bound = nodes
            .iter()
            .zip(assignment.iter())
            .filter(|(n, _)| n.constraint.capture.is_some())
            .map(|(_, &i)| i)
            .collect();
        found.insert(bound);
        return;
    }
    let node = &nodes[k];
    let candidates: Vec<usize> = match node.parent {
        None => (1..=s.len()).collect(),
        Some((p, rel)) => related(s, children, assignment[p], rel),
    };
    for c in candidates {
        if assignment[..k].contains(&c) || !node.constraint.matches(s.token(c)) {
            continue;
        }
        assignment[k] = c;
        search(nodes, s, children, k + 1, assignment, found);
    }
}

/// Tokens standing in `rel` to the already-bound token `from`.
fn related(s: &DependencySentence, children: &[Vec<usize>], from: usize, rel: &RelConstraint) -> Vec<usize> {
    let label_ok = |token: usize| rel.deprel.as_ref().is_none_or(|r| r.is_match(&s.token(token).deprel));
    match rel.kind {
        RelKind::GovernorOf => children[from].iter().copied().filter(|&c| label_ok(c)).collect(),
        RelKind::DependentOf => {
            let head = s.token(from).head;
            if head != 0 && label_ok(from) {
                vec![head]
            } else {
                Vec::new()
            }
        }
        RelKind::AncestorOf => {
            let mut out = Vec::new();
            for &c in &children[from] {
                if label_ok(c) {
                    collect_subtree(children, c, &mut out);
                }
            }
            out.sort_unstable();
            out
        }
        RelKind::DescendantOf => {
            if label_ok(from) {
                s.ancestors(from)
            } else {
                Vec::new()
            }
        }
    }
}

fn collect_subtree(children: &[Vec<usize>], node: usize, out: &mut Vec<usize>) {
    out.push(node);
    for &c in &children[node] {
        collect_subtree(children, c, out);
    }
}

/// First pattern (by priority, then list order) with a match, with its
/// first match.
pub fn match_first<'p>(
    patterns: &'p [DepPattern],
    sentence: &DependencySentence,
) -> Option<(&'p DepPattern, MatchResult)> {
    let mut order: Vec<&DepPattern> = patterns.iter().collect();
    order.sort_by_key(|p| p.priority);
    order.into_iter().find_map(|p| {
        match_pattern(p, sentence)
            .into_iter()
            .next()
            .map(|m| (p, m))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::sentence;
    use crate::patterns::parse_pattern;

    fn ephrin() -> DependencySentence {
        let mut s = sentence(&[
            ("Expression", "NN", 5, "nsubjpass"),
            ("of", "IN", 1, "prep"),
            ("EphA2", "NN", 2, "pobj"),
            ("is", "VBZ", 5, "auxpass"),
            ("increased", "VBN", 0, "root"),
            ("in", "IN", 5, "prep"),
            ("NSCLC", "NN", 8, "compound"),
            ("metastases", "NNS", 6, "pobj"),
        ]);
        s.tokens[4].lemma = "increase".into();
        s
    }

    #[test]
    fn empty_sentence_has_no_matches() {
        let p = parse_pattern("{}=x").unwrap();
        assert!(match_pattern(&p, &DependencySentence::empty(0)).is_empty());
    }

    #[test]
    fn passive_subject() {
        let p = parse_pattern("{lemma:/increase/}=s >/nsubjpass/ {}=a").unwrap();
        let s = ephrin();
        let m = match_pattern(&p, &s);
        assert_eq!(m.len(), 1);
        assert_eq!(s.token(m[0].get("s").unwrap()).form, "increased");
        assert_eq!(s.token(m[0].get("a").unwrap()).form, "Expression");
    }

    #[test]
    fn ordering_is_lexicographic() {
        let p = parse_pattern("{pos:/NNS?/}=n").unwrap();
        let got: Vec<usize> = match_pattern(&p, &ephrin()).iter().map(|m| m.bindings[0].1).collect();
        assert_eq!(got, vec![1, 3, 7, 8]);
    }

    #[test]
    fn uncaptured_nodes_collapse_duplicates() {
        // two different uncaptured children yield one binding for the parent
        let p = parse_pattern("{lemma:/increase/}=s > {pos:/IN|NN/}").unwrap();
        assert_eq!(match_pattern(&p, &ephrin()).len(), 1);
    }

    #[test]
    fn ancestor_label_applies_to_first_edge() {
        let s = ephrin();
        let p = parse_pattern("{lemma:/increase/} >>/prep/ {}=x").unwrap();
        let got: Vec<usize> = match_pattern(&p, &s).iter().map(|m| m.bindings[0].1).collect();
        assert_eq!(got, vec![6, 7, 8]);
        let p = parse_pattern("{}=x <</compound/ {pos:/IN/}").unwrap();
        let got: Vec<usize> = match_pattern(&p, &s).iter().map(|m| m.bindings[0].1).collect();
        assert_eq!(got, vec![7]);
    }

    #[test]
    fn match_first_prefers_lower_priority_number() {
        let mut a = parse_pattern("{pos:/NN/}=x").unwrap();
        a.id = "a".into();
        a.priority = 5;
        let mut b = parse_pattern("{pos:/VBN/}=x").unwrap();
        b.id = "b".into();
        b.priority = 1;
        let patterns = vec![a, b];
        let (p, _) = match_first(&patterns, &ephrin()).unwrap();
        assert_eq!(p.id, "b");
        assert!(match_first(&[], &ephrin()).is_none());
    }
}
