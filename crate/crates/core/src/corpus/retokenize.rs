use std::ops::Range;

use thiserror::Error;

use super::{DependencySentence, Token, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RetokenizeError {
    #[error("span {0:?} does not align with token boundaries")]
    Misaligned(Range<usize>),
    #[error("span {0:?} overlaps another span")]
    Overlapping(Range<usize>),
    #[error("span {span:?} has {roots} internal roots")]
    MultipleRoots { span: Range<usize>, roots: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Merges the tokens covered by each byte span into a single token.
///
/// The merged token takes its head, relation and tags from the one token in
/// the span whose head lies outside it. Heads pointing into the span are
/// re-pointed at the merged token.
pub fn retokenize_mirna(
    sentence: &DependencySentence,
    spans: &[Range<usize>],
) -> Result<DependencySentence, RetokenizeError> {
    let mut spans: Vec<Range<usize>> = spans.to_vec();
    spans.sort_by_key(|r| (r.start, r.end));
    for pair in spans.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(RetokenizeError::Overlapping(pair[1].clone()));
        }
    }

    // group id per old token; groups of one are untouched tokens
    let n = sentence.len();
    let mut group_of = vec![0usize; n + 1];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut covered = vec![None; n + 1];
    for (g, span) in spans.iter().enumerate() {
        let first = sentence.tokens.iter().find(|t| t.char_start == span.start);
        let last = sentence.tokens.iter().find(|t| t.char_end == span.end);
        match (first, last) {
            (Some(f), Some(l)) if f.index <= l.index => {
                for i in f.index..=l.index {
                    covered[i] = Some(g);
                }
            }
            _ => return Err(RetokenizeError::Misaligned(span.clone())),
        }
    }
    let mut span_group: Vec<Option<usize>> = vec![None; spans.len()];
    for i in 1..=n {
        match covered[i] {
            Some(g) if span_group[g].is_some() => {
                let id = span_group[g].unwrap();
                groups[id].push(i);
                group_of[i] = id;
            }
            Some(g) => {
                span_group[g] = Some(groups.len());
                group_of[i] = groups.len();
                groups.push(vec![i]);
            }
            None => {
                group_of[i] = groups.len();
                groups.push(vec![i]);
            }
        }
    }
    if groups.len() == n {
        return Ok(sentence.clone());
    }

    let mut tokens = Vec::with_capacity(groups.len());
    for (gid, members) in groups.iter().enumerate() {
        let roots: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| {
                let h = sentence.token(i).head;
                h == 0 || group_of[h] != gid
            })
            .collect();
        if roots.len() != 1 {
            let span = sentence.token(members[0]).char_start..sentence.token(*members.last().unwrap()).char_end;
            return Err(RetokenizeError::MultipleRoots {
                span,
                roots: roots.len(),
            });
        }
        let root = sentence.token(roots[0]);
        let char_start = sentence.token(members[0]).char_start;
        let char_end = sentence.token(*members.last().unwrap()).char_end;
        let form = if members.len() == 1 {
            root.form.clone()
        } else {
            sentence.text_at(char_start..char_end).to_string()
        };
        let lemma = if members.len() == 1 {
            root.lemma.clone()
        } else {
            form.to_lowercase()
        };
        tokens.push(Token {
            index: gid + 1,
            form,
            lemma,
            upos: root.upos.clone(),
            xpos: root.xpos.clone(),
            head: if root.head == 0 { 0 } else { group_of[root.head] + 1 },
            deprel: root.deprel.clone(),
            char_start,
            char_end,
        });
    }
    Ok(DependencySentence::new(sentence.sent_id, sentence.text.clone(), tokens)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::sentence;

    fn chars(s: &DependencySentence, first: usize, last: usize) -> Range<usize> {
        s.token(first).char_start..s.token(last).char_end
    }

    #[test]
    fn single_token_span_is_identity() {
        let s = sentence(&[("a", "NN", 2, "dep"), ("b", "VB", 0, "root")]);
        assert_eq!(retokenize_mirna(&s, &[chars(&s, 1, 1)]).unwrap(), s);
    }

    #[test]
    fn misaligned_span() {
        let s = sentence(&[("abc", "NN", 2, "dep"), ("d", "VB", 0, "root")]);
        assert!(matches!(
            retokenize_mirna(&s, &[1..3]),
            Err(RetokenizeError::Misaligned(_))
        ));
    }

    #[test]
    fn two_internal_roots() {
        let s = sentence(&[("a", "NN", 3, "dep"), ("b", "NN", 3, "dep"), ("c", "VB", 0, "root")]);
        assert!(matches!(
            retokenize_mirna(&s, &[chars(&s, 1, 2)]),
            Err(RetokenizeError::MultipleRoots { roots: 2, .. })
        ));
    }

    /// Enumerates every head vector over the merged token set and keeps the
    /// ones that are valid trees preserving all edges crossing the span.
    fn brute_force_heads(s: &DependencySentence, first: usize, last: usize) -> Vec<Vec<usize>> {
        let n = s.len();
        let map = |i: usize| -> usize {
            if i == 0 {
                0
            } else if i < first {
                i
            } else if i <= last {
                first
            } else {
                i - (last - first)
            }
        };
        let m = n - (last - first);
        let mut found = Vec::new();
        let mut heads = vec![0usize; m];
        loop {
            let tree_ok = {
                let roots = heads.iter().filter(|&&h| h == 0).count();
                let acyclic = (0..m).all(|i| {
                    let mut cur = heads[i];
                    let mut steps = 0;
                    while cur != 0 && steps <= m {
                        if cur == i + 1 {
                            return false;
                        }
                        cur = heads[cur - 1];
                        steps += 1;
                    }
                    cur == 0
                });
                roots == 1 && acyclic
            };
            let edges_ok = s.tokens.iter().all(|t| {
                let (d, h) = (map(t.index), map(t.head));
                d == h || heads[d - 1] == h
            });
            if tree_ok && edges_ok {
                found.push(heads.clone());
            }
            // odometer over 0..=m for each position
            let mut k = 0;
            loop {
                if k == m {
                    return found;
                }
                heads[k] += 1;
                if heads[k] <= m {
                    break;
                }
                heads[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn merge_matches_unique_brute_force_tree() {
        // token 3 heads token 2, token 4 heads token 3
        let s = sentence(&[
            ("w1", "NN", 4, "nsubj"),
            ("miR", "NN", 3, "compound"),
            ("630", "CD", 4, "dobj"),
            ("w4", "VB", 0, "root"),
            ("w5", "NN", 4, "dobj"),
        ]);
        let merged = retokenize_mirna(&s, &[chars(&s, 2, 3)]).unwrap();
        let oracle = brute_force_heads(&s, 2, 3);
        assert_eq!(oracle.len(), 1);
        let heads: Vec<usize> = merged.tokens.iter().map(|t| t.head).collect();
        assert_eq!(heads, oracle[0]);
        assert_eq!(merged.token(2).form, "miR 630");
        assert_eq!(merged.token(2).head, 3);
        assert_eq!(merged.token(2).deprel, "dobj");
    }

    #[test]
    fn mirna_hyphen_tokens_merge() {
        let text = "miR-630 was down-regulated".to_string();
        let tok = |i: usize, form: &str, s: usize, h: usize, rel: &str| Token {
            index: i,
            form: form.into(),
            lemma: form.to_lowercase(),
            upos: "X".into(),
            xpos: None,
            head: h,
            deprel: rel.into(),
            char_start: s,
            char_end: s + form.len(),
        };
        let s = DependencySentence::new(
            1,
            text,
            vec![
                tok(1, "miR", 0, 3, "compound"),
                tok(2, "-", 3, 3, "punct"),
                tok(3, "630", 4, 5, "nsubjpass"),
                tok(4, "was", 8, 5, "auxpass"),
                tok(5, "down-regulated", 12, 0, "root"),
            ],
        )
        .unwrap();
        let merged = retokenize_mirna(&s, &[0..7]).unwrap();
        assert_eq!(merged.len(), 3);
        assert_eq!(merged.token(1).form, "miR-630");
        assert_eq!(merged.token(1).lemma, "mir-630");
        assert_eq!(merged.token(1).deprel, "nsubjpass");
        assert_eq!(merged.token(1).head, 3);
    }
}
