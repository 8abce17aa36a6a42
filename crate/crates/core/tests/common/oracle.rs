//! Brute-force reference for the pattern matcher: random small trees and
//! patterns, matched by enumerating every injective assignment.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gda_core::corpus::{DependencySentence, Token};

pub const FORMS: [&str; 5] = ["A", "b", "Be", "c", "bB"];
pub const POS: [&str; 3] = ["NN", "VBN", "JJ"];
pub const DEPRELS: [&str; 4] = ["nsubj", "prep", "pobj", "amod"];

type TokenTest = fn(&Token) -> bool;
type LabelTest = fn(&str) -> bool;

/// Node constraint sources with their meaning written out by hand.
pub const NODE_TESTS: [(&str, TokenTest); 7] = [
    ("", |_| true),
    ("pos:/NN/", |t| t.pos() == "NN"),
    ("pos:/VBN|JJ/", |t| t.pos() == "VBN" || t.pos() == "JJ"),
    ("lemma:/B.*/", |t| t.form.to_lowercase().starts_with('b')),
    ("form:/b.*/", |t| t.form.starts_with('b')),
    ("deprel:/prep|pobj/", |t| t.deprel == "prep" || t.deprel == "pobj"),
    ("pos:/NN/;form:/[Ab]/", |t| t.pos() == "NN" && (t.form == "A" || t.form == "b")),
];

pub const REL_LABELS: [(&str, LabelTest); 3] = [
    ("", |_| true),
    ("/prep/", |d| d == "prep"),
    ("/nsubj|amod/", |d| d == "nsubj" || d == "amod"),
];

pub const REL_KINDS: [&str; 4] = [">", "<", ">>", "<<"];

/// `pick(n)` returns a value in `0..n`.
pub type Pick<'a> = dyn FnMut(usize) -> usize + 'a;

pub fn random_tree(pick: &mut Pick, max_len: usize) -> DependencySentence {
    let n = 1 + pick(max_len);
    let mut pool: Vec<usize> = (1..=n).collect();
    let mut order = Vec::with_capacity(n);
    while !pool.is_empty() {
        order.push(pool.remove(pick(pool.len())));
    }
    let mut heads = vec![0; n + 1];
    for k in 1..n {
        heads[order[k]] = order[pick(k)];
    }
    let mut text = String::new();
    let mut tokens = Vec::with_capacity(n);
    for i in 1..=n {
        if i > 1 {
            text.push(' ');
        }
        let form = FORMS[pick(FORMS.len())];
        let start = text.len();
        text.push_str(form);
        tokens.push(Token {
            index: i,
            form: form.to_string(),
            lemma: form.to_lowercase(),
            upos: "X".into(),
            xpos: Some(POS[pick(POS.len())].to_string()),
            head: heads[i],
            deprel: if heads[i] == 0 { "root".into() } else { DEPRELS[pick(DEPRELS.len())].to_string() },
            char_start: start,
            char_end: text.len(),
        });
    }
    DependencySentence::new(0, text, tokens).expect("generated tree is valid")
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub parent: usize,
    pub child: usize,
    pub kind: usize,
    pub label: usize,
}

#[derive(Debug, Clone)]
pub struct GenPattern {
    /// Per node: index into `NODE_TESTS` and whether it is captured.
    pub nodes: Vec<(usize, bool)>,
    pub edges: Vec<Edge>,
    pub source: String,
}

/// One to `max_nodes` (at most 3) nodes: a star on the first node or a chain.
pub fn random_pattern(pick: &mut Pick, max_nodes: usize) -> GenPattern {
    let k = 1 + pick(max_nodes.min(3));
    // an uncaptured node needs at least one attribute test
    let nodes: Vec<(usize, bool)> = (0..k)
        .map(|_| (pick(NODE_TESTS.len()), pick(4) != 0))
        .map(|(t, cap)| (if cap || t > 0 { t } else { 1 }, cap))
        .collect();
    let star = pick(2) == 0;
    let mut edge = |parent, child| Edge {
        parent,
        child,
        kind: pick(REL_KINDS.len()),
        label: pick(REL_LABELS.len()),
    };
    let (edges, nested) = match k {
        1 => (vec![], false),
        2 => (vec![edge(0, 1)], false),
        _ => {
            if star {
                (vec![edge(0, 1), edge(0, 2)], false)
            } else {
                (vec![edge(0, 1), edge(1, 2)], true)
            }
        }
    };
    let node = |i: usize| {
        let (t, cap) = nodes[i];
        let mut s = format!("{{{}}}", NODE_TESTS[t].0);
        if cap {
            s.push_str(&format!("=n{i}"));
        }
        s
    };
    let rel = |e: &Edge| format!("{}{}", REL_KINDS[e.kind], REL_LABELS[e.label].0);
    let source = match (edges.len(), nested) {
        (0, _) => node(0),
        (1, _) => format!("{} {} {}", node(0), rel(&edges[0]), node(1)),
        (_, false) => format!("{} {} {} {} {}", node(0), rel(&edges[0]), node(1), rel(&edges[1]), node(2)),
        (_, true) => format!("{} {} ({} {} {})", node(0), rel(&edges[0]), node(1), rel(&edges[1]), node(2)),
    };
    GenPattern { nodes, edges, source }
}

fn head(s: &DependencySentence, i: usize) -> usize {
    s.tokens[i - 1].head
}

fn deprel(s: &DependencySentence, i: usize) -> &str {
    &s.tokens[i - 1].deprel
}

/// The child of `a` on the head path from `b`, if `b` is below `a`.
fn child_towards(s: &DependencySentence, a: usize, b: usize) -> Option<usize> {
    let mut c = b;
    loop {
        let h = head(s, c);
        if h == 0 {
            return None;
        }
        if h == a {
            return Some(c);
        }
        c = h;
    }
}

pub fn relation_holds(s: &DependencySentence, kind: usize, label: usize, a: usize, b: usize) -> bool {
    let ok = REL_LABELS[label].1;
    match REL_KINDS[kind] {
        ">" => head(s, b) == a && ok(deprel(s, b)),
        "<" => head(s, a) == b && ok(deprel(s, a)),
        ">>" => child_towards(s, a, b).is_some_and(|c| ok(deprel(s, c))),
        "<<" => child_towards(s, b, a).is_some() && ok(deprel(s, a)),
        _ => unreachable!(),
    }
}

/// Every distinct vector of captured indices, sorted.
pub fn brute_force(p: &GenPattern, s: &DependencySentence) -> Vec<Vec<usize>> {
    let n = s.len();
    let k = p.nodes.len();
    let mut found = BTreeSet::new();
    let mut a = vec![1usize; k];
    loop {
        let distinct = (0..k).all(|i| (i + 1..k).all(|j| a[i] != a[j]));
        let nodes_ok = (0..k).all(|i| NODE_TESTS[p.nodes[i].0].1(&s.tokens[a[i] - 1]));
        let edges_ok = p
            .edges
            .iter()
            .all(|e| relation_holds(s, e.kind, e.label, a[e.parent], a[e.child]));
        if distinct && nodes_ok && edges_ok {
            found.insert((0..k).filter(|&i| p.nodes[i].1).map(|i| a[i]).collect::<Vec<_>>());
        }
        // odometer over 1..=n per node
        let mut i = 0;
        while i < k && a[i] == n {
            a[i] = 1;
            i += 1;
        }
        if i == k {
            break;
        }
        a[i] += 1;
    }
    found.into_iter().collect()
}

/// Indices captured by each result, in result order.
pub fn matcher_indices(p: &GenPattern, s: &DependencySentence) -> Vec<Vec<usize>> {
    let pattern = gda_core::patterns::parse_pattern(&p.source).expect("generated pattern parses");
    gda_core::patterns::match_pattern(&pattern, s)
        .into_iter()
        .map(|m| m.bindings.into_iter().map(|(_, i)| i).collect())
        .collect()
}
