mod common;

use gda_core::entities::{collapse_entities, MentionSet};
use gda_core::extraction::{
    classify_and_extract, components, prepare_document, read_jsonl, Components, DiagnosticKind, Level, OutputRow,
    SentenceType, Stage,
};
use gda_core::resources;

struct Expected {
    pmid: &'static str,
    level: Level,
    components: Components,
}

fn table1() -> Vec<Expected> {
    let c = |t, scale: &str, gene: &str, e1: &str, e2: Option<&str>| Components {
        sentence_type: t,
        scale_indicator: scale.into(),
        compared_aspect: gene.into(),
        entity1: e1.into(),
        entity2: e2.map(Into::into),
    };
    vec![
        Expected {
            pmid: "24522888",
            level: Level::High,
            components: c(SentenceType::TypeA, "Elevated", "Sam68", "NSCLC tissues", Some("non-cancerous tissues")),
        },
        Expected {
            pmid: "26025503",
            level: Level::Low,
            components: c(SentenceType::TypeA, "Decreased", "Lynx1", "lung cancers", Some("normal lung")),
        },
        Expected {
            pmid: "20360610",
            level: Level::High,
            components: c(SentenceType::TypeB, "Increased", "EphA2", "NSCLC metastases", None),
        },
        Expected {
            pmid: "25840419",
            level: Level::Low,
            components: c(SentenceType::TypeB, "Lower", "miR-195", "tumor tissues", None),
        },
    ]
}

#[test]
fn table1_components_and_levels() {
    let (docs, pool) = common::corpus("table1");
    let (_, out) = common::run("table1");
    let patterns = resources::builtin_patterns();
    for want in table1() {
        let doc = docs.iter().find(|d| d.pmid == want.pmid).unwrap();
        let prepared = prepare_document(doc, MentionSet::Pool(&pool));
        let sentence = &prepared.sentences[1];
        let cs = classify_and_extract(sentence, &patterns).expect("structure");
        let rec = out.records.iter().find(|r| r.pmid == want.pmid).expect("record");
        assert_eq!(components(sentence, &cs, &rec.gene.symbol), want.components, "pmid {}", want.pmid);
        assert_eq!(rec.level, want.level, "pmid {}", want.pmid);
        assert_eq!(rec.sentence_type, want.components.sentence_type);
    }
    assert_eq!(out.records.len(), 4);
}

#[test]
fn table1_matches_golden_output() {
    let (_, out) = common::run("table1");
    let rows: Vec<OutputRow> = out.records.iter().map(OutputRow::from).collect();
    let golden = read_jsonl(common::read("table1.golden.jsonl").as_bytes()).unwrap();
    assert_eq!(rows, golden);
}

#[test]
fn sentence_types_are_told_apart() {
    let (_, out) = common::run("examples");
    let types = |pmid: &str| -> Vec<SentenceType> {
        out.records.iter().filter(|r| r.pmid == pmid).map(|r| r.sentence_type).collect()
    };
    assert_eq!(types("90000001"), vec![SentenceType::TypeA]);
    assert_eq!(types("90000002"), vec![SentenceType::TypeB; 2]);
    assert!(types("90000003").is_empty());
    assert!(out.diagnostics.iter().any(|d| d.pmid == "90000003"
        && d.sent_id == 1
        && d.stage == Stage::Pattern
        && d.kind == DiagnosticKind::Skip));
}

#[test]
fn split_mirna_is_merged_and_extracted() {
    let (docs, pool) = common::corpus("examples");
    let doc = docs.iter().find(|d| d.pmid == "90000002").unwrap();
    let prepared = prepare_document(doc, MentionSet::Pool(&pool));
    let forms: Vec<&str> = prepared.sentences[1].tokens.iter().map(|t| t.form.as_str()).collect();
    assert!(forms.contains(&"miR-630"));
    assert!(!forms.contains(&"630"));
    let (_, out) = common::run("examples");
    assert!(out.records.iter().any(|r| r.pmid == "90000002" && r.gene.symbol == "miR-630" && r.level == Level::Low));
}

#[test]
fn plasma_example_collapses_to_three_entities() {
    let (docs, pool) = common::corpus("examples");
    let lexicons = resources::builtin_lexicons();
    let doc = docs.iter().find(|d| d.pmid == "90000005").unwrap();
    let prepared = prepare_document(doc, MentionSet::Pool(&pool));
    let s = &prepared.sentences[1];
    let spans = collapse_entities(s, &prepared.mentions[1], &lexicons);
    let texts: Vec<&str> = spans.iter().map(|sp| s.span_text(*sp)).collect();
    assert_eq!(texts, vec!["Plasma miR-187", "OSCC patients", "normal individuals"]);
}

#[test]
fn entities_carry_disease_from_sentence_or_title() {
    let (_, out) = common::run("table1");
    let from: Vec<(&str, &str)> = out
        .records
        .iter()
        .map(|r| (r.pmid.as_str(), r.disease.name.as_str()))
        .collect();
    assert_eq!(
        from,
        vec![
            ("20360610", "NSCLC"),
            ("24522888", "NSCLC"),
            ("25840419", "non-small cell lung cancer"),
            ("26025503", "lung cancers"),
        ]
    );
}
