#![allow(dead_code)]

use std::path::PathBuf;

use gda_core::corpus::{parse_conllu, AbstractDoc};
use gda_core::entities::{parse_pubtator, AnnotationPool, EntityMention, EntityType, MentionSource};
use gda_core::extraction::{CorpusOutput, Extractor};
use gda_core::entities::MentionSet;
use gda_core::resources;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn corpus(stem: &str) -> (Vec<AbstractDoc>, AnnotationPool) {
    let docs = parse_conllu(&read(&format!("{stem}.conllu"))).unwrap();
    let batch = parse_pubtator(&read(&format!("{stem}.pubtator"))).unwrap();
    (docs, AnnotationPool::new(batch.mentions))
}

pub mod oracle;

pub fn run(stem: &str) -> (Vec<AbstractDoc>, CorpusOutput) {
    let (docs, pool) = corpus(stem);
    let patterns = resources::builtin_patterns();
    let lexicons = resources::builtin_lexicons();
    let ex = Extractor {
        patterns: &patterns,
        lexicons: &lexicons,
        mentions: MentionSet::Pool(&pool),
        doid: None,
    };
    let out = ex.run(&docs);
    (docs, out)
}

/// (form, lemma, xpos, head, deprel)
pub type Row<'a> = (&'a str, &'a str, &'a str, usize, &'a str);

/// A one-document corpus: the first sentence is the title. Tokens are
/// joined by single spaces, so offsets are generated.
pub fn build_doc(pmid: &str, sentences: &[&[Row]]) -> AbstractDoc {
    let mut out = String::new();
    let mut base = 0;
    for (sid, rows) in sentences.iter().enumerate() {
        let text = rows.iter().map(|r| r.0).collect::<Vec<_>>().join(" ");
        if sid == 0 {
            out.push_str(&format!("# pmid = {pmid}\n"));
        }
        out.push_str(&format!("# sent_id = {sid}\n# text = {text}\n"));
        let mut pos = base;
        for (i, (form, lemma, xpos, head, deprel)) in rows.iter().enumerate() {
            let end = pos + form.len();
            out.push_str(&format!("{}\t{form}\t{lemma}\tX\t{xpos}\t_\t{head}\t{deprel}\t_\tstart={pos}|end={end}\n", i + 1));
            pos = end + 1;
        }
        out.push('\n');
        base += text.len() + 1;
    }
    let mut docs = parse_conllu(&out).unwrap();
    assert_eq!(docs.len(), 1);
    docs.pop().unwrap()
}

pub fn mention(doc: &AbstractDoc, sent_id: usize, surface: &str, etype: EntityType, id: &str) -> EntityMention {
    let s = doc.sentence(sent_id).unwrap();
    let i = s.text.find(surface).unwrap();
    EntityMention {
        pmid: doc.pmid.clone(),
        char_start: s.base_offset() + i,
        char_end: s.base_offset() + i + surface.len(),
        surface: surface.to_string(),
        etype,
        norm_id: Some(id.to_string()),
        source: MentionSource::Pubtator,
    }
}
